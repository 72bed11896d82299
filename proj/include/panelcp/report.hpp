#pragma once

#include <json.hpp>
#include <string>

#include "panelcp/asymptotic_test.hpp"
#include "panelcp/change_point.hpp"
#include "panelcp/empirical.hpp"
#include "panelcp/errors.hpp"
#include "panelcp/simulation.hpp"
#include "panelcp/tables.hpp"

namespace panelcp {

using Json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

inline Json to_json(const TestDiagnostics& d) {
  Json j;
  if (d.bandwidth) j["h"] = *d.bandwidth;
  if (d.kernel) j["kernel"] = *d.kernel;
  j["sample_count"] = d.sample_count;
  j["seed"] = d.seed;
  j["degenerate_draws"] = d.degenerate_draws;
  j["workers"] = d.workers;
  return j;
}

inline Json to_json(const TestReport& report) {
  return Json{{"method", to_string(report.method)},
              {"statistic", report.statistic},
              {"alpha", report.alpha},
              {"critical_value", report.critical_value},
              {"p_value", report.p_value},
              {"reject", report.reject},
              {"tau_hat", report.tau_hat},
              {"diagnostics", to_json(report.diagnostics)}};
}

inline Json to_json(const ChangePointEstimate& estimate) {
  Json objective = Json::array();
  for (Eigen::Index k = 0; k < estimate.objective.size(); ++k) {
    objective.push_back(estimate.objective[k]);
  }
  return Json{{"tau_hat", estimate.tau_hat},
              {"first_candidate", 2},
              {"objective", objective}};
}

inline Json to_json(const EmpiricalDistribution& distribution) {
  Json j;
  j["size"] = distribution.size();
  j["n_infinite"] = distribution.n_infinite();
  j["sample"] = distribution.sample();
  return j;
}

inline Json to_json(const ScenarioResult& result) {
  Json histogram = Json::object();
  for (const auto& [tau, count] : result.tau_hat_histogram) {
    histogram[std::to_string(tau)] = count;
  }
  return Json{{"rejection_rate_asymptotic", result.rejection_rate_asymptotic},
              {"rejection_rate_bootstrap", result.rejection_rate_bootstrap},
              {"tau_hat_histogram", histogram},
              {"degenerate_asymptotic", result.degenerate_asymptotic},
              {"degenerate_bootstrap", result.degenerate_bootstrap},
              {"failures_asymptotic", result.failures_asymptotic},
              {"failures_bootstrap", result.failures_bootstrap},
              {"reps", result.reps},
              {"wall_seconds", result.wall_seconds}};
}

inline const char* to_string(ErrorProcess process) {
  switch (process) {
    case ErrorProcess::iid:
      return "iid";
    case ErrorProcess::ar1:
      return "ar1";
    case ErrorProcess::garch:
      return "garch";
  }
  return "iid";
}

inline const char* to_string(InnovationKind innovation) {
  return innovation == InnovationKind::std_normal ? "normal" : "t5";
}

inline Json to_json(const TableCellResult& cell) {
  return Json{{"T", cell.cell.n_time},
              {"N", cell.cell.n_panels},
              {"process", to_string(cell.cell.process)},
              {"innovation", to_string(cell.cell.innovation)},
              {"change_fraction", cell.cell.change_fraction},
              {"tau", cell.cell.tau},
              {"reference_asymptotic", cell.cell.reference_asymptotic},
              {"estimate_asymptotic", cell.estimate_asymptotic},
              {"diff_asymptotic", cell.diff_asymptotic},
              {"reference_bootstrap", cell.cell.reference_bootstrap},
              {"estimate_bootstrap", cell.estimate_bootstrap},
              {"diff_bootstrap", cell.diff_bootstrap},
              {"scenario", to_json(cell.result)}};
}

inline Json to_json(const TableReport& report) {
  Json cells = Json::array();
  for (const auto& cell : report.cells) cells.push_back(to_json(cell));
  return Json{{"table", report.table_id}, {"kind", report.kind},
              {"reps", report.reps},      {"B", report.B},
              {"M", report.M},            {"seed", report.seed},
              {"cells", cells}};
}

inline Json error_json(const Error& error) {
  return Json{{"error", Json{{"code", error.code()}, {"message", error.what()}}}};
}

}  // namespace panelcp
