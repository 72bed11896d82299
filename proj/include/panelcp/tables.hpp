#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "panelcp/errors.hpp"
#include "panelcp/rng.hpp"
#include "panelcp/simulation.hpp"

namespace panelcp {

// One cell of a benchmark grid: a scenario plus the published reference
// rejection rates it is compared against. Reference values for the
// specificity table are non-rejection rates; the power tables carry
// rejection rates.
struct TableCell {
  int n_time = 10;
  int n_panels = 50;
  ErrorProcess process = ErrorProcess::iid;
  InnovationKind innovation = InnovationKind::std_normal;
  double change_fraction = 0.0;
  int tau = 0;  // 0 = no change
  double reference_asymptotic = 0.0;
  double reference_bootstrap = 0.0;
};

struct TableDefinition {
  std::string id;
  std::string kind;  // "specificity" or "power"
  std::vector<TableCell> cells;
};

namespace detail {

inline TableDefinition make_specificity_table() {
  TableDefinition table{"T1", "specificity", {}};
  struct Row {
    int n_time;
    int n_panels;
    InnovationKind innovation;
    double ref[6];  // iid a/b, ar1 a/b, garch a/b
  };
  const Row rows[] = {
      {10, 50, InnovationKind::std_normal,
       {.942, .959, .932, .962, .952, .968}},
      {10, 50, InnovationKind::student_t,
       {.950, .967, .933, .962, .947, .966}},
      {10, 200, InnovationKind::std_normal,
       {.950, .964, .938, .968, .950, .968}},
      {10, 200, InnovationKind::student_t,
       {.950, .964, .934, .964, .941, .963}},
      {25, 50, InnovationKind::std_normal,
       {.945, .961, .933, .965, .947, .963}},
      {25, 50, InnovationKind::student_t,
       {.949, .964, .929, .964, .947, .963}},
      {25, 200, InnovationKind::std_normal,
       {.951, .962, .928, .964, .953, .968}},
      {25, 200, InnovationKind::student_t,
       {.954, .965, .931, .966, .953, .967}},
  };
  const ErrorProcess processes[] = {ErrorProcess::iid, ErrorProcess::ar1,
                                    ErrorProcess::garch};
  for (const Row& row : rows) {
    for (int p = 0; p < 3; ++p) {
      TableCell cell;
      cell.n_time = row.n_time;
      cell.n_panels = row.n_panels;
      cell.innovation = row.innovation;
      cell.process = processes[p];
      cell.reference_asymptotic = row.ref[2 * p];
      cell.reference_bootstrap = row.ref[2 * p + 1];
      table.cells.push_back(cell);
    }
  }
  return table;
}

inline TableDefinition make_power_table() {
  TableDefinition table{"T2", "power", {}};
  struct Row {
    double fraction;
    int n_time;
    int n_panels;
    InnovationKind innovation;
    double ref[6];
  };
  const Row rows[] = {
      {0.33, 10, 50, InnovationKind::std_normal,
       {.23, .06, .26, .07, .19, .05}},
      {0.33, 10, 50, InnovationKind::student_t,
       {.18, .05, .20, .06, .20, .05}},
      {0.33, 10, 200, InnovationKind::std_normal,
       {.45, .05, .48, .05, .39, .05}},
      {0.33, 10, 200, InnovationKind::student_t,
       {.36, .05, .39, .05, .39, .05}},
      {0.33, 25, 50, InnovationKind::std_normal,
       {.38, .05, .39, .05, .31, .05}},
      {0.33, 25, 50, InnovationKind::student_t,
       {.30, .05, .30, .05, .31, .06}},
      {0.33, 25, 200, InnovationKind::std_normal,
       {.68, .05, .70, .05, .58, .05}},
      {0.33, 25, 200, InnovationKind::student_t,
       {.56, .05, .57, .05, .59, .05}},
      {0.66, 10, 50, InnovationKind::std_normal,
       {.45, .39, .49, .46, .38, .10}},
      {0.66, 10, 50, InnovationKind::student_t,
       {.36, .10, .37, .14, .39, .15}},
      {0.66, 10, 200, InnovationKind::std_normal,
       {.77, .59, .81, .93, .68, .05}},
      {0.66, 10, 200, InnovationKind::student_t,
       {.64, .05, .69, .12, .69, .10}},
      {0.66, 25, 50, InnovationKind::std_normal,
       {.69, .08, .70, .11, .58, .05}},
      {0.66, 25, 50, InnovationKind::student_t,
       {.56, .05, .57, .06, .59, .06}},
      {0.66, 25, 200, InnovationKind::std_normal,
       {.95, .06, .96, .05, .91, .05}},
      {0.66, 25, 200, InnovationKind::student_t,
       {.87, .05, .89, .05, .91, .05}},
      {1.00, 10, 50, InnovationKind::std_normal,
       {.64, .92, .67, .84, .56, .58}},
      {1.00, 10, 50, InnovationKind::student_t,
       {.52, .37, .55, .45, .55, .55}},
      {1.00, 10, 200, InnovationKind::std_normal,
       {.93, 1.00, .95, 1.00, .87, .77}},
      {1.00, 10, 200, InnovationKind::student_t,
       {.85, .36, .87, .74, .87, .72}},
      {1.00, 25, 50, InnovationKind::std_normal,
       {.87, .84, .88, .85, .79, .11}},
      {1.00, 25, 50, InnovationKind::student_t,
       {.76, .08, .77, .11, .79, .20}},
      {1.00, 25, 200, InnovationKind::std_normal,
       {1.00, .97, 1.00, .97, .99, .05}},
      {1.00, 25, 200, InnovationKind::student_t,
       {.98, .05, .98, .05, .99, .07}},
  };
  const ErrorProcess processes[] = {ErrorProcess::iid, ErrorProcess::ar1,
                                    ErrorProcess::garch};
  for (const Row& row : rows) {
    for (int p = 0; p < 3; ++p) {
      TableCell cell;
      cell.n_time = row.n_time;
      cell.n_panels = row.n_panels;
      cell.innovation = row.innovation;
      cell.process = processes[p];
      cell.change_fraction = row.fraction;
      cell.tau = row.n_time / 2;
      cell.reference_asymptotic = row.ref[2 * p];
      cell.reference_bootstrap = row.ref[2 * p + 1];
      table.cells.push_back(cell);
    }
  }
  return table;
}

inline TableDefinition make_early_change_table() {
  TableDefinition table{"T3", "power", {}};
  struct Row {
    int n_time;
    int n_panels;
    int tau;
    double ref_asym;
    double ref_boot;
  };
  const Row rows[] = {
      {10, 50, 3, .56, .08},
      {10, 200, 3, .87, .05},
      {25, 50, 5, .63, .05},
      {25, 200, 5, .92, .05},
  };
  for (const Row& row : rows) {
    TableCell cell;
    cell.n_time = row.n_time;
    cell.n_panels = row.n_panels;
    cell.change_fraction = 1.0;
    cell.tau = row.tau;
    cell.reference_asymptotic = row.ref_asym;
    cell.reference_bootstrap = row.ref_boot;
    table.cells.push_back(cell);
  }
  return table;
}

}  // namespace detail

inline const TableDefinition& specificity_table() {
  static const TableDefinition table = detail::make_specificity_table();
  return table;
}

inline const TableDefinition& power_table() {
  static const TableDefinition table = detail::make_power_table();
  return table;
}

inline const TableDefinition& early_change_table() {
  static const TableDefinition table = detail::make_early_change_table();
  return table;
}

inline const TableDefinition& table_by_id(const std::string& id) {
  if (id == "T1") return specificity_table();
  if (id == "T2") return power_table();
  if (id == "T3") return early_change_table();
  throw InvalidArgumentError("unknown table id '" + id + "' (expected T1, T2, or T3)");
}

struct TableRunOptions {
  double scale = 1.0;  // reps = ceil(5000 * scale), B and M = ceil(2000 * scale)
  int reps = 0;        // nonzero values override the scaled defaults
  int B = 0;
  int M = 0;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

struct TableCellResult {
  TableCell cell;
  ScenarioResult result;
  // estimated rates in the reference convention (non-rejection for the
  // specificity table, rejection for the power tables)
  double estimate_asymptotic = 0.0;
  double estimate_bootstrap = 0.0;
  double diff_asymptotic = 0.0;
  double diff_bootstrap = 0.0;
};

struct TableReport {
  std::string table_id;
  std::string kind;
  int reps = 0;
  int B = 0;
  int M = 0;
  std::uint64_t seed = 0;
  std::vector<TableCellResult> cells;
};

inline ScenarioSpec scenario_for_cell(const TableCell& cell,
                                      const TableRunOptions& options,
                                      std::uint64_t cell_seed) {
  ScenarioSpec spec;
  spec.n_time = cell.n_time;
  spec.n_panels = cell.n_panels;
  switch (cell.process) {
    case ErrorProcess::iid:
      spec.process = ProcessSpec::iid();
      break;
    case ErrorProcess::ar1:
      spec.process = ProcessSpec::ar1(0.3);
      break;
    case ErrorProcess::garch:
      spec.process = ProcessSpec::garch(1.0, 0.1, 0.2);
      break;
  }
  spec.innovation = cell.innovation == InnovationKind::std_normal
                        ? InnovationSpec::normal()
                        : InnovationSpec::student(5);
  spec.tau = cell.tau;
  spec.change_fraction = cell.change_fraction;
  spec.delta_law = DeltaLaw::uniform(1.0, 3.0);
  spec.alpha = 0.05;
  spec.kernel = KernelSpec::parzen(2.0);
  spec.weight_exponent = 2.0;
  spec.reps = options.reps > 0
                  ? options.reps
                  : static_cast<int>(std::ceil(5000.0 * options.scale));
  spec.B = options.B > 0 ? options.B
                         : static_cast<int>(std::ceil(2000.0 * options.scale));
  spec.M = options.M > 0 ? options.M
                         : static_cast<int>(std::ceil(2000.0 * options.scale));
  if (spec.B < 100) spec.B = 100;
  if (spec.M < 100) spec.M = 100;
  spec.seed = cell_seed;
  spec.workers = options.workers;
  return spec;
}

// Reruns every cell of a benchmark grid and reports the estimated rates
// next to the published references with absolute differences.
inline TableReport reproduce_table(const std::string& table_id,
                                   const TableRunOptions& options = {}) {
  const TableDefinition& table = table_by_id(table_id);
  TableReport report;
  report.table_id = table.id;
  report.kind = table.kind;
  report.seed = options.seed;

  for (std::size_t c = 0; c < table.cells.size(); ++c) {
    const TableCell& cell = table.cells[c];
    const std::uint64_t cell_seed =
        derive_seed(options.seed, stream_tag::kTableCell, c);
    const ScenarioSpec spec = scenario_for_cell(cell, options, cell_seed);
    if (report.cells.empty()) {
      report.reps = spec.reps;
      report.B = spec.B;
      report.M = spec.M;
    }
    const ScenarioResult result = run_scenario(spec);

    TableCellResult out;
    out.cell = cell;
    out.result = result;
    const bool specificity = table.kind == "specificity";
    out.estimate_asymptotic = specificity
                                  ? 1.0 - result.rejection_rate_asymptotic
                                  : result.rejection_rate_asymptotic;
    out.estimate_bootstrap = specificity
                                 ? 1.0 - result.rejection_rate_bootstrap
                                 : result.rejection_rate_bootstrap;
    out.diff_asymptotic =
        std::abs(out.estimate_asymptotic - cell.reference_asymptotic);
    out.diff_bootstrap =
        std::abs(out.estimate_bootstrap - cell.reference_bootstrap);
    report.cells.push_back(std::move(out));
  }
  return report;
}

}  // namespace panelcp
