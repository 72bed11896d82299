// Command line driver: test | estimate | simulate | critval.
// Reports are JSON documents on stdout (or --out); errors are JSON
// objects on stderr with a stable code and a nonzero exit status.

#include <CLI11.hpp>
#include <panelcp/panelcp.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using panelcp::Json;

struct CommonFlags {
  double alpha = 0.05;
  std::uint64_t seed = 0;
  double h = 0.0;  // 0 = kernel default
  std::string kernel = "parzen";
  double weight_exponent = 2.0;
  int B = 2000;
  int M = 2000;
  std::string transform = "none";
  std::string premium_path;
  bool transpose = false;
  bool has_header = false;
  std::string delimiter = ",";
  unsigned workers = 0;
  std::string out_path;
  bool embed_distribution = false;
};

void add_io_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--transform", flags.transform, "Input transform")
      ->check(CLI::IsMember({"none", "log", "premium"}));
  cmd->add_option("--premium", flags.premium_path,
                  "Premium grid for --transform premium");
  cmd->add_flag("--transpose", flags.transpose,
                "Input file has time in rows, panels in columns");
  cmd->add_flag("--header", flags.has_header, "Skip a header row");
  cmd->add_option("--delimiter", flags.delimiter, "Cell delimiter")
      ->check(CLI::Validator(
          [](std::string& s) {
            return s.size() == 1 ? std::string{} : std::string{"expected a single character"};
          },
          "CHAR"));
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags,
                      bool with_engine = true) {
  cmd->set_help_flag("--help", "Print help");  // frees --h for the bandwidth
  cmd->add_option("--alpha", flags.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0).description("(0, 1) exclusive"))
      ->check(CLI::Validator(
          [](std::string& s) {
            const double v = std::stod(s);
            return (v > 0.0 && v < 1.0) ? std::string{}
                                        : std::string{"alpha must lie strictly in (0, 1)"};
          },
          "ALPHA"));
  cmd->add_option("--seed", flags.seed, "Master seed");
  cmd->add_option("--workers", flags.workers, "Worker threads (0 = all cores)");
  cmd->add_option("--out", flags.out_path, "Write the report to this file");
  if (with_engine) {
    cmd->add_option("--h", flags.h, "Kernel window width (default 2 for parzen, T for trivial)");
    cmd->add_option("--kernel", flags.kernel, "Lag kernel")
        ->check(CLI::IsMember({"parzen", "trivial"}));
    cmd->add_option("--weight-exponent", flags.weight_exponent,
                    "q in the estimator weights w(t) = t^q");
    cmd->add_option("--B", flags.B, "Bootstrap replications")->check(CLI::PositiveNumber);
    cmd->add_option("--M", flags.M, "Limit-law Monte-Carlo draws")->check(CLI::PositiveNumber);
  }
}

panelcp::IngestOptions ingest_options(const CommonFlags& flags) {
  panelcp::IngestOptions options;
  options.has_header = flags.has_header;
  options.delimiter = flags.delimiter[0];
  options.transpose = flags.transpose;
  if (flags.transform == "log") {
    options.transform = panelcp::Transform::log;
  } else if (flags.transform == "premium") {
    options.transform = panelcp::Transform::premium_normalize;
    if (flags.premium_path.empty()) {
      throw panelcp::InvalidArgumentError(
          "--transform premium requires --premium <path>");
    }
    options.premium_path = flags.premium_path;
  }
  return options;
}

panelcp::KernelSpec kernel_spec(const CommonFlags& flags, int n_time) {
  if (flags.kernel == "trivial") {
    return panelcp::KernelSpec::trivial(flags.h > 0.0 ? flags.h
                                                      : static_cast<double>(n_time));
  }
  return panelcp::KernelSpec::parzen(flags.h > 0.0 ? flags.h : 2.0);
}

Json input_digest(const std::string& path, const panelcp::PanelMatrix& data,
                  const CommonFlags& flags) {
  return Json{{"path", path},
              {"n_panels", data.n_panels()},
              {"n_time", data.n_time()},
              {"transform", flags.transform},
              {"transpose", flags.transpose}};
}

Json flags_digest(const CommonFlags& flags) {
  return Json{{"alpha", flags.alpha},
              {"seed", flags.seed},
              {"h", flags.h},
              {"kernel", flags.kernel},
              {"weight_exponent", flags.weight_exponent},
              {"B", flags.B},
              {"M", flags.M},
              {"transform", flags.transform},
              {"workers", flags.workers}};
}

void emit(const Json& report, const CommonFlags& flags) {
  if (!flags.out_path.empty()) {
    std::ofstream file(flags.out_path);
    if (!file) {
      throw panelcp::FileError("cannot write '" + flags.out_path + "'");
    }
    file << report.dump(2) << '\n';
  } else {
    std::cout << report.dump(2) << '\n';
  }
}

double elapsed_ms(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

int run_test(const std::string& data_path, const std::string& method,
             const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const panelcp::PanelMatrix data =
      panelcp::load_panel_csv(data_path, ingest_options(flags));

  Json results = Json::array();
  if (method == "asymptotic" || method == "both") {
    panelcp::AsymptoticConfig config;
    config.alpha = flags.alpha;
    config.weight_exponent = flags.weight_exponent;
    config.kernel = kernel_spec(flags, data.n_time());
    config.M = flags.M;
    config.seed = flags.seed;
    config.workers = flags.workers;
    results.push_back(panelcp::to_json(panelcp::asymptotic_test(data, config)));
  }
  if (method == "bootstrap" || method == "both") {
    panelcp::BootstrapConfig config;
    config.alpha = flags.alpha;
    config.B = flags.B;
    config.seed = flags.seed;
    config.weight_exponent = flags.weight_exponent;
    config.workers = flags.workers;
    if (flags.embed_distribution) {
      const auto boot = panelcp::bootstrap_distribution(data, config);
      Json json = panelcp::to_json(panelcp::bootstrap_test(data, config));
      json["distribution"] = panelcp::to_json(boot.distribution);
      results.push_back(std::move(json));
    } else {
      results.push_back(panelcp::to_json(panelcp::bootstrap_test(data, config)));
    }
  }

  Json report{{"schema_version", panelcp::kReportSchemaVersion},
              {"command", "test"},
              {"method", method},
              {"input", input_digest(data_path, data, flags)},
              {"flags", flags_digest(flags)},
              {"results", results},
              {"timing_ms", elapsed_ms(start)}};
  emit(report, flags);
  return 0;
}

int run_estimate(const std::string& data_path, const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const panelcp::PanelMatrix data =
      panelcp::load_panel_csv(data_path, ingest_options(flags));
  const panelcp::WeightScheme weights =
      panelcp::WeightScheme::power(data.n_time(), flags.weight_exponent);
  const panelcp::ChangePointEstimate estimate =
      panelcp::estimate_change_point(data, weights);

  Json json = panelcp::to_json(estimate);
  const double spread =
      estimate.objective.maxCoeff() - estimate.objective.minCoeff();
  if (estimate.objective.maxCoeff() < panelcp::kDegenerateFloor ||
      spread < panelcp::kDegenerateFloor) {
    json["warning"] =
        "objective is flat; data has no usable variation and the tie rule "
        "selected the smallest candidate";
  }

  Json report{{"schema_version", panelcp::kReportSchemaVersion},
              {"command", "estimate"},
              {"input", input_digest(data_path, data, flags)},
              {"flags", flags_digest(flags)},
              {"estimate", json},
              {"timing_ms", elapsed_ms(start)}};
  emit(report, flags);
  return 0;
}

int run_simulate(const std::string& table_id, const std::string& spec_path,
                 double scale, int reps, const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  Json payload;
  if (!table_id.empty()) {
    panelcp::TableRunOptions options;
    options.scale = scale;
    options.reps = reps;
    options.B = flags.B;
    options.M = flags.M;
    options.seed = flags.seed;
    options.workers = flags.workers;
    payload = panelcp::to_json(panelcp::reproduce_table(table_id, options));
  } else {
    std::ifstream file(spec_path);
    if (!file) {
      throw panelcp::FileError("cannot open scenario spec '" + spec_path + "'");
    }
    Json spec_json = Json::parse(file);
    panelcp::ScenarioSpec spec;
    spec.n_time = spec_json.value("T", 10);
    spec.n_panels = spec_json.value("N", 50);
    const std::string process = spec_json.value("process", "iid");
    if (process == "ar1") {
      spec.process = panelcp::ProcessSpec::ar1(spec_json.value("phi", 0.3));
    } else if (process == "garch") {
      spec.process = panelcp::ProcessSpec::garch(
          spec_json.value("alpha0", 1.0), spec_json.value("alpha1", 0.1),
          spec_json.value("beta1", 0.2));
    }
    const std::string innovation = spec_json.value("innovation", "normal");
    spec.innovation = innovation == "normal"
                          ? panelcp::InnovationSpec::normal()
                          : panelcp::InnovationSpec::student(
                                spec_json.value("dof", 5));
    spec.sigma = spec_json.value("sigma", 1.0);
    spec.tau = spec_json.value("tau", 0);
    spec.change_fraction = spec_json.value("change_fraction", 0.0);
    if (spec_json.contains("delta_fixed")) {
      spec.delta_law =
          panelcp::DeltaLaw::fixed(spec_json["delta_fixed"].get<double>());
    } else {
      spec.delta_law = panelcp::DeltaLaw::uniform(
          spec_json.value("delta_lo", 1.0), spec_json.value("delta_hi", 3.0));
    }
    spec.reps = reps > 0 ? reps : spec_json.value("reps", 1000);
    spec.alpha = flags.alpha;
    spec.B = flags.B;
    spec.M = flags.M;
    spec.seed = flags.seed;
    spec.weight_exponent = flags.weight_exponent;
    spec.kernel = kernel_spec(flags, spec.n_time);
    spec.workers = flags.workers;
    payload = panelcp::to_json(panelcp::run_scenario(spec));
    payload["spec"] = spec_json;
  }

  Json report{{"schema_version", panelcp::kReportSchemaVersion},
              {"command", "simulate"},
              {"flags", flags_digest(flags)},
              {"result", payload},
              {"timing_ms", elapsed_ms(start)}};
  emit(report, flags);
  return 0;
}

int run_critval(const std::string& data_path, bool use_iid, double ar1_phi,
                int n_time, int tau, bool gamma_check, const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();

  panelcp::CorrelationStructure structure = [&] {
    if (!data_path.empty()) {
      const panelcp::PanelMatrix data =
          panelcp::load_panel_csv(data_path, ingest_options(flags));
      const panelcp::WeightScheme weights =
          panelcp::WeightScheme::power(data.n_time(), flags.weight_exponent);
      const auto estimate = panelcp::estimate_change_point(data, weights);
      const auto residual_matrix = panelcp::residuals(data, estimate.tau_hat);
      const double sigma2 = panelcp::sigma2_hat(residual_matrix);
      return panelcp::estimate_structure(
          panelcp::rho_hat(residual_matrix, sigma2),
          kernel_spec(flags, data.n_time()), data.n_time());
    }
    if (use_iid) return panelcp::analytic_structure_iid(n_time);
    return panelcp::analytic_structure_ar1(ar1_phi, n_time);
  }();

  const panelcp::CovarianceMatrix lambda = panelcp::build_lambda(structure);
  const auto critical = panelcp::asymptotic_critical_value(
      lambda, flags.alpha, flags.M, flags.seed, flags.workers);

  Json payload{{"T", structure.n_time()},
               {"alpha", flags.alpha},
               {"M", flags.M},
               {"critical_value", critical.critical_value},
               {"degenerate_draws", critical.degenerate_draws},
               {"structure", !data_path.empty() ? "estimated"
                             : use_iid          ? "iid"
                                                : "ar1"}};
  if (flags.embed_distribution) {
    payload["distribution"] = panelcp::to_json(critical.distribution);
  }

  if (gamma_check) {
    const int gamma_tau = tau > 0 ? tau : structure.n_time();
    const panelcp::CovarianceMatrix gamma =
        panelcp::build_gamma(structure, gamma_tau);
    const auto gamma_critical = panelcp::asymptotic_critical_value(
        gamma, flags.alpha, flags.M, panelcp::derive_seed(flags.seed, 0x9C),
        flags.workers);
    payload["gamma_check"] =
        Json{{"tau", gamma_tau},
             {"critical_value", gamma_critical.critical_value},
             {"ks_distance", panelcp::ks_distance(critical.distribution,
                                                  gamma_critical.distribution)}};
  }

  Json report{{"schema_version", panelcp::kReportSchemaVersion},
              {"command", "critval"},
              {"flags", flags_digest(flags)},
              {"result", payload},
              {"timing_ms", elapsed_ms(start)}};
  emit(report, flags);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Common change point testing for short panels"};
  app.set_help_flag("--help", "Print help");
  app.require_subcommand(1);

  CommonFlags flags;

  // test
  auto* test_cmd = app.add_subcommand("test", "Run the change point test(s)");
  std::string data_path;
  std::string method = "both";
  test_cmd->add_option("data", data_path, "Panel CSV, rows = panels")->required();
  test_cmd->add_option("--method", method, "Which test to run")
      ->check(CLI::IsMember({"asymptotic", "bootstrap", "both"}));
  test_cmd->add_flag("--embed-distribution", flags.embed_distribution,
                     "Embed the bootstrap sample in the report");
  add_common_flags(test_cmd, flags);
  add_io_flags(test_cmd, flags);

  // estimate
  auto* estimate_cmd =
      app.add_subcommand("estimate", "Estimate the common change point");
  std::string estimate_path;
  estimate_cmd->add_option("data", estimate_path, "Panel CSV, rows = panels")
      ->required();
  add_common_flags(estimate_cmd, flags);
  add_io_flags(estimate_cmd, flags);

  // simulate
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Replicate a benchmark grid or scenario");
  std::string table_id;
  std::string spec_path;
  double scale = 1.0;
  int reps = 0;
  simulate_cmd->add_option("--table", table_id, "Benchmark grid id")
      ->check(CLI::IsMember({"T1", "T2", "T3"}));
  simulate_cmd->add_option("--spec", spec_path, "Scenario spec JSON file");
  simulate_cmd->add_option("--scale", scale,
                           "Scales reps/B/M relative to the full design");
  simulate_cmd->add_option("--reps", reps, "Replications per cell (overrides --scale)");
  add_common_flags(simulate_cmd, flags);

  // critval
  auto* critval_cmd = app.add_subcommand(
      "critval", "Simulated critical value of the limit law");
  std::string critval_path;
  bool use_iid = false;
  double ar1_phi = std::numeric_limits<double>::quiet_NaN();
  int n_time = 10;
  int tau = 0;
  bool gamma_check = false;
  critval_cmd->add_option("data", critval_path,
                          "Panel CSV to estimate the correlation structure from");
  critval_cmd->add_flag("--iid", use_iid, "Use the independent-errors structure");
  critval_cmd->add_option("--ar1", ar1_phi, "Use an AR(1) structure with this phi");
  critval_cmd->add_option("--T", n_time, "Dimension for analytic structures");
  critval_cmd->add_option("--tau", tau, "Break position for --gamma-check");
  critval_cmd->add_flag("--gamma-check", gamma_check,
                        "Also simulate the residual-limit law and report the KS distance");
  critval_cmd->add_flag("--embed-distribution", flags.embed_distribution,
                        "Embed the simulated sample in the report");
  add_common_flags(critval_cmd, flags);
  add_io_flags(critval_cmd, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (test_cmd->parsed()) return run_test(data_path, method, flags);
    if (estimate_cmd->parsed()) return run_estimate(estimate_path, flags);
    if (simulate_cmd->parsed()) {
      if (table_id.empty() == spec_path.empty()) {
        throw panelcp::InvalidArgumentError(
            "simulate needs exactly one of --table or --spec");
      }
      return run_simulate(table_id, spec_path, scale, reps, flags);
    }
    if (critval_cmd->parsed()) {
      const bool has_ar1 = !std::isnan(ar1_phi);
      const int sources = (critval_path.empty() ? 0 : 1) + (use_iid ? 1 : 0) +
                          (has_ar1 ? 1 : 0);
      if (sources != 1) {
        throw panelcp::InvalidArgumentError(
            "critval needs exactly one of a data path, --iid, or --ar1");
      }
      if (n_time < 4) {
        throw panelcp::InvalidArgumentError("critval needs --T >= 4");
      }
      return run_critval(critval_path, use_iid, ar1_phi, n_time, tau,
                         gamma_check, flags);
    }
  } catch (const panelcp::Error& error) {
    std::cerr << panelcp::error_json(error).dump(2) << '\n';
    return 1;
  } catch (const std::exception& error) {
    std::cerr << Json{{"error", Json{{"code", "internal"},
                                     {"message", error.what()}}}}
                     .dump(2)
              << '\n';
    return 1;
  }
  return 0;
}
