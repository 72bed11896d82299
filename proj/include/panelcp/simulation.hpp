#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "panelcp/asymptotic_test.hpp"
#include "panelcp/bootstrap.hpp"
#include "panelcp/errors.hpp"
#include "panelcp/panel_data.hpp"
#include "panelcp/parallel.hpp"
#include "panelcp/rng.hpp"

namespace panelcp {

enum class ErrorProcess { iid, ar1, garch };

struct ProcessSpec {
  ErrorProcess kind = ErrorProcess::iid;
  double phi = 0.3;     // AR(1) coefficient
  double alpha0 = 1.0;  // GARCH(1,1) parameters
  double alpha1 = 0.1;
  double beta1 = 0.2;

  static ProcessSpec iid() { return {}; }
  static ProcessSpec ar1(double phi) {
    ProcessSpec s;
    s.kind = ErrorProcess::ar1;
    s.phi = phi;
    return s;
  }
  static ProcessSpec garch(double a0, double a1, double b1) {
    ProcessSpec s;
    s.kind = ErrorProcess::garch;
    s.alpha0 = a0;
    s.alpha1 = a1;
    s.beta1 = b1;
    return s;
  }
};

enum class InnovationKind { std_normal, student_t };

struct InnovationSpec {
  InnovationKind kind = InnovationKind::std_normal;
  int dof = 5;  // student t degrees of freedom

  static InnovationSpec normal() { return {}; }
  static InnovationSpec student(int dof) {
    return {InnovationKind::student_t, dof};
  }
};

enum class DeltaLawKind { uniform_range, fixed_value };

struct DeltaLaw {
  DeltaLawKind kind = DeltaLawKind::uniform_range;
  double lo = 1.0;
  double hi = 3.0;
  double value = 0.0;

  static DeltaLaw uniform(double lo, double hi) {
    return {DeltaLawKind::uniform_range, lo, hi, 0.0};
  }
  static DeltaLaw fixed(double value) {
    return {DeltaLawKind::fixed_value, 0.0, 0.0, value};
  }
};

enum class MuLawKind { zero, fixed_offsets };

// fixed_offsets assigns mu_i = offset * i so panel levels differ; the
// statistic and estimator are invariant to panel levels either way.
struct MuLaw {
  MuLawKind kind = MuLawKind::zero;
  double offset = 0.0;
};

namespace detail {

inline double draw_innovation(Rng& rng, const InnovationSpec& innovation) {
  // Raw draws: no variance standardization, so the t dof and the AR/GARCH
  // recursion set the marginal scale.
  if (innovation.kind == InnovationKind::std_normal) return rng.gaussian();
  return rng.student_t(innovation.dof);
}

inline constexpr int kBurnIn = 500;

}  // namespace detail

// One panel's error vector. The stream is keyed by (seed, panel_index),
// so the triple (master seed, replicate, panel) pins every value once the
// caller derives `seed` from (master seed, replicate).
inline Vector gen_errors(const ProcessSpec& process,
                         const InnovationSpec& innovation, int n_time,
                         std::uint64_t seed, int panel_index) {
  Rng rng = make_stream(seed, stream_tag::kPanelNoise,
                        static_cast<std::uint64_t>(panel_index));
  Vector out(n_time);
  switch (process.kind) {
    case ErrorProcess::iid: {
      for (int t = 0; t < n_time; ++t) {
        out[t] = detail::draw_innovation(rng, innovation);
      }
      return out;
    }
    case ErrorProcess::ar1: {
      if (!(std::abs(process.phi) < 1.0)) {
        throw NonStationaryParamsError("AR(1) needs |phi| < 1");
      }
      double state = 0.0;
      for (int t = 0; t < detail::kBurnIn; ++t) {
        state = process.phi * state + detail::draw_innovation(rng, innovation);
      }
      for (int t = 0; t < n_time; ++t) {
        state = process.phi * state + detail::draw_innovation(rng, innovation);
        out[t] = state;
      }
      return out;
    }
    case ErrorProcess::garch: {
      if (!(process.alpha1 + process.beta1 < 1.0) || process.alpha0 <= 0.0 ||
          process.alpha1 < 0.0 || process.beta1 < 0.0) {
        throw NonStationaryParamsError(
            "GARCH(1,1) needs alpha0 > 0, alpha1, beta1 >= 0, alpha1 + beta1 < 1");
      }
      double var = process.alpha0 / (1.0 - process.alpha1 - process.beta1);
      double eps = 0.0;
      for (int t = 0; t < detail::kBurnIn + n_time; ++t) {
        if (t > 0) {
          var = process.alpha0 + process.alpha1 * eps * eps +
                process.beta1 * var;
        }
        eps = std::sqrt(var) * detail::draw_innovation(rng, innovation);
        if (t >= detail::kBurnIn) out[t - detail::kBurnIn] = eps;
      }
      return out;
    }
  }
  throw InvalidArgumentError("unknown error process");
}

// Scenario description: model dimensions, error law, break placement, and
// the engine knobs for the two tests.
struct ScenarioSpec {
  int n_time = 10;
  int n_panels = 50;
  ProcessSpec process;
  InnovationSpec innovation;
  double sigma = 1.0;
  int tau = 0;  // 0 means tau = n_time (no change)
  double change_fraction = 0.0;
  DeltaLaw delta_law;
  MuLaw mu_law;
  int reps = 5000;
  double alpha = 0.05;
  int B = 2000;
  int M = 2000;
  std::uint64_t seed = 0;
  double weight_exponent = 2.0;
  KernelSpec kernel = KernelSpec::parzen(2.0);
  unsigned workers = 0;

  int effective_tau() const { return tau == 0 ? n_time : tau; }
  int n_changed() const {
    if (effective_tau() >= n_time) return 0;
    return static_cast<int>(std::floor(change_fraction * n_panels));
  }
};

// One replicate of panel data from the change point model
// Y_{i,t} = mu_i + delta_i 1{t > tau} + sigma eps_{i,t}. The first
// floor(change_fraction * N) panels carry a change; their delta_i are
// drawn fresh each replicate.
inline PanelMatrix gen_panel_data(const ScenarioSpec& spec, int replicate) {
  if (spec.n_time < 2 || spec.n_panels < 1) {
    throw InvalidArgumentError("scenario needs n_time >= 2 and n_panels >= 1");
  }
  const int tau = spec.effective_tau();
  if (tau < 2 || tau > spec.n_time) {
    throw InvalidArgumentError("tau must lie in 2..T");
  }
  if (!(spec.sigma > 0.0)) {
    throw InvalidArgumentError("sigma must be positive");
  }

  const std::uint64_t data_seed = derive_seed(
      spec.seed, stream_tag::kReplicateData, static_cast<std::uint64_t>(replicate));
  const int n_changed = spec.n_changed();

  Vector deltas(spec.n_panels);
  deltas.setZero();
  if (n_changed > 0) {
    Rng delta_rng = make_stream(spec.seed, stream_tag::kDeltaDraw,
                                static_cast<std::uint64_t>(replicate));
    for (int i = 0; i < n_changed; ++i) {
      deltas[i] = spec.delta_law.kind == DeltaLawKind::uniform_range
                      ? delta_rng.uniform(spec.delta_law.lo, spec.delta_law.hi)
                      : spec.delta_law.value;
    }
  }

  Matrix values(spec.n_panels, spec.n_time);
  for (int i = 0; i < spec.n_panels; ++i) {
    const Vector errors =
        gen_errors(spec.process, spec.innovation, spec.n_time, data_seed, i);
    const double mu =
        spec.mu_law.kind == MuLawKind::zero ? 0.0 : spec.mu_law.offset * (i + 1);
    for (int t = 0; t < spec.n_time; ++t) {
      double y = mu + spec.sigma * errors[t];
      if (t + 1 > tau) y += deltas[i];
      values(i, t) = y;
    }
  }
  return PanelMatrix(std::move(values));
}

struct ScenarioResult {
  double rejection_rate_asymptotic = 0.0;
  double rejection_rate_bootstrap = 0.0;
  std::map<int, int> tau_hat_histogram;
  int degenerate_asymptotic = 0;
  int degenerate_bootstrap = 0;
  int failures_asymptotic = 0;
  int failures_bootstrap = 0;
  int reps = 0;
  double wall_seconds = 0.0;
};

// Runs both tests over `reps` independent replicates. Replicates are
// parallel; all per-replicate seeds derive from (spec.seed, replicate),
// so the tallies do not depend on the worker count. Per-replicate errors
// are counted, not fatal.
inline ScenarioResult run_scenario(const ScenarioSpec& spec) {
  if (spec.reps < 1) throw InvalidArgumentError("scenario needs reps >= 1");
  const auto start = std::chrono::steady_clock::now();

  struct ReplicateOutcome {
    signed char asym = -1;  // -1 failure, 0 keep, 1 reject
    signed char boot = -1;
    int tau_hat = 0;
    int degenerate_asym = 0;
    int degenerate_boot = 0;
  };
  std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(spec.reps));

  parallel_for_index(static_cast<std::size_t>(spec.reps), spec.workers,
                     [&](std::size_t r) {
    ReplicateOutcome& slot = outcomes[r];
    PanelMatrix data = gen_panel_data(spec, static_cast<int>(r));

    AsymptoticConfig asym;
    asym.alpha = spec.alpha;
    asym.weight_exponent = spec.weight_exponent;
    asym.kernel = spec.kernel;
    asym.M = spec.M;
    asym.seed = derive_seed(spec.seed, stream_tag::kReplicateAsym, r);
    asym.workers = 1;
    try {
      const TestReport report = asymptotic_test(data, asym);
      slot.asym = report.reject ? 1 : 0;
      slot.tau_hat = report.tau_hat;
      slot.degenerate_asym = report.diagnostics.degenerate_draws;
    } catch (const Error&) {
      slot.asym = -1;
    }

    BootstrapConfig boot;
    boot.B = spec.B;
    boot.alpha = spec.alpha;
    boot.weight_exponent = spec.weight_exponent;
    boot.seed = derive_seed(spec.seed, stream_tag::kReplicateBoot, r);
    boot.workers = 1;
    try {
      const TestReport report = bootstrap_test(data, boot);
      slot.boot = report.reject ? 1 : 0;
      slot.tau_hat = report.tau_hat;
      slot.degenerate_boot = report.diagnostics.degenerate_draws;
    } catch (const Error&) {
      slot.boot = -1;
    }
  });

  ScenarioResult result;
  result.reps = spec.reps;
  int asym_rejections = 0;
  int boot_rejections = 0;
  for (const auto& slot : outcomes) {
    if (slot.asym < 0) {
      ++result.failures_asymptotic;
    } else {
      asym_rejections += slot.asym;
    }
    if (slot.boot < 0) {
      ++result.failures_bootstrap;
    } else {
      boot_rejections += slot.boot;
    }
    if (slot.asym >= 0 || slot.boot >= 0) {
      ++result.tau_hat_histogram[slot.tau_hat];
    }
    result.degenerate_asymptotic += slot.degenerate_asym;
    result.degenerate_bootstrap += slot.degenerate_boot;
  }
  result.rejection_rate_asymptotic =
      static_cast<double>(asym_rejections) / static_cast<double>(spec.reps);
  result.rejection_rate_bootstrap =
      static_cast<double>(boot_rejections) / static_cast<double>(spec.reps);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace panelcp
