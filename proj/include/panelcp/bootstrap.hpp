#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "panelcp/asymptotic_test.hpp"
#include "panelcp/change_point.hpp"
#include "panelcp/empirical.hpp"
#include "panelcp/errors.hpp"
#include "panelcp/panel_data.hpp"
#include "panelcp/parallel.hpp"
#include "panelcp/rng.hpp"
#include "panelcp/statistic.hpp"

namespace panelcp {

enum class DegeneratePolicy { redraw, count_as_infinite };

struct BootstrapConfig {
  int B = 2000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  DegeneratePolicy degenerate_policy = DegeneratePolicy::redraw;
  double weight_exponent = 2.0;
  unsigned workers = 0;
  double floor = kDegenerateFloor;
};

namespace detail {

inline Matrix resample_rows(const Matrix& source, Rng& rng) {
  const Eigen::Index n_panels = source.rows();
  Matrix out(n_panels, source.cols());
  for (Eigen::Index i = 0; i < n_panels; ++i) {
    const auto pick = static_cast<Eigen::Index>(
        rng.below(static_cast<std::uint64_t>(n_panels)));
    out.row(i) = source.row(pick);
  }
  return out;
}

}  // namespace detail

// Draws N whole panel rows uniformly with replacement; rows move together
// so within-panel dependence survives. Fully determined by
// (seed, replicate_index).
inline PanelMatrix resample_panels(const PanelMatrix& residual_matrix,
                                   std::uint64_t seed, int replicate_index) {
  Rng rng = make_stream(seed, stream_tag::kBootstrapDraw,
                        static_cast<std::uint64_t>(replicate_index));
  return PanelMatrix(detail::resample_rows(residual_matrix.values(), rng));
}

// Centers every resampled entry by the column mean of the original
// residual matrix (the conditional expectation of a resampled cell).
inline PanelMatrix center_bootstrap(const PanelMatrix& resampled,
                                    const PanelMatrix& original_residuals) {
  if (resampled.n_panels() != original_residuals.n_panels() ||
      resampled.n_time() != original_residuals.n_time()) {
    throw ShapeMismatchError("resampled and original residual grids differ in shape");
  }
  const Eigen::RowVectorXd column_means =
      original_residuals.values().colwise().mean();
  Matrix centered = resampled.values();
  centered.rowwise() -= column_means;
  return PanelMatrix(std::move(centered));
}

struct BootstrapDistribution {
  EmpiricalDistribution distribution;
  int tau_hat = 0;
  int degenerate_draws = 0;
};

// One pass of the resampling algorithm: the change point and residuals
// are computed once, outside the loop; each replicate resamples rows,
// centers them by the original column means, and re-evaluates the ratio
// statistic. Replicate b is reproducible in isolation from (seed, b).
inline BootstrapDistribution bootstrap_distribution(
    const PanelMatrix& data, const BootstrapConfig& config = {}) {
  if (data.n_time() < 4) {
    throw ShortPanelError("bootstrap needs at least 4 time points");
  }
  if (data.n_panels() < 2) {
    throw TooFewPanelsError("bootstrap needs at least 2 panels");
  }
  if (config.B < 100) {
    throw InvalidArgumentError("bootstrap needs B >= 100 for quantile use");
  }

  const WeightScheme weights =
      WeightScheme::power(data.n_time(), config.weight_exponent);
  const ChangePointEstimate estimate = estimate_change_point(data, weights);
  const PanelMatrix residual_matrix = residuals(data, estimate.tau_hat);
  const Eigen::RowVectorXd column_means =
      residual_matrix.values().colwise().mean();
  const Matrix& source = residual_matrix.values();

  const auto b_count = static_cast<std::size_t>(config.B);
  std::vector<double> values(b_count, 0.0);
  std::vector<unsigned char> infinite(b_count, 0);
  std::vector<int> degenerate(b_count, 0);
  std::vector<unsigned char> failed(b_count, 0);
  const bool redraw = config.degenerate_policy == DegeneratePolicy::redraw;

  parallel_for_index(b_count, config.workers, [&](std::size_t b) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= detail::kMaxAttemptsPerDraw) {
        failed[b] = 1;
        return;
      }
      Rng rng = make_stream(config.seed, stream_tag::kBootstrapDraw, b,
                            static_cast<std::uint64_t>(attempt));
      Matrix replicate = detail::resample_rows(source, rng);
      replicate.rowwise() -= column_means;
      const RatioFunctionalResult result =
          ratio_cusum_functional(panel_prefix_sums(replicate), config.floor);
      if (!result.degenerate) {
        values[b] = result.value;
        return;
      }
      ++degenerate[b];
      if (!redraw) {
        infinite[b] = 1;
        return;
      }
    }
  });

  int total_degenerate = 0;
  bool any_failed = false;
  std::size_t n_infinite = 0;
  std::vector<double> finite_values;
  finite_values.reserve(b_count);
  for (std::size_t b = 0; b < b_count; ++b) {
    total_degenerate += degenerate[b];
    if (failed[b]) any_failed = true;
    if (infinite[b]) {
      ++n_infinite;
    } else if (!failed[b]) {
      finite_values.push_back(values[b]);
    }
  }
  if (redraw &&
      (any_failed || total_degenerate > detail::degenerate_budget(config.B))) {
    throw TooManyDegenerateError(
        total_degenerate,
        "more than 1% of bootstrap replicates were degenerate (" +
            std::to_string(total_degenerate) + " of " +
            std::to_string(config.B) + " requested)");
  }

  return {EmpiricalDistribution(std::move(finite_values), n_infinite),
          estimate.tau_hat, total_degenerate};
}

// Bootstrap decision: critical value is the ceil((1 - alpha) B)-th order
// statistic of the replicate sample; the p-value uses the add-one
// formula (1 + #{replicates >= statistic}) / (B + 1).
inline TestReport bootstrap_test(const PanelMatrix& data,
                                 const BootstrapConfig& config = {}) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw InvalidArgumentError("alpha must lie in (0, 1)");
  }
  const double statistic = ratio_statistic(data, config.floor);
  BootstrapDistribution boot = bootstrap_distribution(data, config);

  TestReport report;
  report.method = TestMethod::bootstrap;
  report.statistic = statistic;
  report.alpha = config.alpha;
  report.critical_value = boot.distribution.upper_quantile(config.alpha);
  report.p_value =
      (1.0 + static_cast<double>(boot.distribution.count_geq(statistic))) /
      (static_cast<double>(boot.distribution.total_size()) + 1.0);
  report.reject = statistic > report.critical_value;
  report.tau_hat = boot.tau_hat;
  report.diagnostics.sample_count = config.B;
  report.diagnostics.seed = config.seed;
  report.diagnostics.degenerate_draws = boot.degenerate_draws;
  report.diagnostics.workers = resolve_workers(config.workers);
  return report;
}

}  // namespace panelcp
