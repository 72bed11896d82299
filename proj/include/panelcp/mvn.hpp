#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "panelcp/covariance.hpp"
#include "panelcp/empirical.hpp"
#include "panelcp/errors.hpp"
#include "panelcp/parallel.hpp"
#include "panelcp/rng.hpp"
#include "panelcp/statistic.hpp"

namespace panelcp {

namespace detail {

// Sampling transform A = V diag(sqrt(max(lambda_k, 0))) from the
// eigendecomposition. Eigendecomposition rather than Cholesky because
// the residual-limit covariance is exactly singular (zero row at tau)
// and estimated matrices can be near-singular.
class MvnSampler {
 public:
  explicit MvnSampler(const CovarianceMatrix& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov.entries());
    Eigen::VectorXd scale = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    transform_ = solver.eigenvectors() * scale.asDiagonal();
  }

  Eigen::VectorXd draw(Rng& rng) const {
    Eigen::VectorXd z(transform_.cols());
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = rng.gaussian();
    return transform_ * z;
  }

 private:
  Eigen::MatrixXd transform_;
};

// Degenerate-draw budget: total degenerate attempts beyond 1% of the
// requested sample abort the run.
inline int degenerate_budget(int count) {
  return count / 100 + (count % 100 != 0 ? 1 : 0);
}

inline constexpr int kMaxAttemptsPerDraw = 64;

}  // namespace detail

// M draws from N(0, cov), draw i fully determined by (seed, i).
inline std::vector<Eigen::VectorXd> sample_mvn(const CovarianceMatrix& cov,
                                               int count, std::uint64_t seed,
                                               unsigned workers = 0) {
  if (count < 1) throw InvalidArgumentError("sample count must be positive");
  const detail::MvnSampler sampler(cov);
  std::vector<Eigen::VectorXd> draws(static_cast<std::size_t>(count));
  parallel_for_index(static_cast<std::size_t>(count), workers,
                     [&](std::size_t i) {
                       Rng rng = make_stream(seed, stream_tag::kMvnDraw, i);
                       draws[i] = sampler.draw(rng);
                     });
  return draws;
}

struct CriticalValueResult {
  double critical_value = 0.0;
  EmpiricalDistribution distribution;
  int degenerate_draws = 0;
};

// Simulates the limit law of the ratio functional under N(0, cov) and
// returns the empirical upper alpha quantile. Degenerate draws are
// redrawn from (seed, i, attempt) streams and counted; more than 1%
// of M degenerate attempts aborts.
inline CriticalValueResult asymptotic_critical_value(
    const CovarianceMatrix& cov, double alpha, int count, std::uint64_t seed,
    unsigned workers = 0, double floor = kDegenerateFloor) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgumentError("alpha must lie in (0, 1)");
  }
  if (count < 100) {
    throw InvalidArgumentError("need at least 100 draws for a quantile");
  }
  if (cov.dim() < 4) {
    throw ShortPanelError("limit simulation needs dimension >= 4");
  }

  const detail::MvnSampler sampler(cov);
  std::vector<double> values(static_cast<std::size_t>(count));
  std::vector<int> degenerate(static_cast<std::size_t>(count), 0);
  std::vector<unsigned char> failed(static_cast<std::size_t>(count), 0);

  parallel_for_index(static_cast<std::size_t>(count), workers,
                     [&](std::size_t i) {
                       for (int attempt = 0;; ++attempt) {
                         if (attempt >= detail::kMaxAttemptsPerDraw) {
                           failed[i] = 1;
                           return;
                         }
                         Rng rng = make_stream(seed, stream_tag::kMvnDraw, i,
                                               static_cast<std::uint64_t>(attempt));
                         const Eigen::VectorXd x = sampler.draw(rng);
                         const RatioFunctionalResult r =
                             ratio_cusum_functional(x, floor);
                         if (!r.degenerate) {
                           values[i] = r.value;
                           return;
                         }
                         ++degenerate[i];
                       }
                     });

  int total_degenerate = 0;
  bool any_failed = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    total_degenerate += degenerate[i];
    if (failed[i]) any_failed = true;
  }
  if (any_failed || total_degenerate > detail::degenerate_budget(count)) {
    throw TooManyDegenerateError(
        total_degenerate,
        "more than 1% of limit draws were degenerate (" +
            std::to_string(total_degenerate) + " of " + std::to_string(count) +
            " requested)");
  }

  EmpiricalDistribution distribution(std::move(values));
  const double critical = distribution.upper_quantile(alpha);
  return {critical, std::move(distribution), total_degenerate};
}

}  // namespace panelcp
