#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "panelcp/errors.hpp"
#include "panelcp/panel_data.hpp"

namespace panelcp {

struct RatioFunctionalResult {
  double value = 0.0;
  bool degenerate = false;
  int degenerate_t = 0;  // first t whose denominator fell below the floor
};

// Core ratio-of-maxima CUSUM functional over a vector of cumulative sums
// x = (X_1, ..., X_T):
//
//   max_{t=2..T-2}  max_{s=1..t}   |X_s - (s/t) X_t|
//                   ------------------------------------------
//                   max_{s=t..T-1} |Z_s - ((T-s)/(T-t)) Z_t|
//
// with Z_t = X_T - X_t. The same functional evaluates the panel test
// statistic (x = panel-summed prefix sums), the simulated limit draws,
// and the bootstrap replicates.
template <typename Derived>
RatioFunctionalResult ratio_cusum_functional(
    const Eigen::MatrixBase<Derived>& x, double floor = kDegenerateFloor) {
  const int n_time = static_cast<int>(x.size());
  if (n_time < 4) {
    throw ShortPanelError("ratio functional needs at least 4 time points, got " +
                          std::to_string(n_time));
  }

  const double x_last = x[n_time - 1];
  double best = 0.0;
  for (int t = 2; t <= n_time - 2; ++t) {
    const double x_t = x[t - 1];
    const double z_t = x_last - x_t;

    double denominator = 0.0;
    for (int s = t; s <= n_time - 1; ++s) {
      const double z_s = x_last - x[s - 1];
      const double term = std::abs(z_s - static_cast<double>(n_time - s) /
                                             static_cast<double>(n_time - t) *
                                             z_t);
      if (term > denominator) denominator = term;
    }
    if (denominator < floor) {
      return {0.0, true, t};
    }

    double numerator = 0.0;
    for (int s = 1; s <= t; ++s) {
      const double term =
          std::abs(x[s - 1] -
                   static_cast<double>(s) / static_cast<double>(t) * x_t);
      if (term > numerator) numerator = term;
    }

    const double ratio = numerator / denominator;
    if (ratio > best) best = ratio;
  }
  return {best, false, 0};
}

// Prefix sums of the panel grid accumulated over panels in row order:
// u_k = sum_i sum_{r<=k} Y_{i,r}. The fixed accumulation order makes the
// result independent of how outer loops are parallelized.
template <typename Derived>
Vector panel_prefix_sums(const Eigen::MatrixBase<Derived>& values) {
  const Eigen::Index n_panels = values.rows();
  const Eigen::Index n_time = values.cols();
  Vector sums = Vector::Zero(n_time);
  for (Eigen::Index i = 0; i < n_panels; ++i) {
    double running = 0.0;
    for (Eigen::Index k = 0; k < n_time; ++k) {
      running += values(i, k);
      sums[k] += running;
    }
  }
  return sums;
}

// Ratio test statistic of the panel grid. Throws DegenerateDenominatorError
// when some t has no usable denominator (constant or collinear data).
inline double ratio_statistic(const PanelMatrix& data,
                              double floor = kDegenerateFloor) {
  if (data.n_time() < 4) {
    throw ShortPanelError("ratio statistic needs at least 4 time points, got " +
                          std::to_string(data.n_time()));
  }
  const Vector sums = panel_prefix_sums(data.values());
  const RatioFunctionalResult result = ratio_cusum_functional(sums, floor);
  if (result.degenerate) {
    throw DegenerateDenominatorError(
        result.degenerate_t,
        "degenerate denominator at t = " + std::to_string(result.degenerate_t) +
            "; data has no scale in the right segment");
  }
  return result.value;
}

// Functional of one simulated limit vector. Degenerate draws throw; the
// Monte-Carlo samplers catch and redraw, counting occurrences.
template <typename Derived>
double limit_functional(const Eigen::MatrixBase<Derived>& x,
                        double floor = kDegenerateFloor) {
  const RatioFunctionalResult result = ratio_cusum_functional(x, floor);
  if (result.degenerate) {
    throw DegenerateDrawError("degenerate functional draw at t = " +
                              std::to_string(result.degenerate_t));
  }
  return result.value;
}

}  // namespace panelcp
