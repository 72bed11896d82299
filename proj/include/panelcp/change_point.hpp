#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "panelcp/errors.hpp"
#include "panelcp/panel_data.hpp"

namespace panelcp {

// Result of the weighted least-squares change point search. tau_hat = T
// encodes "no change detected"; objective[k] holds the criterion at
// time k + 2.
struct ChangePointEstimate {
  int tau_hat = 0;
  Vector objective;

  double objective_at(int t) const { return objective[t - 2]; }
};

// tau_hat = argmin_{t=2..T} (1/(N w(t))) sum_i sum_{s<=t} (Y_{i,s} - mean_i(t))^2,
// ties broken towards the smallest t. The 1/N factor stabilizes the
// criterion for large panel counts and leaves the argmin unchanged.
inline ChangePointEstimate estimate_change_point(const PanelMatrix& data,
                                                 const WeightScheme& weights) {
  const int n_time = data.n_time();
  const int n_panels = data.n_panels();
  if (weights.n_time() != n_time) {
    throw InvalidArgumentError("weight scheme covers t = 2.." +
                               std::to_string(weights.n_time()) +
                               " but panel has T = " + std::to_string(n_time));
  }
  const Matrix& values = data.values();

  // Two-pass per (panel, t): mean of the first t observations, then the
  // squared deviations. Exact zero for constant segments and immune to
  // the cancellation a prefix-of-squares shortcut would suffer.
  Vector objective = Vector::Zero(n_time - 1);
  for (int i = 0; i < n_panels; ++i) {
    double head_sum = values(i, 0);
    for (int t = 2; t <= n_time; ++t) {
      head_sum += values(i, t - 1);
      const double head_mean = head_sum / static_cast<double>(t);
      double squares = 0.0;
      for (int s = 0; s < t; ++s) {
        const double dev = values(i, s) - head_mean;
        squares += dev * dev;
      }
      objective[t - 2] += squares;
    }
  }
  for (int t = 2; t <= n_time; ++t) {
    objective[t - 2] /= static_cast<double>(n_panels) * weights.at(t);
  }

  int tau_hat = 2;
  for (int t = 3; t <= n_time; ++t) {
    if (objective[t - 2] < objective[tau_hat - 2]) tau_hat = t;
  }
  return {tau_hat, std::move(objective)};
}

// Residuals around the segment means implied by tau_hat: the first
// tau_hat observations of each panel are centered by their own mean,
// the remainder by the mean of the tail. Rows therefore satisfy
// sum_{t<=tau_hat} e_{i,t} = 0 and, when tau_hat < T,
// sum_{t>tau_hat} e_{i,t} = 0.
inline PanelMatrix residuals(const PanelMatrix& data, int tau_hat) {
  const int n_time = data.n_time();
  if (tau_hat < 2 || tau_hat > n_time) {
    throw InvalidArgumentError("tau_hat must lie in 2..T, got " +
                               std::to_string(tau_hat));
  }
  const Matrix& values = data.values();
  Matrix result(values.rows(), values.cols());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    const double head_mean =
        values.row(i).head(tau_hat).mean();
    for (int s = 0; s < tau_hat; ++s) {
      result(i, s) = values(i, s) - head_mean;
    }
    if (tau_hat < n_time) {
      const double tail_mean =
          values.row(i).tail(n_time - tau_hat).mean();
      for (int s = tau_hat; s < n_time; ++s) {
        result(i, s) = values(i, s) - tail_mean;
      }
    }
  }
  return PanelMatrix(std::move(result));
}

// Mean of squared residuals over the whole grid.
inline double sigma2_hat(const PanelMatrix& residual_matrix,
                         double floor = kDegenerateFloor) {
  const double value = residual_matrix.values().array().square().mean();
  if (value < floor) {
    throw ZeroVarianceError(
        "residual variance " + std::to_string(value) +
        " is below the degeneracy floor; autocorrelation cannot be estimated");
  }
  return value;
}

}  // namespace panelcp
