#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "panelcp/errors.hpp"

namespace panelcp {

// Panels are rows, time runs along columns. Row-major storage keeps each
// panel contiguous, which is what the per-panel prefix sums and the
// bootstrap row resampling iterate over.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Absolute floor below which denominators and variances are treated as
// degenerate: scale-free data is an error, not a value.
inline constexpr double kDegenerateFloor = 1e-12;

// N x T grid of finite observations (or residuals, or resampled
// residuals). Immutable after construction.
class PanelMatrix {
 public:
  explicit PanelMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1) {
      throw InvalidPanelError("panel matrix needs at least one panel row");
    }
    if (values_.cols() < 2) {
      throw ShortPanelError("panel matrix needs at least two time points, got " +
                            std::to_string(values_.cols()));
    }
    if (!values_.allFinite()) {
      throw InvalidPanelError("panel matrix contains NaN or infinite entries");
    }
  }

  int n_panels() const { return static_cast<int>(values_.rows()); }
  int n_time() const { return static_cast<int>(values_.cols()); }
  const Matrix& values() const { return values_; }

 private:
  Matrix values_;
};

// Positive weights w(t) for t = 2..T, used by the change point estimate.
class WeightScheme {
 public:
  WeightScheme(int n_time, Vector weights)
      : n_time_(n_time), weights_(std::move(weights)) {
    if (n_time_ < 2 || weights_.size() != n_time_ - 1) {
      throw InvalidArgumentError("weight scheme must cover t = 2.." +
                                 std::to_string(n_time_));
    }
    for (Eigen::Index k = 0; k < weights_.size(); ++k) {
      if (!(weights_[k] > 0.0) || !std::isfinite(weights_[k])) {
        throw InvalidArgumentError("weights must be positive and finite");
      }
    }
  }

  // w(t) = t^q; q = 2 is the default used throughout.
  static WeightScheme power(int n_time, double exponent = 2.0) {
    if (n_time < 2) {
      throw InvalidArgumentError("weight scheme needs n_time >= 2");
    }
    Vector w(n_time - 1);
    for (int t = 2; t <= n_time; ++t) {
      w[t - 2] = std::pow(static_cast<double>(t), exponent);
    }
    return WeightScheme(n_time, std::move(w));
  }

  double at(int t) const { return weights_[t - 2]; }
  int n_time() const { return n_time_; }

 private:
  int n_time_;
  Vector weights_;  // weights_[k] is w(k + 2)
};

}  // namespace panelcp
