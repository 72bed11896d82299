#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "panelcp/errors.hpp"
#include "panelcp/panel_data.hpp"

namespace panelcp {

// Empirical autocorrelation by lag, normalized so that lag 0 is 1 when
// built from the residuals that produced sigma2.
struct AutocovTable {
  Vector rho;  // rho[ell] is the lag-ell value, ell = 0..T-1

  double lag(int ell) const { return rho[ell]; }
  int max_lag() const { return static_cast<int>(rho.size()) - 1; }
};

// rho_hat(ell) = (1 / (sigma2 N T)) sum_i sum_{s=1..T-ell} e_{i,s} e_{i,s+ell}.
// Every lag uses the same 1/(sigma2 N T) normalization; no per-lag length
// correction is applied.
inline AutocovTable rho_hat(const PanelMatrix& residual_matrix, double sigma2) {
  if (!(sigma2 > kDegenerateFloor)) {
    throw ZeroVarianceError("sigma2 below the degeneracy floor");
  }
  const Matrix& e = residual_matrix.values();
  const int n_panels = residual_matrix.n_panels();
  const int n_time = residual_matrix.n_time();
  const double normalizer =
      sigma2 * static_cast<double>(n_panels) * static_cast<double>(n_time);

  Vector rho = Vector::Zero(n_time);
  for (int ell = 0; ell < n_time; ++ell) {
    double sum = 0.0;
    for (int i = 0; i < n_panels; ++i) {
      for (int s = 0; s + ell < n_time; ++s) {
        sum += e(i, s) * e(i, s + ell);
      }
    }
    rho[ell] = sum / normalizer;
  }
  return {std::move(rho)};
}

// Parzen lag window: piecewise cubic, 1 at the origin, supported on [-1, 1].
template <typename Scalar>
Scalar parzen_kernel(Scalar x) {
  const Scalar a = x < Scalar(0) ? -x : x;
  if (a <= Scalar(0.5)) {
    return Scalar(1) - Scalar(6) * a * a + Scalar(6) * a * a * a;
  }
  if (a <= Scalar(1)) {
    const Scalar b = Scalar(1) - a;
    return Scalar(2) * b * b * b;
  }
  return Scalar(0);
}

// A lag-weighting kernel together with its window width h. Candidate
// kernels must be even, bounded by 1 in absolute value, and equal to 1
// at the origin; this is checked on the lag points actually used.
struct KernelSpec {
  std::function<double(double)> fn;
  double bandwidth = 2.0;
  std::string name = "parzen";

  static KernelSpec parzen(double h = 2.0) {
    return {[](double x) { return parzen_kernel(x); }, h, "parzen"};
  }

  // Flat weighting on [-1, 1]; pick h >= T so every lag passes through.
  static KernelSpec trivial(double h) {
    return {[](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; }, h,
            "trivial"};
  }
};

namespace detail {

inline void validate_kernel(const KernelSpec& kernel, int n_time) {
  if (!(kernel.bandwidth > 0.0)) {
    throw KernelClassError("kernel bandwidth must be positive");
  }
  if (std::abs(kernel.fn(0.0) - 1.0) > 1e-12) {
    throw KernelClassError("kernel must equal 1 at the origin");
  }
  for (int ell = 1; ell < n_time; ++ell) {
    const double x = static_cast<double>(ell) / kernel.bandwidth;
    const double right = kernel.fn(x);
    const double left = kernel.fn(-x);
    if (std::abs(right - left) > 1e-12) {
      throw KernelClassError("kernel must be even");
    }
    if (std::abs(right) > 1.0 + 1e-12 || !std::isfinite(right)) {
      throw KernelClassError("kernel values must lie in [-1, 1]");
    }
  }
}

}  // namespace detail

// Cumulative correlation tables of a weakly stationary error sequence:
//   r(t)     = Var sum_{s<=t} eps_s
//   R(t, v)  = Cov(sum_{s<=t} eps_s, sum_{u=t+1..v} eps_u),  t < v
//   S(t,v,d) = Cov(sum_{s<=t} eps_s, sum_{u=t+d..v} eps_u),  t + d <= v
// with S(t, v, 1) = R(t, v) by construction.
class CorrelationStructure {
 public:
  CorrelationStructure(int n_time, Vector r, Eigen::MatrixXd big_r,
                       std::vector<double> s)
      : n_time_(n_time),
        r_(std::move(r)),
        big_r_(std::move(big_r)),
        s_(std::move(s)) {}

  int n_time() const { return n_time_; }

  double r(int t) const { return r_[t - 1]; }

  double R(int t, int v) const { return big_r_(t - 1, v - 1); }

  double S(int t, int v, int d) const { return s_[s_index(t, v, d)]; }

 private:
  std::size_t s_index(int t, int v, int d) const {
    return (static_cast<std::size_t>(t - 1) * n_time_ +
            static_cast<std::size_t>(v - 1)) *
               n_time_ +
           static_cast<std::size_t>(d - 1);
  }

  int n_time_;
  Vector r_;              // r_[t-1] = r(t)
  Eigen::MatrixXd big_r_;  // upper triangle t < v
  std::vector<double> s_;  // flat (t, v, d) grid, zero where undefined

  friend CorrelationStructure build_structure_from_lag_weights(
      const Vector& weighted);
};

// Builds all three tables from the weighted lag sequence
// w(ell) = kappa(ell / h) * rho(ell). Everything reduces to
// g(t, u) = sum_{s=1..t} w(u - s), accumulated via prefix sums of w, so
// the full S grid costs O(T^3) memory and O(T^2) arithmetic.
inline CorrelationStructure build_structure_from_lag_weights(
    const Vector& weighted) {
  const int n_time = static_cast<int>(weighted.size());

  // W[m] = sum_{ell=1..m} w(ell), W[0] = 0.
  Vector cum = Vector::Zero(n_time);
  for (int m = 1; m < n_time; ++m) cum[m] = cum[m - 1] + weighted[m];
  const auto cum_at = [&](int m) { return m <= 0 ? 0.0 : cum[m]; };

  Vector r(n_time);
  for (int t = 1; t <= n_time; ++t) {
    double sum = static_cast<double>(t) * weighted[0];
    for (int s = 1; s < t; ++s) {
      sum += 2.0 * static_cast<double>(t - s) * weighted[s];
    }
    r[t - 1] = sum;
  }

  // cross(t-1, x-1) = sum_{u=t+1..x} g(t, u) for x >= t, where
  // g(t, u) = W(u-1) - W(u-1-t).
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n_time, n_time);
  for (int t = 1; t <= n_time; ++t) {
    double acc = 0.0;
    for (int u = t + 1; u <= n_time; ++u) {
      acc += cum_at(u - 1) - cum_at(u - 1 - t);
      cross(t - 1, u - 1) = acc;
    }
  }

  Eigen::MatrixXd big_r = Eigen::MatrixXd::Zero(n_time, n_time);
  for (int t = 1; t <= n_time; ++t) {
    for (int v = t + 1; v <= n_time; ++v) {
      big_r(t - 1, v - 1) = cross(t - 1, v - 1);
    }
  }

  std::vector<double> s(static_cast<std::size_t>(n_time) * n_time * n_time,
                        0.0);
  CorrelationStructure structure(n_time, std::move(r), std::move(big_r),
                                 std::move(s));
  for (int t = 1; t <= n_time; ++t) {
    for (int d = 1; t + d <= n_time; ++d) {
      for (int v = t + d; v <= n_time; ++v) {
        structure.s_[structure.s_index(t, v, d)] =
            cross(t - 1, v - 1) - cross(t - 1, t + d - 2);
      }
    }
  }
  return structure;
}

// Kernel-smoothed tables from an estimated autocorrelation sequence.
inline CorrelationStructure estimate_structure(const AutocovTable& rho,
                                               const KernelSpec& kernel,
                                               int n_time) {
  if (rho.max_lag() < n_time - 1) {
    throw InvalidArgumentError("autocorrelation table covers lags 0.." +
                               std::to_string(rho.max_lag()) +
                               " but T = " + std::to_string(n_time));
  }
  detail::validate_kernel(kernel, n_time);
  Vector weighted(n_time);
  weighted[0] = rho.lag(0);
  for (int ell = 1; ell < n_time; ++ell) {
    weighted[ell] =
        kernel.fn(static_cast<double>(ell) / kernel.bandwidth) * rho.lag(ell);
  }
  return build_structure_from_lag_weights(weighted);
}

// Exact tables for independent observations: r(t) = t, R and S vanish.
inline CorrelationStructure analytic_structure_iid(int n_time) {
  Vector weighted = Vector::Zero(n_time);
  weighted[0] = 1.0;
  return build_structure_from_lag_weights(weighted);
}

// Exact tables for a stationary AR(1) sequence with unit marginal
// variance: rho_ell = phi^ell, unsmoothed.
inline CorrelationStructure analytic_structure_ar1(double phi, int n_time) {
  if (!(std::abs(phi) < 1.0)) {
    throw NonStationaryParamsError("AR(1) coefficient must satisfy |phi| < 1");
  }
  Vector weighted(n_time);
  double power = 1.0;
  for (int ell = 0; ell < n_time; ++ell) {
    weighted[ell] = power;
    power *= phi;
  }
  return build_structure_from_lag_weights(weighted);
}

}  // namespace panelcp
