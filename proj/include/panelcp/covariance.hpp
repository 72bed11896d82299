#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "panelcp/correlation.hpp"
#include "panelcp/errors.hpp"

namespace panelcp {

// Symmetric positive-semidefinite T x T matrix. Construction validates
// symmetry and rejects spectra whose negative part exceeds rounding
// level; tiny negative eigenvalues are clipped to zero by the sampler.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Eigen::MatrixXd entries)
      : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
      throw InvalidArgumentError("covariance matrix must be square");
    }
    const double asymmetry =
        (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > 1e-10) {
      throw InvalidArgumentError("covariance matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        entries_, Eigen::EigenvaluesOnly);
    const double max_eig = solver.eigenvalues().maxCoeff();
    const double min_eig = solver.eigenvalues().minCoeff();
    const double tolerance = 1e-8 * std::max(max_eig, 0.0) + 1e-12;
    if (min_eig < -tolerance) {
      throw NotPsdError("covariance matrix has eigenvalue " +
                        std::to_string(min_eig) +
                        " below the clipping tolerance; the correlation "
                        "estimate is unusable");
    }
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

// Covariance of the limiting partial-sum vector under no change:
// diag entries r(t), off-diagonal r(min) + R(min, max).
inline CovarianceMatrix build_lambda(const CorrelationStructure& structure) {
  const int n_time = structure.n_time();
  Eigen::MatrixXd lambda(n_time, n_time);
  for (int t = 1; t <= n_time; ++t) {
    lambda(t - 1, t - 1) = structure.r(t);
    for (int v = t + 1; v <= n_time; ++v) {
      const double value = structure.r(t) + structure.R(t, v);
      lambda(t - 1, v - 1) = value;
      lambda(v - 1, t - 1) = value;
    }
  }
  return CovarianceMatrix(std::move(lambda));
}

namespace detail {

inline double gamma_diagonal(const CorrelationStructure& c, int tau, int t) {
  const int n_time = c.n_time();
  if (t == tau) return 0.0;
  if (t < tau) {
    const double ratio = static_cast<double>(t) / static_cast<double>(tau);
    return c.r(t) + ratio * ratio * c.r(tau) -
           2.0 * ratio * (c.r(t) + c.R(t, tau));
  }
  const int a = t - tau;
  const int m = n_time - tau;
  const double ratio = static_cast<double>(a) / static_cast<double>(m);
  double value = c.r(a) + ratio * ratio * c.r(m) - 2.0 * ratio * c.r(a);
  if (a < m) value -= 2.0 * ratio * c.R(a, m);
  return value;
}

inline double gamma_off_diagonal(const CorrelationStructure& c, int tau, int t,
                                 int v) {
  const int n_time = c.n_time();
  if (t == tau || v == tau) return 0.0;
  if (v < tau) {
    // both partial sums end before the break
    const double td = static_cast<double>(t);
    const double vd = static_cast<double>(v);
    const double taud = static_cast<double>(tau);
    return c.r(t) + c.R(t, v) + td * vd / (taud * taud) * c.r(tau) -
           vd / taud * (c.r(t) + c.R(t, tau)) -
           td / taud * (c.r(v) + c.R(v, tau));
  }
  if (t < tau) {
    // sums straddle the break
    const int d = tau + 1 - t;
    const double td = static_cast<double>(t);
    const double taud = static_cast<double>(tau);
    const double span = static_cast<double>(n_time - tau);
    double value = c.S(t, v, d) +
                   td * static_cast<double>(v - tau) / (taud * span) *
                       c.R(tau, n_time) -
                   static_cast<double>(v - tau) / span * c.S(t, n_time, d) -
                   td / taud * c.R(tau, v);
    return value;
  }
  // both sums start after the break
  const int a = t - tau;
  const int b = v - tau;
  const int m = n_time - tau;
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double md = static_cast<double>(m);
  double value = c.r(a) + c.R(a, b) + ad * bd / (md * md) * c.r(m) -
                 bd / md * c.r(a) - ad / md * c.r(b);
  if (a < m) value -= bd / md * c.R(a, m);
  if (b < m) value -= ad / md * c.R(b, m);
  return value;
}

}  // namespace detail

// Covariance of the limiting residual partial sums given a break at tau.
// Row and column tau are identically zero; so is column T when tau < T,
// because the full-row residual sum vanishes.
inline CovarianceMatrix build_gamma(const CorrelationStructure& structure,
                                    int tau) {
  const int n_time = structure.n_time();
  if (tau < 1 || tau > n_time) {
    throw InvalidArgumentError("tau must lie in 1..T");
  }
  Eigen::MatrixXd gamma(n_time, n_time);
  for (int t = 1; t <= n_time; ++t) {
    gamma(t - 1, t - 1) = detail::gamma_diagonal(structure, tau, t);
    for (int v = t + 1; v <= n_time; ++v) {
      const double value = detail::gamma_off_diagonal(structure, tau, t, v);
      gamma(t - 1, v - 1) = value;
      gamma(v - 1, t - 1) = value;
    }
  }
  return CovarianceMatrix(std::move(gamma));
}

}  // namespace panelcp
