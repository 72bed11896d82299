#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "panelcp/errors.hpp"

namespace panelcp {

// Sorted sample of simulated or bootstrapped statistic values. Finite
// values live in the sorted vector; replicates recorded as infinite by
// the count-as-infinite policy are carried as a separate count so the
// stored sample stays finite.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> values,
                                 std::size_t n_infinite = 0)
      : sample_(std::move(values)), n_infinite_(n_infinite) {
    if (sample_.empty() && n_infinite_ == 0) {
      throw InvalidArgumentError("empirical distribution needs at least one value");
    }
    for (double v : sample_) {
      if (!std::isfinite(v)) {
        throw InvalidArgumentError("empirical sample values must be finite");
      }
    }
    std::sort(sample_.begin(), sample_.end());
  }

  const std::vector<double>& sample() const { return sample_; }
  std::size_t size() const { return sample_.size(); }
  std::size_t n_infinite() const { return n_infinite_; }
  std::size_t total_size() const { return sample_.size() + n_infinite_; }

  // Value of the ceil((1 - alpha) * M)-th order statistic (1-based). If
  // the index lands in the infinite tail, the quantile is infinite.
  double upper_quantile(double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw InvalidArgumentError("alpha must lie in (0, 1)");
    }
    const double m = static_cast<double>(total_size());
    auto index = static_cast<std::size_t>(std::ceil((1.0 - alpha) * m));
    if (index < 1) index = 1;
    if (index > sample_.size()) {
      return std::numeric_limits<double>::infinity();
    }
    return sample_[index - 1];
  }

  std::size_t count_geq(double x) const {
    const auto it = std::lower_bound(sample_.begin(), sample_.end(), x);
    return static_cast<std::size_t>(sample_.end() - it) + n_infinite_;
  }

  double fraction_geq(double x) const {
    return static_cast<double>(count_geq(x)) /
           static_cast<double>(total_size());
  }

 private:
  std::vector<double> sample_;
  std::size_t n_infinite_;
};

// Two-sample Kolmogorov-Smirnov distance, sup_x |F_a(x) - F_b(x)|.
inline double ks_distance(const EmpiricalDistribution& a,
                          const EmpiricalDistribution& b) {
  const auto& sa = a.sample();
  const auto& sb = b.sample();
  const double na = static_cast<double>(a.total_size());
  const double nb = static_cast<double>(b.total_size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  double sup = 0.0;
  while (ia < sa.size() && ib < sb.size()) {
    const double x = std::min(sa[ia], sb[ib]);
    while (ia < sa.size() && sa[ia] <= x) ++ia;
    while (ib < sb.size() && sb[ib] <= x) ++ib;
    const double gap =
        std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb);
    if (gap > sup) sup = gap;
  }
  // remaining one-sided tails, including any infinite mass
  const double tail = std::abs(static_cast<double>(sa.size()) / na -
                               static_cast<double>(sb.size()) / nb);
  return std::max(sup, tail);
}

}  // namespace panelcp
