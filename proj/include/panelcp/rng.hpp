#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace panelcp {

// Counter-style stream derivation plus a small, fast generator. Every
// Monte-Carlo draw, bootstrap replicate, and simulated panel obtains its
// own stream keyed by (seed, tag, index, attempt), so results do not
// depend on scheduling or worker count. Hand-rolled transforms keep the
// byte stream identical across standard libraries.

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Steele, Lea, Flood).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derives a well-separated sub-seed from a master seed and up to three
// stream coordinates (tag, index, attempt).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t index = 0,
                                 std::uint64_t attempt = 0) {
  std::uint64_t key = mix64(seed + kGoldenGamma);
  key = mix64(key ^ (tag + 0xD1B54A32D192ED03ull));
  key = mix64(key ^ (index + 0x8CB92BA72F3D8DD7ull));
  key = mix64(key ^ (attempt + 0xEB44ACCAB455D165ull));
  return key;
}

// Stream tags; one per independent randomness consumer.
namespace stream_tag {
inline constexpr std::uint64_t kMvnDraw = 0x11;
inline constexpr std::uint64_t kBootstrapDraw = 0x22;
inline constexpr std::uint64_t kPanelNoise = 0x33;
inline constexpr std::uint64_t kDeltaDraw = 0x44;
inline constexpr std::uint64_t kReplicateData = 0x55;
inline constexpr std::uint64_t kReplicateAsym = 0x66;
inline constexpr std::uint64_t kReplicateBoot = 0x77;
inline constexpr std::uint64_t kTableCell = 0x88;
}  // namespace stream_tag

// xoshiro256++ (Blackman, Vigna), seeded through SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += kGoldenGamma;
      word = mix64(sm);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double uniform_open01() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased-to-negligible bounded integer (Lemire multiply-shift).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Standard normal via Box-Muller; the second value of each pair is
  // cached so consecutive calls consume one uniform pair per two draws.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Chi-squared with integer degrees of freedom: pairs of degrees come
  // from exponentials, an odd remainder from one squared normal.
  double chi_squared(int dof) {
    double sum = 0.0;
    int k = dof;
    while (k >= 2) {
      sum += -2.0 * std::log(uniform_open01());
      k -= 2;
    }
    if (k == 1) {
      const double z = gaussian();
      sum += z * z;
    }
    return sum;
  }

  double student_t(int dof) {
    return gaussian() / std::sqrt(chi_squared(dof) / static_cast<double>(dof));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Rng make_stream(std::uint64_t seed, std::uint64_t tag,
                       std::uint64_t index = 0, std::uint64_t attempt = 0) {
  return Rng(derive_seed(seed, tag, index, attempt));
}

}  // namespace panelcp
