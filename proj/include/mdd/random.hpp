#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace mdd {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 64-bit seed is the key; the 128-bit counter is split into a 64-bit
/// block index and a 64-bit stream id, so every (seed, stream) pair is an
/// independent substream that can be consumed from any thread without
/// coordination.
class Philox {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (cursor_ == 2) {
      Block ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
      buffer_ = bijection(ctr, key_);
      ++block_;
      cursor_ = 0;
    }
    const auto lo = buffer_[2 * cursor_];
    const auto hi = buffer_[2 * cursor_ + 1];
    ++cursor_;
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

  /// The raw 10-round Philox bijection.
  static Block bijection(Block ctr, Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u, kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u, kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int cursor_ = 2;
};

/// Deterministically mixes a master seed with two indices into a fresh seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  const Philox::Block out = Philox::bijection(
      {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
       static_cast<std::uint32_t>(b >> 32)},
      {static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)});
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

/// Uniform double in [0, 1) with 53 random bits.
template <class Engine>
double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform double in the open interval (a, b).
template <class Engine>
double uniform_open(Engine& eng, double a, double b) {
  const double u = (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
  return a + (b - a) * u;
}

/// Unbiased uniform integer in [0, bound) by rejection; bound > 0.
template <class Engine>
std::uint64_t uniform_index(Engine& eng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = eng();
    if (x >= threshold) return x % bound;
  }
}

template <class Engine>
double standard_normal(Engine& eng) {
  // Marsaglia polar method on our own uniforms so the stream is independent
  // of the standard library's distribution internals.
  for (;;) {
    const double u = 2.0 * uniform01(eng) - 1.0;
    const double v = 2.0 * uniform01(eng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

/// Student t with integer degrees of freedom, built as Z / sqrt(chi2_dof / dof)
/// with the chi-square formed from dof fresh squared normals.
template <class Engine>
double student_t(Engine& eng, int dof) {
  const double z = standard_normal(eng);
  double chi2 = 0.0;
  for (int k = 0; k < dof; ++k) {
    const double w = standard_normal(eng);
    chi2 += w * w;
  }
  return z / std::sqrt(chi2 / dof);
}

/// Gamma(shape, 1) by Marsaglia-Tsang; shape > 0.
template <class Engine>
double standard_gamma(Engine& eng, double shape) {
  if (shape < 1.0) {
    const double u = uniform_open(eng, 0.0, 1.0);
    return standard_gamma(eng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal(eng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(eng, 0.0, 1.0);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

template <class Engine>
double beta_variate(Engine& eng, double a, double b) {
  const double x = standard_gamma(eng, a);
  const double y = standard_gamma(eng, b);
  return x / (x + y);
}

/// Fresh seed from the system entropy source.
inline std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace mdd
