#ifndef NUSTABLE_RNG_HPP
#define NUSTABLE_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "nustable/error.hpp"

namespace nustable {

/// xoshiro256** 1.0 (Blackman & Vigna) seeded through SplitMix64.
///
/// The state is filled by four SplitMix64 outputs starting from `seed`
/// (increment 0x9e3779b97f4a7c15, finalizer multipliers 0xbf58476d1ce4e5b9
/// and 0x94d049bb133111eb). Stream `s` then applies the 2^128 jump `s`
/// times, so substreams never overlap. Every draw is integer arithmetic, so
/// a (seed, stream) pair yields the same bits on every platform.
class RngStream {
public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream = 0) : seed_(seed), stream_(0) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
    for (std::uint64_t i = 0; i < stream; ++i) jump();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next(); }

  result_type next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Advance by 2^128 draws and bump the stream index. On a fresh stream
  /// this yields exactly RngStream(seed(), stream() + 1).
  void jump() {
    static constexpr std::array<std::uint64_t, 4> kJump = {0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                                           0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
      for (int b = 0; b < 64; ++b) {
        if (word & (std::uint64_t{1} << b))
          for (int i = 0; i < 4; ++i) acc[i] ^= s_[i];
        next();
      }
    }
    s_ = acc;
    ++stream_;
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }


  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Standard normal by Box-Muller (cosine branch, one variate per call).
inline double standard_normal(RngStream& rng) {
  const double u1 = rng.uniform_open();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Exponential with unit mean.
inline double standard_exponential(RngStream& rng) { return -std::log(rng.uniform_open()); }

/// Gamma(shape, 1).
///
/// shape < 1: Ahrens-Dieter GS rejection; shape >= 1: Marsaglia-Tsang.
inline double gamma_variate(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw DomainError("gamma_variate: shape must be positive");
  if (shape == 1.0) return standard_exponential(rng);
  if (shape < 1.0) {
    const double b = 1.0 + shape / std::numbers::e;
    for (;;) {
      const double p = b * rng.uniform_open();
      if (p <= 1.0) {
        const double x = std::pow(p, 1.0 / shape);
        if (rng.uniform_open() <= std::exp(-x)) return x;
      } else {
        const double x = -std::log((b - p) / shape);
        if (rng.uniform_open() <= std::pow(x, shape - 1.0)) return x;
      }
    }
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

} // namespace nustable

#endif // NUSTABLE_RNG_HPP
