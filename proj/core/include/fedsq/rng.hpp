#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace fedsq {

// splitmix64 finalizer; used for seed derivation so that streams for
// (seed, client, round) triples are decorrelated and order-independent.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x9e3779b97f4a7c15ull));
}

inline std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return combine_seed(combine_seed(a, b), c);
}

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; every derived draw below is
// implemented here (not via std::*_distribution, which is
// implementation-defined) so streams replay identically everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased integer in [0, n) by rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return static_cast<std::size_t>(v % bound);
  }

  // Standard normal via Box-Muller; the pair's second value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Gamma(alpha, 1) via Marsaglia-Tsang; alpha < 1 boosted through
  // Gamma(alpha + 1) * U^(1/alpha).
  double gamma(double alpha) {
    if (alpha < 1.0) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Proportions over m cells from a symmetric Dirichlet(alpha).
  std::vector<double> dirichlet(double alpha, std::size_t m) {
    std::vector<double> p(m);
    double sum = 0.0;
    for (auto& v : p) {
      v = gamma(alpha);
      sum += v;
    }
    if (sum <= 0.0) {
      // All draws underflowed (pathologically small alpha): fall back to uniform.
      for (auto& v : p) v = 1.0 / static_cast<double>(m);
      return p;
    }
    for (auto& v : p) v /= sum;
    return p;
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fedsq
