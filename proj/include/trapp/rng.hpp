#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace trapp {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derive an independent stream seed from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

/// mt19937_64 with hand-rolled value mappings. The standard distributions
/// are implementation-defined, these mappings are not, so identical seeds
/// give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  /// Box-Muller without caching: every call consumes exactly two draws.
  double normal(double mu, double sigma) {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mu + sigma * r * std::cos(2.0 * 3.141592653589793 * u2);
  }

  double normal_positive(double mu, double sigma) {
    double x;
    do {
      x = normal(mu, sigma);
    } while (x <= 0);
    return x;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace trapp
