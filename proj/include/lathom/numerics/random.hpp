#pragma once

#include <cstdint>
#include <random>

namespace lathom::numerics {

/// Seeded random stream with a platform-independent draw sequence.
///
/// The engine is std::mt19937_64, whose output is fixed by the standard. The
/// conversions to uniform and normal variates are implemented here because the
/// standard distributions are implementation defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() {
    ++counter_;
    return engine_();
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  /// Standard normal variate (Box-Muller, both halves used).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Lognormal variate with the given arithmetic mean and coefficient of variation.
/// sigma^2 = ln(1 + cov^2), mu_log = ln(mean) - sigma^2 / 2. cov == 0 returns mean exactly.
double lognormal_draw(RandomStream& stream, double mean, double cov);

/// Derives an independent child seed (splitmix64 of the pair).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace lathom::numerics
