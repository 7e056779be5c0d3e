#include "lathom/numerics/random.hpp"

#include <cmath>
#include <numbers>

#include "lathom/numerics/types.hpp"

namespace lathom::numerics {

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

double lognormal_draw(RandomStream& stream, double mean, double cov) {
  if (!(mean > 0.0) || cov < 0.0) throw Error("lognormal_draw: mean must be > 0 and cov >= 0");
  if (cov == 0.0) return mean;
  const double sigma2 = std::log1p(cov * cov);
  const double mu = std::log(mean) - 0.5 * sigma2;
  return std::exp(mu + std::sqrt(sigma2) * stream.normal());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace lathom::numerics
