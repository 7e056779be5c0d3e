#include "lathom/constitutive/permeability.hpp"

#include <atomic>
#include <cmath>

#include <spdlog/spdlog.h>

#include "lathom/numerics/random.hpp"

namespace lathom::constitutive {
namespace {

std::atomic<bool> g_negative_warned{false};

double clamp_pressure(double p) {
  if (p < 0.0) {
    if (!g_negative_warned.exchange(true))
      spdlog::warn("negative pressure {:.6g} Pa clamped to 0 in the van Genuchten law (reported once)", p);
    return 0.0;
  }
  return p;
}

}  // namespace

double saturation(double p, double m, double alpha) {
  p = clamp_pressure(p);
  return std::pow(1.0 + std::pow(p / alpha, 1.0 / (1.0 - m)), -m);
}

double saturation_derivative(double p, double m, double alpha) {
  if (p <= 0.0) return 0.0;
  const double r = std::pow(p / alpha, 1.0 / (1.0 - m));
  return -m * std::pow(1.0 + r, -m - 1.0) * r / ((1.0 - m) * p);
}

double kappa_r(double z, double m) {
  const double b = 1.0 - std::pow(1.0 - std::pow(z, 1.0 / m), 2);
  return std::sqrt(z) * b * b;
}

double kappa_r_derivative(double z, double m) {
  if (z <= 0.0) return 0.0;
  const double zm = std::pow(z, 1.0 / m);
  const double b = 1.0 - (1.0 - zm) * (1.0 - zm);
  const double db = 2.0 * (1.0 - zm) * zm / (m * z);
  return 0.5 / std::sqrt(z) * b * b + std::sqrt(z) * 2.0 * b * db;
}

PermeabilityModel PermeabilityModel::linear(double lambda0) {
  PermeabilityModel m;
  m.variant = PermeabilityVariant::Linear;
  m.lambda0 = lambda0;
  return m;
}

PermeabilityModel PermeabilityModel::van_genuchten(const VanGenuchtenParams& params) {
  if (!(params.m > 0.0 && params.m < 1.0)) throw Error("van Genuchten m must lie in (0, 1)");
  if (!(params.alpha > 0.0) || !(params.mu > 0.0) || !(params.kappa0 > 0.0) || !(params.rho_w > 0.0))
    throw Error("van Genuchten alpha, mu, kappa0 and rho_w must be positive");
  PermeabilityModel m;
  m.variant = PermeabilityVariant::VanGenuchten;
  m.vg = params;
  m.lambda0 = params.rho_w * params.kappa0 / params.mu;
  return m;
}

double PermeabilityModel::relative(double p) const {
  if (variant == PermeabilityVariant::Linear) return 1.0;
  return kappa_r(saturation(p, vg.m, vg.alpha), vg.m);
}

double PermeabilityModel::relative_derivative(double p) const {
  if (variant == PermeabilityVariant::Linear || p <= 0.0) return 0.0;
  const double z = saturation(p, vg.m, vg.alpha);
  return kappa_r_derivative(z, vg.m) * saturation_derivative(p, vg.m, vg.alpha);
}

PermeabilityVariant permeability_variant_from_name(const std::string& name) {
  if (name == "linear") return PermeabilityVariant::Linear;
  if (name == "van_genuchten") return PermeabilityVariant::VanGenuchten;
  throw ConfigError("unknown permeability model '" + name + "' (expected linear or van_genuchten)");
}

void randomize_lambda0(geometry::DualNetwork& network, double mean, double cov, std::uint64_t seed) {
  numerics::RandomStream rng(seed);
  for (auto& e : network.elements) e.lambda0 = numerics::lognormal_draw(rng, mean, cov);
}

void set_lambda0(geometry::DualNetwork& network, double lambda0) {
  if (!(lambda0 > 0.0)) throw Error("lambda0 must be positive");
  for (auto& e : network.elements) e.lambda0 = lambda0;
  for (auto& b : network.boundary) b.lambda0 = lambda0;
}

}  // namespace lathom::constitutive
