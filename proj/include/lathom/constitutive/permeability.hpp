#pragma once

#include <cstdint>
#include <string>

#include "lathom/geometry/network.hpp"

namespace lathom::constitutive {

/// Van Genuchten saturation z = (1 + (p/alpha)^(1/(1-m)))^(-m) for p >= 0 (Pa).
/// Negative p is clamped to 0 and reported once through the log.
double saturation(double p, double m, double alpha);
/// dz/dp; zero at and below p = 0.
double saturation_derivative(double p, double m, double alpha);
/// Relative permeability kappa_r = sqrt(z) [1 - (1 - z^(1/m))^2]^2, z in (0, 1].
double kappa_r(double z, double m);
double kappa_r_derivative(double z, double m);

enum class PermeabilityVariant { Linear, VanGenuchten };

struct VanGenuchtenParams {
  double m = 0.5;
  double alpha = 1.0e6;    // Pa
  double mu = 8.9e-4;      // Pa s
  double kappa0 = 5e-18;   // m^2
  double rho_w = 1000.0;   // kg/m^3
};

/// lambda(p) = lambda0 * kappa_r(p): the multiplicative form the fast path relies on.
struct PermeabilityModel {
  PermeabilityVariant variant = PermeabilityVariant::Linear;
  double lambda0 = 1.0;  // s
  VanGenuchtenParams vg;

  static PermeabilityModel linear(double lambda0);
  /// lambda0 = rho_w kappa0 / mu.
  static PermeabilityModel van_genuchten(const VanGenuchtenParams& params);

  double relative(double p) const;
  double relative_derivative(double p) const;
  double lambda(double p) const { return lambda0 * relative(p); }
};

PermeabilityVariant permeability_variant_from_name(const std::string& name);

/// Affine capacity c(p) = c0 + c1 p and source q(p) = q0 + q1 p.
struct CapacitySource {
  double c0 = 0.0;
  double c1 = 0.0;
  double q0 = 0.0;
  double q1 = 0.0;

  double capacity(double p) const { return c0 + c1 * p; }
  double capacity_derivative(double) const { return c1; }
  double source(double p) const { return q0 + q1 * p; }
  double source_derivative(double) const { return q1; }
};

/// Independent lognormal lambda0 per element in element order (mean, coefficient of variation).
void randomize_lambda0(geometry::DualNetwork& network, double mean, double cov, std::uint64_t seed);

/// Sets every element to the same lambda0.
void set_lambda0(geometry::DualNetwork& network, double lambda0);

}  // namespace lathom::constitutive
