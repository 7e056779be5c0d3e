#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lathom/geometry/network.hpp"
#include "lathom/numerics/sparse.hpp"

namespace lathom::rve {

/// Periodic RVE operator. The network must outlive the system.
struct RveSystem {
  const geometry::DualNetwork* network = nullptr;
  std::vector<double> lambda;       // per element (s)
  std::vector<double> conductance;  // lambda S* / h per element
  int pinned_node = 0;
  numerics::SparseSymmetric K;      // before pinning: K 1 = 0
  numerics::SparseSymmetric K_reduced;
  std::vector<int> free_nodes;      // all nodes except the pinned one
};

/// Assembles with element permeabilities `lambda` (one per element). The pinned
/// node is drawn from `pin_seed`. Throws Error("singular RVE ...") for a
/// disconnected network, listing the component sizes.
RveSystem assemble(const geometry::DualNetwork& network, std::span<const double> lambda, std::uint64_t pin_seed = 0);
/// Same, with lambda = lambda0 of each element.
RveSystem assemble(const geometry::DualNetwork& network, std::uint64_t pin_seed = 0);
/// Same, with an explicitly chosen pinned node.
RveSystem assemble_pinned(const geometry::DualNetwork& network, std::span<const double> lambda, int pinned_node);

struct RveSolution {
  VectorX p1;    // fluctuation per node, zero volume-weighted mean (Pa)
  VectorX g0;    // gradient per element (Pa/m)
  VectorX j0;    // flux density per element
  Vec3 f = Vec3::Zero();
  int iterations = 0;
  bool direct = false;
};

/// Right-hand side of the pinned-free system for macroscopic gradient a.
VectorX load_vector(const RveSystem& system, const Vec3& a);

/// Solves the RVE problem for gradient a and reconstructs g0, j0 and f.
RveSolution solve_eigen_gradient(const RveSystem& system, const Vec3& a, const numerics::SolveOptions& options = {});

/// f = (1/V0) sum_e h S* j0 e.
Vec3 macro_flux(std::span<const double> j0, const geometry::DualNetwork& network);

/// Quadratic form (1/V0) sum_e k_e (p1_Q - p1_P + h a.e)^2 of a solution.
double dissipation(const RveSystem& system, const RveSolution& solution, const Vec3& a);

struct EffectiveTensor {
  int n_dim = 2;
  Mat3 lambda = Mat3::Zero();        // n_dim x n_dim block used
  double asymmetry = 0.0;            // ||L - L^T|| / ||L|| before symmetrization
  std::vector<RveSolution> unit;     // solutions for a = e_i
  double cell_volume = 0.0;
};

struct TensorOptions {
  std::uint64_t pin_seed = 0;
  double asymmetry_tolerance = 1e-6;
  numerics::SolveOptions solve;
};

/// Lambda column i = -f(a = e_i) using the elements' lambda0; symmetrized after
/// the asymmetry check (Error above the tolerance).
EffectiveTensor effective_tensor(const geometry::DualNetwork& network, const TensorOptions& options = {});

/// f = -kappa_r Lambda a.
Vec3 fast_response(const EffectiveTensor& tensor, double kappa_r, const Vec3& a);

/// Fields by superposition of the stored unit solutions, scaled by kappa_r.
RveSolution fast_fields(const EffectiveTensor& tensor, double kappa_r, const Vec3& a);

}  // namespace lathom::rve
