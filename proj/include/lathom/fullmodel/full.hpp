#pragma once

#include <vector>

#include "lathom/constitutive/htc.hpp"
#include "lathom/constitutive/permeability.hpp"
#include "lathom/geometry/network.hpp"
#include "lathom/numerics/stepper.hpp"

namespace lathom::fullmodel {

/// How a prescribed value on a box side enters the discrete balance.
enum class DirichletMode {
  Nodes,   // every node whose control volume touches the side is prescribed
  Facets,  // boundary facets link their node to a prescribed plate value over the half link
};

DirichletMode dirichlet_mode_from_name(const std::string& name);

struct SideCondition {
  geometry::Side side = geometry::Side::Left;
  int field = 0;
  numerics::TimeFunction value;
};

/// Nodes owning at least one boundary facet on `side`, ascending.
std::vector<int> boundary_nodes(const geometry::DualNetwork& network, geometry::Side side);

/// Control-volume balance on a non-periodic network. DOFs: `fields` per node, then
/// `fields` per side plate (Facets mode only; plates of unprescribed fields are
/// pinned at zero and unconnected). Residuals at prescribed DOFs are inflows.
class NetworkProblem : public numerics::TransientProblem {
 public:
  NetworkProblem(const geometry::DualNetwork& network, int fields, std::vector<SideCondition> conditions,
                 DirichletMode mode);

  int size() const override { return fields_ * (node_count() + static_cast<int>(plates_.size())); }
  int fields() const override { return fields_; }
  int node_count() const { return static_cast<int>(network_.nodes.size()); }
  const geometry::DualNetwork& network() const { return network_; }
  DirichletMode mode() const { return mode_; }

  std::vector<numerics::PrescribedDof> prescribed() const;
  /// Sum of the reactions of `field` attributed to `side` (kg/s or W).
  double side_flux(geometry::Side side, int field, const VectorX& residual) const;
  /// Nodal values of one field (plates excluded).
  VectorX node_values(const VectorX& u, int field) const;
  /// Initial state with `values[field]` everywhere.
  VectorX uniform_state(const std::vector<double>& values) const;

 protected:
  struct Link {
    int p, q;        // node indices; q >= node_count() addresses plate q - node_count()
    double factor;   // lambda0 S / h (elements) or lambda0 A / d (facets)
    bool field_active[2];
  };
  const std::vector<Link>& links() const { return links_; }

 private:
  const geometry::DualNetwork& network_;
  int fields_;
  std::vector<SideCondition> conditions_;
  DirichletMode mode_;
  std::vector<geometry::Side> plates_;
  std::vector<Link> links_;
};

/// Pressure with j = -lambda0 kappa_r(p_bar) (p_Q - p_P) / h, p_bar the arithmetic mean.
class FullPressureProblem final : public NetworkProblem {
 public:
  FullPressureProblem(const geometry::DualNetwork& network, constitutive::PermeabilityModel model,
                      constitutive::CapacitySource storage, std::vector<SideCondition> conditions,
                      DirichletMode mode = DirichletMode::Nodes);
  void assemble(const VectorX& u, const VectorX& u_prev, double dt, VectorX& residual,
                Eigen::SparseMatrix<double>* jacobian) override;

 private:
  constitutive::PermeabilityModel model_;
  constitutive::CapacitySource storage_;
};

/// Hygro-thermo-chemical balance at the nodes (dof = 2 node + field, 0 = H, 1 = T in K).
/// Element lambda0 acts as a geometric multiplier of D_H and kappa.
class FullHtcProblem final : public NetworkProblem {
 public:
  FullHtcProblem(const geometry::DualNetwork& network, constitutive::HtcParams params,
                 std::vector<SideCondition> conditions, DirichletMode mode = DirichletMode::Nodes);
  void assemble(const VectorX& u, const VectorX& u_prev, double dt, VectorX& residual,
                Eigen::SparseMatrix<double>* jacobian) override;
  void commit(const VectorX& u, const VectorX& u_prev, double dt) override;

  const std::vector<constitutive::HtcState>& states() const { return states_; }
  VectorX nodal_alpha_c() const;
  double released_heat() const { return released_heat_; }
  double stored_heat(const VectorX& u, double t_ref) const;

 private:
  constitutive::HtcParams params_;
  std::vector<constitutive::HtcState> states_;
  double released_heat_ = 0.0;
};

/// Inverse-distance weighting (power 2) over the k nearest nodes.
double interpolate_point(const geometry::DualNetwork& network, const VectorX& node_values, const Vec3& x, int k = 4);

/// `samples` uniformly spaced points from a to b, endpoints included.
std::vector<double> interpolate_line(const geometry::DualNetwork& network, const VectorX& node_values, const Vec3& a,
                                     const Vec3& b, int samples, int k = 4);

}  // namespace lathom::fullmodel
