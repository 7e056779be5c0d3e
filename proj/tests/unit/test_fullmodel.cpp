#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "lathom/constitutive/permeability.hpp"
#include "lathom/fullmodel/full.hpp"
#include "lathom/geometry/generators.hpp"
#include "lathom/rve/rve.hpp"

using namespace lathom;
using namespace lathom::fullmodel;
using geometry::DualNetwork;
using geometry::Side;
using numerics::BackwardEuler;
using numerics::StepperOptions;
using numerics::TimeFunction;

namespace {

// Nodes on a line along x at the given positions, unit cross-section, boundary
// facets at x = 0 and x = L with half links of the end spacings.
DualNetwork chain(const std::vector<double>& x, const std::vector<double>& lambda, double length) {
  DualNetwork net;
  net.n_dim = 2;
  net.periodic = false;
  net.cell = Vec3(length, 1, 1);
  for (std::size_t i = 0; i < x.size(); ++i) net.nodes.push_back({static_cast<int>(i), Vec3(x[i], 0.5, 0), 0.1});
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    geometry::ConduitElement e;
    e.id = static_cast<int>(i);
    e.node_p = static_cast<int>(i);
    e.node_q = static_cast<int>(i + 1);
    e.length = x[i + 1] - x[i];
    e.direction = e.normal = Vec3::UnitX();
    e.area = e.projected_area = 1.0;
    e.lambda0 = lambda[i];
    net.elements.push_back(e);
  }
  net.boundary.push_back({0, Side::Left, 1.0, x.front(), -Vec3::UnitX(), lambda.front()});
  net.boundary.push_back({static_cast<int>(x.size() - 1), Side::Right, 1.0, length - x.back(), Vec3::UnitX(),
                          lambda.back()});
  return net;
}

std::vector<SideCondition> ends(double left, double right) {
  return {{Side::Left, 0, TimeFunction::constant(left)}, {Side::Right, 0, TimeFunction::constant(right)}};
}

VectorX steady(FullPressureProblem& pb, BackwardEuler** keep = nullptr) {
  StepperOptions opt;
  opt.steady = true;
  opt.newton.rtol = 1e-12;
  static std::unique_ptr<BackwardEuler> be;
  be = std::make_unique<BackwardEuler>(pb, VectorX::Zero(pb.size()), pb.prescribed(), opt);
  be->advance(1.0);
  if (keep) *keep = be.get();
  return be->state();
}

DualNetwork voronoi_rve(std::uint64_t seed, double size = 0.05) {
  const Vec3 cell(size, size, 0);
  return geometry::build_voronoi_dual(geometry::generate_periodic_nuclei(cell, 2, 0.01, seed), cell, 2);
}

double jacobian_error(numerics::TransientProblem& pb, const VectorX& u, const VectorX& up, double dt,
                      const VectorX& steps) {
  VectorX r;
  Eigen::SparseMatrix<double> J;
  pb.assemble(u, up, dt, r, &J);
  const Eigen::MatrixXd A(J);
  double err = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    VectorX a = u, b = u, ra, rb;
    a[j] += steps[j];
    b[j] -= steps[j];
    pb.assemble(a, up, dt, ra, nullptr);
    pb.assemble(b, up, dt, rb, nullptr);
    const VectorX col = (ra - rb) / (2 * steps[j]);
    for (int i = 0; i < u.size(); ++i) {
      const double scale = std::max(A.row(i).cwiseAbs().maxCoeff(), 1e-300);
      err = std::max(err, std::abs(col[i] - A(i, j)) / scale);
    }
  }
  return err;
}

}  // namespace

TEST_SUITE("fullmodel") {
  TEST_CASE("single element carries lambda S* / h dp") {
    auto net = chain({0.0, 0.4}, {3.0}, 0.4);
    FullPressureProblem pb(net, constitutive::PermeabilityModel::linear(1.0), {}, ends(2.0, 7.0));
    BackwardEuler* be = nullptr;
    steady(pb, &be);
    CHECK(pb.side_flux(Side::Right, 0, be->residual()) == doctest::Approx(3.0 * 1.0 / 0.4 * 5.0).epsilon(1e-14));
    CHECK(pb.side_flux(Side::Left, 0, be->residual()) == doctest::Approx(-3.0 / 0.4 * 5.0).epsilon(1e-14));
  }

  TEST_CASE("series chain composes harmonically in both Dirichlet modes") {
    const std::vector<double> x{0.1, 0.3, 0.6, 1.0}, lam{1.0, 4.0, 2.0};
    auto net = chain(x, lam, 1.2);
    FullPressureProblem nodes(net, constitutive::PermeabilityModel::linear(1.0), {}, ends(0.0, 1.0));
    BackwardEuler* be = nullptr;
    steady(nodes, &be);
    const double r_nodes = 0.2 / 1.0 + 0.3 / 4.0 + 0.4 / 2.0;
    CHECK(nodes.side_flux(Side::Right, 0, be->residual()) == doctest::Approx(1.0 / r_nodes).epsilon(1e-12));

    FullPressureProblem facets(net, constitutive::PermeabilityModel::linear(1.0), {}, ends(0.0, 1.0),
                               DirichletMode::Facets);
    steady(facets, &be);
    const double r_facets = r_nodes + 0.1 / 1.0 + 0.2 / 2.0;
    CHECK(facets.side_flux(Side::Right, 0, be->residual()) == doctest::Approx(1.0 / r_facets).epsilon(1e-12));
    CHECK(facets.side_flux(Side::Left, 0, be->residual()) == doctest::Approx(-1.0 / r_facets).epsilon(1e-12));
  }

  TEST_CASE("floating nodes and unknown sides are rejected") {
    auto net = chain({0.0, 0.4}, {3.0}, 0.4);
    net.nodes.push_back({2, Vec3(0.2, 0.9, 0), 0.1});
    CHECK_THROWS_AS(FullPressureProblem(net, constitutive::PermeabilityModel::linear(1.0), {}, ends(0, 1)), Error);
    auto net2 = chain({0.0, 0.4}, {3.0}, 0.4);
    CHECK_THROWS_AS(FullPressureProblem(net2, constitutive::PermeabilityModel::linear(1.0), {},
                                        {{Side::Top, 0, TimeFunction::constant(0.0)}}),
                    Error);
  }

  TEST_CASE("tiled prism: global balance and maximum principle") {
    auto rve = voronoi_rve(21);
    constitutive::randomize_lambda0(rve, 1.0, 0.2, 3);
    for (auto mode : {geometry::BoundaryMode::Cut, geometry::BoundaryMode::Clip})
      for (auto dmode : {DirichletMode::Nodes, DirichletMode::Facets}) {
        const auto net = geometry::tile_full_domain(rve, {6, 2, 1}, mode);
        constitutive::CapacitySource src{0, 0, 0.3, 0};
        FullPressureProblem pb(net, constitutive::PermeabilityModel::linear(1.0), src, ends(0.0, 1.0), dmode);
        BackwardEuler* be = nullptr;
        steady(pb, &be);
        const double in = pb.side_flux(Side::Right, 0, be->residual());
        const double out = pb.side_flux(Side::Left, 0, be->residual());
        double wq = 0.0;
        for (const auto& n : net.nodes) wq += n.volume * 0.3;
        CHECK(std::abs(in + out + wq) <= 1e-8 * std::abs(in));

        FullPressureProblem lin(net, constitutive::PermeabilityModel::linear(1.0), {}, ends(0.0, 1.0), dmode);
        const VectorX p = steady(lin).head(lin.node_count());
        CHECK(p.minCoeff() >= -1e-12);
        CHECK(p.maxCoeff() <= 1.0 + 1e-12);
      }
  }

  TEST_CASE("interior fluxes reproduce the RVE solution") {
    auto rve = voronoi_rve(5);
    constitutive::randomize_lambda0(rve, 1.0, 0.3, 9);
    const Vec3 a(0.8, -0.6, 0.0);
    const auto sys = rve::assemble(rve);
    const auto sol = rve::solve_eigen_gradient(sys, a);

    const int reps = 7;
    const auto net = geometry::tile_full_domain(rve, {reps, reps, 1}, geometry::BoundaryMode::Cut);
    std::vector<SideCondition> bcs;
    // linear ramp p = a.x on every side, via per-node conditions on a linear material
    FullPressureProblem pb(net, constitutive::PermeabilityModel::linear(1.0), {}, {});
    std::vector<numerics::PrescribedDof> fixed;
    for (Side s : {Side::Left, Side::Right, Side::Bottom, Side::Top})
      for (int node : boundary_nodes(net, s))
        fixed.push_back({node, TimeFunction::constant(a.dot(net.nodes[node].position))});
    StepperOptions opt;
    opt.steady = true;
    opt.newton.rtol = 1e-13;
    BackwardEuler be(pb, VectorX::Zero(pb.size()), fixed, opt);
    be.advance(1.0);
    const VectorX& p = be.state();

    const int n = static_cast<int>(rve.nodes.size());
    const int centre = (reps / 2) * reps + reps / 2;
    double num = 0.0, den = 0.0;
    int matched = 0;
    for (const auto& e : net.elements) {
      if (e.node_p / n != centre) continue;
      for (const auto& r : rve.elements)
        if (r.node_p == e.node_p % n && r.node_q == e.node_q % n && (r.direction - e.direction).norm() < 1e-12) {
          const double j = -e.lambda0 * (p[e.node_q] - p[e.node_p]) / e.length;
          num += std::pow(j - sol.j0[r.id], 2);
          den += std::pow(sol.j0[r.id], 2);
          ++matched;
        }
    }
    CHECK(matched > 10);
    CHECK(std::sqrt(num / den) <= 0.01);
  }

  TEST_CASE("line interpolation") {
    auto rve = voronoi_rve(8);
    const auto net = geometry::tile_full_domain(rve, {8, 2, 1});
    VectorX uni = VectorX::Constant(static_cast<long>(net.nodes.size()), 3.5), lin(uni.size());
    for (long i = 0; i < lin.size(); ++i) lin[i] = net.nodes[i].position.x();
    const Vec3 a(0.0, 0.05, 0), b(0.4, 0.05, 0);
    const auto pu = interpolate_line(net, uni, a, b, 21);
    REQUIRE(pu.size() == 21);
    for (double v : pu) CHECK(v == doctest::Approx(3.5));
    const auto pl = interpolate_line(net, lin, a, b, 21);
    for (int s = 0; s < 21; ++s) CHECK(std::abs(pl[s] - 0.4 * s / 20.0) <= 0.02 * 0.4);
    CHECK(interpolate_point(net, lin, net.nodes[7].position) == lin[7]);
  }

  TEST_CASE("full-model Jacobians match central differences") {
    auto rve = voronoi_rve(13);
    const auto net = geometry::tile_full_domain(rve, {2, 1, 1});
    std::mt19937 gen(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (auto dmode : {DirichletMode::Nodes, DirichletMode::Facets}) {
      FullPressureProblem pb(net, constitutive::PermeabilityModel::van_genuchten({}), {1e-9, 1e-16, 2e-6, -1e-13},
                             ends(0.0, 1e6), dmode);
      VectorX u(pb.size()), up(pb.size());
      for (long i = 0; i < u.size(); ++i) u[i] = 1e6 * U(gen), up[i] = 1e6 * U(gen);
      CHECK(jacobian_error(pb, u, up, 100.0, VectorX::Constant(u.size(), 10.0)) <= 1e-5);

      constitutive::HtcParams hp;
      hp.s = 20.0;
      hp.alpha_s_inf = 0.5;
      FullHtcProblem hb(net, hp,
                        {{Side::Left, 0, TimeFunction::constant(1.0)},
                         {Side::Left, 1, TimeFunction::constant(293.15)},
                         {Side::Right, 1, TimeFunction::constant(293.15)}},
                        dmode);
      VectorX h(hb.size()), hprev(hb.size()), steps(hb.size());
      for (long i = 0; i < h.size() / 2; ++i) {
        h[2 * i] = 0.7 + 0.3 * U(gen);
        h[2 * i + 1] = 283.15 + 40 * U(gen);
        hprev[2 * i] = h[2 * i] - 0.01 * U(gen);
        hprev[2 * i + 1] = h[2 * i + 1] - 1.0 * U(gen);
        steps[2 * i] = 1e-6;
        steps[2 * i + 1] = 1e-4;
      }
      hb.commit(hprev, hprev, 36000.0);
      CHECK(jacobian_error(hb, h, hprev, 3600.0, steps) <= 1e-5);
    }
  }

  TEST_CASE("sealed HTC lattice stores exactly the released heat") {
    auto rve = voronoi_rve(4);
    const auto net = geometry::tile_full_domain(rve, {2, 2, 1});
    FullHtcProblem pb(net, {}, {});
    StepperOptions opt;
    opt.newton.field_atol = {1e-16, 1e-12};
    BackwardEuler be(pb, pb.uniform_state({1.0, 293.15}), pb.prescribed(), opt);
    for (int s = 1; s <= 40; ++s) be.advance(s * 3 * 3600.0);
    CHECK(pb.stored_heat(be.state(), 293.15) == doctest::Approx(pb.released_heat()).epsilon(1e-8));
    const VectorX T = pb.node_values(be.state(), 1);
    CHECK(T.maxCoeff() - T.minCoeff() <= 1e-8);
  }
}
