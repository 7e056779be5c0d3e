#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "lathom/constitutive/permeability.hpp"
#include "lathom/geometry/generators.hpp"
#include "lathom/macro/mesh.hpp"
#include "lathom/macro/problems.hpp"

using namespace lathom;
using namespace lathom::macro;
using numerics::BackwardEuler;
using numerics::StepperOptions;
using numerics::TimeFunction;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = a + (b - a) * i / n;
  return v;
}

std::shared_ptr<const FluxPath> isotropic(double lambda0,
                                          constitutive::PermeabilityModel m = constitutive::PermeabilityModel::linear(1.0)) {
  return std::make_shared<FastFluxPath>(Mat2(lambda0 * Mat2::Identity()), m);
}

// Max entry of (FD - analytic) over max |analytic|, central differences.
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

geometry::DualNetwork small_rve(std::uint64_t seed) {
  const Vec3 cell(0.05, 0.05, 0);
  auto net = geometry::build_voronoi_dual(geometry::generate_periodic_nuclei(cell, 2, 0.01, seed), cell, 2);
  constitutive::randomize_lambda0(net, 5.618e-12, 0.2, seed + 1);
  return net;
}

}  // namespace

TEST_SUITE("macro") {
  TEST_CASE("structured mesh: sets, weights and inverted elements") {
    auto m = MacroMesh::structured({0, 0.3, 1.2}, {0, 0.1, 0.3}, 2.0);
    CHECK(m.nodes.size() == 9);
    CHECK(m.elements.size() == 4);
    CHECK(m.node_set("left") == std::vector<int>{0, 3, 6});
    CHECK(m.node_set("top") == std::vector<int>{6, 7, 8});
    double total = 0.0;
    for (const auto& ip : integration_points(m)) total += ip.weight;
    CHECK(total == doctest::Approx(1.2 * 0.3 * 2.0));
    CHECK_NOTHROW(m.validate());
    std::swap(m.elements[1][1], m.elements[1][3]);
    CHECK_THROWS_AS(m.validate(), Error);
    CHECK_THROWS_AS(MacroMesh::structured({0, 0}, {0, 1}), Error);
    CHECK_THROWS_AS(m.node_set("nope"), Error);
  }

  TEST_CASE("interpolation reproduces bilinear fields on a distorted mesh") {
    auto m = MacroMesh::structured(linspace(0, 1, 2), linspace(0, 1, 2));
    m.nodes[4] += Vec2(0.07, -0.05);
    VectorX u(m.nodes.size());
    auto f = [](const Vec2& x) { return 1.0 + 2 * x.x() - 3 * x.y(); };
    for (std::size_t i = 0; i < m.nodes.size(); ++i) u[i] = f(m.nodes[i]);
    for (const Vec2 x : {Vec2(0.1, 0.2), Vec2(0.55, 0.45), Vec2(1.0, 1.0), Vec2(0.9, 0.05)})
      CHECK(interpolate(m, u, 1, 0, x) == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK_THROWS_AS(interpolate(m, u, 1, 0, Vec2(1.5, 0.5)), Error);
    const auto prof = line_profile(m, u, 1, 0, Vec2(0, 0.5), Vec2(1, 0.5), 11);
    REQUIRE(prof.size() == 11);
    CHECK(prof.front() == doctest::Approx(f(Vec2(0, 0.5))));
    CHECK(prof.back() == doctest::Approx(f(Vec2(1, 0.5))));
  }

  TEST_CASE("one-element strip: linear interpolant has zero residual") {
    const auto m = MacroMesh::structured({0, 2}, {0, 1});
    PressureProblem pb(m, isotropic(3.0));
    VectorX u(4), r;
    for (int i = 0; i < 4; ++i) u[i] = 5.0 * m.nodes[i].x() / 2.0;
    pb.assemble(u, u, 0.0, r, nullptr);
    // interior balance is trivially absent; the reactions are +-lambda P / L * height / 2
    CHECK(r[0] == doctest::Approx(-3.0 * 2.5 * 0.5));
    CHECK(r[1] == doctest::Approx(3.0 * 2.5 * 0.5));
    CHECK(r.sum() == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("homogeneous prism carries the analytic 1D Darcy flux") {
    const auto m = MacroMesh::structured(linspace(0, 1.2, 4), {0, 0.3});
    PressureProblem pb(m, isotropic(5.618e-12));
    auto bc = prescribe(m, "left", 1, 0, TimeFunction::constant(0.0));
    auto right = prescribe(m, "right", 1, 0, TimeFunction::constant(1e6));
    bc.insert(bc.end(), right.begin(), right.end());
    StepperOptions opt;
    opt.steady = true;
    BackwardEuler be(pb, VectorX::Zero(pb.size()), bc, opt);
    be.advance(1.0);
    const double in = to_grams_per_day(boundary_flux(m, "right", be.residual(), be.fixed()));
    const double out = to_grams_per_day(boundary_flux(m, "left", be.residual(), be.fixed()));
    CHECK(in == doctest::Approx(5.618e-12 * (1e6 / 1.2) * 0.3 * 86400 * 1000).epsilon(1e-10));
    CHECK(in == doctest::Approx(121.35).epsilon(5e-4));
    CHECK(std::abs(in + out) <= 1e-8 * std::abs(in));
    CHECK(be.newton_iterations() == 1);
    CHECK_THROWS_AS(boundary_flux(m, "top", be.residual(), be.fixed()), Error);
  }

  TEST_CASE("manufactured solution converges at second order") {
    // -div grad p = -2 with p = x^2 on the unit square
    std::vector<double> errors;
    for (int n : {4, 8, 16}) {
      const auto m = MacroMesh::structured(linspace(0, 1, n), linspace(0, 1, n));
      PressureProblem pb(m, isotropic(1.0));
      pb.set_body_source([](const Vec2&) { return -2.0; });
      std::vector<numerics::PrescribedDof> bc;
      for (const char* s : {"left", "right", "bottom", "top"})
        for (int node : m.node_set(s)) bc.push_back({node, TimeFunction::constant(std::pow(m.nodes[node].x(), 2))});
      StepperOptions opt;
      opt.steady = true;
      BackwardEuler be(pb, VectorX::Zero(pb.size()), bc, opt);
      be.advance(1.0);
      double e2 = 0.0;
      for (const auto& ip : pb.points()) {
        double p = 0.0;
        for (int a = 0; a < 4; ++a) p += ip.N[a] * be.state()[m.elements[ip.element][a]];
        e2 += ip.weight * std::pow(p - ip.x.x() * ip.x.x(), 2);
      }
      errors.push_back(std::sqrt(e2));
    }
    for (std::size_t k = 1; k < errors.size(); ++k) {
      const double order = std::log2(errors[k - 1] / errors[k]);
      CHECK(order == doctest::Approx(2.0).epsilon(0.1));
    }
  }

  TEST_CASE("fast and slow paths agree for a multiplicative material") {
    auto rve = std::make_shared<const geometry::DualNetwork>(small_rve(11));
    const auto model = constitutive::PermeabilityModel::van_genuchten({});
    const auto tensor = rve::effective_tensor(*rve);
    auto fast = std::make_shared<FastFluxPath>(tensor, model);
    auto slow = std::make_shared<SlowFluxPath>(rve, model);

    const auto m = MacroMesh::structured(linspace(0, 0.2, 2), linspace(0, 0.1, 1));
    PressureProblem pf(m, fast), ps(m, slow);
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> U(1e5, 9e5);
    VectorX u(pf.size());
    for (long i = 0; i < u.size(); ++i) u[i] = U(gen);
    VectorX rf, rs;
    pf.assemble(u, u, 0.0, rf, nullptr);
    ps.assemble(u, u, 0.0, rs, nullptr);
    CHECK((rf - rs).norm() <= 1e-10 * rf.norm());

    const auto r1 = fast->evaluate(4e5, Vec2(1e6, -3e5));
    const auto r2 = slow->evaluate(4e5, Vec2(1e6, -3e5));
    CHECK((r1.df_da - r2.df_da).norm() <= 1e-10 * r1.df_da.norm());
    CHECK((r1.df_dp - r2.df_dp).norm() <= 1e-5 * r1.df_dp.norm());

    // identical boundary fluxes through a full steady nonlinear solve
    auto bc = prescribe(m, "left", 1, 0, TimeFunction::constant(0.0));
    auto right = prescribe(m, "right", 1, 0, TimeFunction::constant(1e6));
    bc.insert(bc.end(), right.begin(), right.end());
    StepperOptions opt;
    opt.steady = true;
    opt.newton.rtol = 1e-12;
    double flux[2];
    int k = 0;
    for (PressureProblem* pb : {&pf, &ps}) {
      VectorX u0(pb->size());
      for (long i = 0; i < u0.size(); ++i) u0[i] = 1e6 * m.nodes[i].x() / 0.2;
      BackwardEuler be(*pb, u0, bc, opt);
      be.advance(1.0);
      flux[k++] = boundary_flux(m, "right", be.residual(), be.fixed());
    }
    CHECK(std::abs(flux[0] - flux[1]) <= 1e-9 * std::abs(flux[0]));
  }

  TEST_CASE("pressure Jacobian matches central differences") {
    const auto model = constitutive::PermeabilityModel::van_genuchten({});
    const auto m = MacroMesh::structured(linspace(0, 0.6, 3), linspace(0, 0.3, 2));
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> U(5e4, 1e6);
    for (int trial = 0; trial < 5; ++trial) {
      PressureProblem pb(m, isotropic(5.618e-12, model), {1e-9, 2e-16, 1e-7, -3e-14});
      VectorX u(pb.size()), up(pb.size());
      for (long i = 0; i < u.size(); ++i) {
        u[i] = U(gen);
        up[i] = U(gen);
      }
      CHECK(jacobian_error(pb, u, up, 600.0, VectorX::Constant(u.size(), 10.0)) <= 1e-5);
      CHECK(jacobian_error(pb, u, up, 0.0, VectorX::Constant(u.size(), 10.0)) <= 1e-5);
    }
  }

  TEST_CASE("HTC Jacobian matches central differences") {
    const auto m = MacroMesh::structured(linspace(0, 0.2, 2), linspace(0, 0.2, 2));
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Mat2 G;
    G << 1.05, 0.02, 0.02, 0.97;
    for (int trial = 0; trial < 5; ++trial) {
      constitutive::HtcParams p;
      p.alpha_s_inf = trial % 2 ? 0.5 : 0.0;
      p.s = trial % 2 ? 20.0 : 0.0;
      HtcProblem pb(m, G, p);
      VectorX u(pb.size()), up(pb.size()), steps(pb.size());
      for (long i = 0; i < u.size() / 2; ++i) {
        u[2 * i] = 0.7 + 0.29 * U(gen);
        u[2 * i + 1] = 283.15 + 40 * U(gen);
        up[2 * i] = u[2 * i] + 0.01 * (U(gen) - 0.5);
        up[2 * i + 1] = u[2 * i + 1] - 2 * U(gen);
        steps[2 * i] = 1e-6;
        steps[2 * i + 1] = 1e-4;
      }
      // advance the internal state a bit so all branches are active
      pb.commit(up, up, 3600.0 * 10 * (trial + 1));
      CHECK(jacobian_error(pb, u, up, 3600.0, steps) <= 1e-5);
    }
  }

  TEST_CASE("transient runs: constant state, conservation and maximum principle") {
    const auto m = MacroMesh::structured(linspace(0, 1.2, 6), linspace(0, 0.3, 2));
    {
      PressureProblem pb(m, isotropic(1e-3), {1.0, 0, 0, 0});
      auto bc = prescribe(m, "left", 1, 0, TimeFunction::constant(0.0));
      auto right = prescribe(m, "right", 1, 0, TimeFunction::constant(0.0));
      bc.insert(bc.end(), right.begin(), right.end());
      BackwardEuler be(pb, VectorX::Zero(pb.size()), bc, {});
      for (int s = 1; s <= 5; ++s) be.advance(s * 10.0);
      CHECK(be.state().cwiseAbs().maxCoeff() == 0.0);
    }
    PressureProblem pb(m, isotropic(1e-3), {1.0, 0, 0, 0});
    auto bc = prescribe(m, "left", 1, 0, TimeFunction::constant(0.0));
    auto right = prescribe(m, "right", 1, 0, TimeFunction({{0.0, 0.0}, {100.0, 1.0}}));
    bc.insert(bc.end(), right.begin(), right.end());
    StepperOptions opt;
    opt.newton.rtol = 1e-13;
    BackwardEuler be(pb, VectorX::Zero(pb.size()), bc, opt);
    for (int s = 1; s <= 300; ++s) {
      be.advance(s * 100.0);
      for (int node : m.node_set("right")) CHECK(be.state()[node] == TimeFunction({{0.0, 0.0}, {100.0, 1.0}})(s * 100.0));
      CHECK(be.state().minCoeff() >= -1e-12);
      CHECK(be.state().maxCoeff() <= 1.0 + 1e-12);
    }
    const double in = boundary_flux(m, "right", be.residual(), be.fixed());
    const double out = boundary_flux(m, "left", be.residual(), be.fixed());
    CHECK(std::abs(in + out) <= 1e-8 * std::abs(in));
    CHECK(in == doctest::Approx(1e-3 * 0.3 / 1.2).epsilon(1e-8));
  }

  TEST_CASE("Backward Euler is first order in time") {
    const auto m = MacroMesh::structured(linspace(0, 1, 8), linspace(0, 0.2, 1));
    std::vector<VectorX> finals;
    for (int n : {10, 20, 40, 80}) {
      PressureProblem pb(m, isotropic(1.0), {1.0, 0, 0, 0});
      auto bc = prescribe(m, "right", 1, 0, TimeFunction::constant(1.0));
      StepperOptions opt;
      opt.newton.rtol = 1e-14;
      BackwardEuler be(pb, VectorX::Zero(pb.size()), bc, opt);
      for (int s = 1; s <= n; ++s) be.advance(0.2 * s / n);
      finals.push_back(be.state());
    }
    for (int k = 0; k + 2 < 4; ++k) {
      const double slope = std::log2((finals[k] - finals[k + 1]).norm() / (finals[k + 1] - finals[k + 2]).norm());
      CHECK(slope >= 0.8);
      CHECK(slope <= 1.2);
    }
  }

  TEST_CASE("HTC heat bookkeeping: sealed and cooled") {
    const auto m = MacroMesh::structured(linspace(0, 0.2, 2), linspace(0, 0.5, 5));
    constitutive::HtcParams p;
    const double t0 = 293.15;
    VectorX u0(2 * static_cast<long>(m.nodes.size()));
    for (long i = 0; i < u0.size() / 2; ++i) {
      u0[2 * i] = 1.0;
      u0[2 * i + 1] = t0;
    }
    StepperOptions opt;
    opt.newton.field_atol = {1e-12, 1e-6};
    {
      HtcProblem pb(m, Mat2::Identity(), p);
      BackwardEuler be(pb, u0, {}, opt);
      for (int s = 1; s <= 60; ++s) be.advance(s * 3 * 3600.0);
      CHECK(pb.stored_heat(be.state(), t0) == doctest::Approx(pb.released_heat()).epsilon(1e-8));
      CHECK(be.state()[1] - t0 > 20.0);
    }
    HtcProblem pb(m, Mat2::Identity(), p);
    auto bc = prescribe(m, "left", 2, 1, TimeFunction::constant(t0));
    auto bc2 = prescribe(m, "right", 2, 1, TimeFunction::constant(t0));
    bc.insert(bc.end(), bc2.begin(), bc2.end());
    BackwardEuler be(pb, u0, bc, opt);
    double inflow = 0.0;
    for (int s = 1; s <= 60; ++s) {
      be.advance(s * 3 * 3600.0);
      inflow += 3 * 3600.0 * (boundary_flux(m, "left", be.residual(), be.fixed(), 2, 1) +
                              boundary_flux(m, "right", be.residual(), be.fixed(), 2, 1));
    }
    const double stored = pb.stored_heat(be.state(), t0);
    CHECK(std::abs(stored - inflow - pb.released_heat()) <= 0.01 * pb.released_heat());
    CHECK(inflow < 0.0);
  }
}
