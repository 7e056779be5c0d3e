#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <tuple>

#include "lathom/geometry/generators.hpp"
#include "lathom/numerics/random.hpp"

using namespace lathom;
using namespace lathom::geometry;

namespace {

double periodic_dist(const Vec3& a, const Vec3& b, const Vec3& cell, int n_dim) {
  double d2 = 0.0;
  for (int k = 0; k < n_dim; ++k) {
    double d = std::abs(a[k] - b[k]);
    d -= std::floor(d / cell[k]) * cell[k];
    d = std::min(d, cell[k] - d);
    d2 += d * d;
  }
  return std::sqrt(d2);
}

// Reference placement: same draw order, brute-force rejection against all nuclei.
std::vector<Vec3> brute_force_nuclei(const Vec3& cell, int n_dim, double l_min, std::uint64_t seed) {
  numerics::RandomStream rng(seed);
  std::vector<Vec3> out;
  int rejections = 0;
  while (rejections < 10000) {
    Vec3 x = Vec3::Zero();
    for (int k = 0; k < n_dim; ++k) x[k] = rng.uniform() * cell[k];
    const bool ok = std::all_of(out.begin(), out.end(),
                                [&](const Vec3& y) { return periodic_dist(x, y, cell, n_dim) >= l_min; });
    if (ok) {
      out.push_back(x);
      rejections = 0;
    } else {
      ++rejections;
    }
  }
  return out;
}

// Pixel oracle: area of each periodic Voronoi cell by nearest-nucleus sampling.
std::vector<double> pixel_areas(const std::vector<Vec3>& nuclei, const Vec3& cell, int res) {
  std::vector<double> area(nuclei.size(), 0.0);
  const double da = cell.x() * cell.y() / (static_cast<double>(res) * res);
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      const Vec3 x((i + 0.5) * cell.x() / res, (j + 0.5) * cell.y() / res, 0.0);
      std::size_t best = 0;
      double bd = 1e300;
      for (std::size_t n = 0; n < nuclei.size(); ++n) {
        const double d = periodic_dist(x, nuclei[n], cell, 2);
        if (d < bd) bd = d, best = n;
      }
      area[best] += da;
    }
  return area;
}

std::vector<std::tuple<double, double, double>> signature(const DualNetwork& net) {
  std::vector<std::tuple<double, double, double>> s;
  auto r = [](double v) { return std::round(v * 1e9) / 1e9; };
  for (const auto& e : net.elements)
    s.emplace_back(r(e.length), r(e.area), r(std::abs(e.direction.x())));
  std::sort(s.begin(), s.end());
  return s;
}

DualNetwork random_rve(int n_dim, double size, double l_min, std::uint64_t seed) {
  const Vec3 cell = Vec3::Constant(size);
  return build_voronoi_dual(generate_periodic_nuclei(cell, n_dim, l_min, seed), cell, n_dim);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("nuclei respect the periodic minimum distance") {
    const Vec3 cell(0.15, 0.15, 0.0);
    const auto nuclei = generate_periodic_nuclei(cell, 2, 0.01, 1);
    CHECK(nuclei.size() > 100);
    double dmin = 1e300;
    for (std::size_t i = 0; i < nuclei.size(); ++i)
      for (std::size_t j = i + 1; j < nuclei.size(); ++j) dmin = std::min(dmin, periodic_dist(nuclei[i], nuclei[j], cell, 2));
    CHECK(dmin >= 0.01);
  }

  TEST_CASE("nuclei placement matches a brute-force rerun") {
    for (int n_dim : {2, 3}) {
      const Vec3 cell = Vec3::Ones();
      const auto fast = generate_periodic_nuclei(cell, n_dim, 0.3, 17);
      const auto ref = brute_force_nuclei(cell, n_dim, 0.3, 17);
      REQUIRE(fast.size() == ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i) CHECK(fast[i] == ref[i]);
    }
  }

  TEST_CASE("cell too small for two nuclei") {
    const Vec3 cell(1.0, 1.0, 0.0);
    CHECK_THROWS_WITH_AS(generate_periodic_nuclei(cell, 2, 0.9, 3), doctest::Contains("degenerate cell"), GeometryError);
    NucleiOptions opt;
    opt.allow_single = true;
    CHECK(generate_periodic_nuclei(cell, 2, 0.9, 3, opt).size() == 1);
  }

  TEST_CASE("single nucleus links to its own images") {
    const double L = 0.4;
    VoronoiOptions opt;
    opt.allow_single = true;
    const auto net = build_voronoi_dual({Vec3(0.2, 0.2, 0)}, Vec3(L, L, 0), 2, opt);
    REQUIRE(net.nodes.size() == 1);
    CHECK(net.nodes[0].volume == doctest::Approx(L * L * kPlanarThickness));
    // One element per axis: the +x and -x facets are the same physical contact.
    REQUIRE(net.elements.size() == 2);
    for (const auto& e : net.elements) {
      CHECK(e.length == doctest::Approx(L));
      CHECK(e.area == doctest::Approx(L * kPlanarThickness));
      CHECK(e.node_p == 0);
      CHECK(e.node_q == 0);
    }
    const auto rep = check_invariants(net);
    CHECK(rep.fabric_ok());
    CHECK(rep.volume_ok());
    CHECK_THROWS_AS(build_voronoi_dual({Vec3(0.2, 0.2, 0)}, Vec3(L, L, 0), 2), GeometryError);

    const auto net3 = build_voronoi_dual({Vec3(0.1, 0.2, 0.3)}, Vec3(0.5, 0.5, 0.5), 3, opt);
    CHECK(net3.elements.size() == 3);
    CHECK(check_invariants(net3).fabric_ok());
  }

  TEST_CASE("two-nucleus cells match the pixel oracle") {
    const Vec3 cell(1, 1, 0);
    const std::vector<Vec3> nuclei{Vec3(0.25, 0.5, 0), Vec3(0.75, 0.5, 0)};
    const auto net = build_voronoi_dual(nuclei, cell, 2);
    const auto px = pixel_areas(nuclei, cell, 2000);
    for (int i = 0; i < 2; ++i) {
      CHECK(net.nodes[i].volume == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(std::abs(px[i] / net.nodes[i].volume - 1.0) <= 1e-3);
    }
  }

  TEST_CASE("random cells match the pixel oracle") {
    const Vec3 cell(1.0, 0.7, 0);
    const auto nuclei = generate_periodic_nuclei(cell, 2, 0.15, 5);
    const auto net = build_voronoi_dual(nuclei, cell, 2);
    const auto px = pixel_areas(nuclei, cell, 600);
    for (std::size_t i = 0; i < nuclei.size(); ++i) CHECK(std::abs(px[i] - net.nodes[i].volume) <= 0.01 * net.nodes[i].volume);
  }

  TEST_CASE("divergence identities on random 2D and 3D networks") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      for (int n_dim : {2, 3}) {
        const auto net = n_dim == 2 ? random_rve(2, 0.15, 0.01, seed) : random_rve(3, 0.05, 0.01, seed);
        CAPTURE(seed);
        CAPTURE(n_dim);
        validate(net);
        const auto rep = check_invariants(net);
        CHECK(rep.parallel);
        CHECK(rep.closure_ok());
        CHECK(rep.fabric_ok());
        CHECK(rep.volume_ok());
        CHECK(connected_components(net).size() == 1);
      }
    }
  }

  TEST_CASE("network is invariant under translation of the nuclei") {
    const Vec3 cell(0.15, 0.15, 0);
    auto nuclei = generate_periodic_nuclei(cell, 2, 0.01, 9);
    const auto a = build_voronoi_dual(nuclei, cell, 2);
    for (auto& x : nuclei) x += Vec3(0.15, -0.3, 0);  // lattice vector
    const auto b = build_voronoi_dual(nuclei, cell, 2);
    CHECK(signature(a) == signature(b));
    for (auto& x : nuclei) x += Vec3(0.0123, 0.0456, 0);  // arbitrary shift
    const auto c = build_voronoi_dual(nuclei, cell, 2);
    CHECK(signature(a) == signature(c));
  }

  TEST_CASE("generation is deterministic") {
    const auto a = format_network(random_rve(2, 0.15, 0.01, 4));
    const auto b = format_network(random_rve(2, 0.15, 0.01, 4));
    CHECK(a == b);
  }

  TEST_CASE("skewed lattice projected areas") {
    const Vec3 cell(0.2, 0.1, 0.3);
    for (int n_dim : {2, 3}) {
      const auto orth = build_skewed_lattice(cell, n_dim, {4, 2, 3}, 0.0);
      for (const auto& e : orth.elements) CHECK(e.projected_area == e.area);
      CHECK(check_invariants(orth).fabric_ok());
      CHECK(check_invariants(orth).closure_ok());
      const auto sk = build_skewed_lattice(cell, n_dim, {4, 2, 3}, std::numbers::pi / 3);
      validate(sk);
      CHECK_FALSE(check_invariants(sk).parallel);
      for (const auto& e : sk.elements) CHECK(e.projected_area == doctest::Approx(0.5 * e.area).epsilon(1e-14));
      const auto ldpm = build_skewed_lattice(cell, n_dim, {4, 2, 3}, 25.84 * std::numbers::pi / 180);
      CHECK(ldpm.elements[0].projected_area / ldpm.elements[0].area == doctest::Approx(0.90).epsilon(1e-3));
    }
    CHECK_THROWS_AS(build_skewed_lattice(cell, 2, {2, 2, 1}, std::numbers::pi / 2), GeometryError);
  }

  TEST_CASE("cut tiling element and facet counts match enumeration") {
    const auto rve = random_rve(2, 0.15, 0.01, 2);
    for (auto reps : {std::array<int, 3>{1, 1, 1}, std::array<int, 3>{8, 2, 1}, std::array<int, 3>{3, 1, 1}}) {
      const auto full = tile_full_domain(rve, reps);
      validate(full);
      std::size_t expected = 0, crossing = 0;
      const int tiles = reps[0] * reps[1];
      for (const auto& e : rve.elements) {
        const int kept = (reps[0] - std::abs(e.image_shift[0])) * (reps[1] - std::abs(e.image_shift[1]));
        const int k = std::max(kept, 0);
        expected += k;
        crossing += 2 * (tiles - k);
      }
      CHECK(full.nodes.size() == rve.nodes.size() * tiles);
      CHECK(full.elements.size() == expected);
      CHECK(full.boundary.size() == crossing);
      CHECK(check_invariants(full).volume_ok());
    }
    // Seam formula along one axis: reps * interior + (reps - 1) * crossing per seam.
    std::size_t interior = 0, seam = 0;
    for (const auto& e : rve.elements) {
      if (e.image_shift[0] == 0 && e.image_shift[1] == 0) ++interior;
      else if (e.image_shift[1] == 0) ++seam;
    }
    CHECK(tile_full_domain(rve, {5, 1, 1}).elements.size() == 5 * interior + 4 * seam);
  }

  TEST_CASE("cut tiling keeps interior geometry and lambda0") {
    auto rve = random_rve(2, 0.15, 0.01, 3);
    for (auto& e : rve.elements) e.lambda0 = 1.0 + 0.01 * e.id;
    const auto full = tile_full_domain(rve, {2, 2, 1});
    const int n = static_cast<int>(rve.nodes.size());
    for (const auto& e : full.elements) {
      const auto& src = *std::find_if(rve.elements.begin(), rve.elements.end(), [&](const ConduitElement& r) {
        return r.node_p == e.node_p % n && r.node_q == e.node_q % n && r.length == e.length && r.area == e.area;
      });
      CHECK(src.lambda0 == e.lambda0);
    }
    for (const auto& b : full.boundary) {
      const Vec3 end = full.nodes[b.node].position + b.distance * b.direction;
      const int axis = static_cast<int>(b.side) / 2;
      const double plane = static_cast<int>(b.side) % 2 == 0 ? 0.0 : full.cell[axis];
      CHECK(end[axis] == doctest::Approx(plane).epsilon(1e-12));
    }
  }

  TEST_CASE("clip tiling is a closed bounded tessellation") {
    auto rve = random_rve(2, 0.15, 0.01, 6);
    for (auto& e : rve.elements) e.lambda0 = 2.0;
    const auto full = tile_full_domain(rve, {3, 2, 1}, BoundaryMode::Clip);
    validate(full);
    const auto rep = check_invariants(full);
    CHECK(rep.closure_ok());
    CHECK(rep.volume_ok());
    CHECK(rep.fabric_error < 0.1);  // box facets break the fabric identity only at O(l/L)
    for (const auto& e : full.elements) CHECK(e.lambda0 == 2.0);
    CHECK(boundary_mode_from_name("clip") == BoundaryMode::Clip);
    CHECK_THROWS(boundary_mode_from_name("trim"));
  }

  TEST_CASE("bounded Voronoi volumes and closure in 3D") {
    numerics::RandomStream rng(11);
    std::vector<Vec3> g;
    for (int i = 0; i < 60; ++i) g.emplace_back(rng.uniform(), 0.5 * rng.uniform(), 0.8 * rng.uniform());
    const auto net = build_bounded_voronoi(g, Vec3(1.0, 0.5, 0.8), 3);
    const auto rep = check_invariants(net);
    CHECK(rep.volume_ok());
    CHECK(rep.closure_ok());
  }

  TEST_CASE("lattice file round trip is bitwise") {
    auto rve = random_rve(3, 0.04, 0.01, 8);
    numerics::RandomStream rng(3);
    for (auto& e : rve.elements) e.lambda0 = numerics::lognormal_draw(rng, 5.618e-12, 0.2);
    const auto text = format_network(rve);
    const auto back = parse_network(text);
    CHECK(format_network(back) == text);
    REQUIRE(back.elements.size() == rve.elements.size());
    for (std::size_t i = 0; i < rve.elements.size(); ++i) {
      CHECK(back.elements[i].lambda0 == rve.elements[i].lambda0);
      CHECK(back.elements[i].direction == rve.elements[i].direction);
      CHECK(back.elements[i].image_shift == rve.elements[i].image_shift);
    }
    const auto tiled = tile_full_domain(random_rve(2, 0.15, 0.01, 1), {2, 1, 1});
    const auto path = std::filesystem::temp_directory_path() / "lathom_roundtrip.lat";
    export_network(tiled, path.string());
    CHECK(format_network(import_network(path.string())) == format_network(tiled));
    std::filesystem::remove(path);
  }

  TEST_CASE("lattice import rejects invalid input") {
    const std::string bad_volume =
        "DIM 2 PERIODIC 0 CELL 1 1\nNODE 0 0.25 0.5 0.5\nNODE 1 0.75 0.5 0\n"
        "ELEM 0 0 1 1 1 0.5 1 0 1 0 0 0 1\n";
    CHECK_THROWS_WITH_AS(parse_network(bad_volume), doctest::Contains("degenerate control volume"), GeometryError);
    CHECK_THROWS_AS(parse_network("NODE 0 0 0 1\n"), GeometryError);
    CHECK_THROWS_AS(parse_network("DIM 2 PERIODIC 0 CELL 1 1\nNODE 0 0 0 x\n"), GeometryError);
    const std::string bad_length =
        "DIM 2 PERIODIC 0 CELL 1 1\nNODE 0 0.25 0.5 0.5\nNODE 1 0.75 0.5 0.5\n"
        "ELEM 0 0 1 1 1 0.4 1 0 1 0 0 0 1\n";
    CHECK_THROWS_WITH_AS(parse_network(bad_length), doctest::Contains("element 0"), GeometryError);
  }

  TEST_CASE("hand-written two-node file") {
    const std::string text =
        "# two nodes, one link\n"
        "DIM 2 PERIODIC 0 CELL 1 1\n"
        "NODE 0 0.1 0.2 0.5\n"
        "NODE 1 0.4 0.6 0.5\n"
        "ELEM 0 0 1 0.3 0.3 0.5 0.6 0.8 0.6 0.8 0 0 2.5\n";
    const auto net = parse_network(text);
    REQUIRE(net.elements.size() == 1);
    const Vec3 d = net.nodes[1].position - net.nodes[0].position;
    CHECK(net.elements[0].length == doctest::Approx(d.norm()).epsilon(1e-15));
    CHECK(net.elements[0].lambda0 == 2.5);
    CHECK(net.elements[0].centroid.isApprox(Vec3(0.25, 0.4, 0.0)));
  }
}
