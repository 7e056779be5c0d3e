#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lathom/scenario/config.hpp"
#include "lathom/scenario/run.hpp"
#include "lathom/scenario/study.hpp"
#include "lathom/scenario/toml.hpp"
#include "lathom/scenario/vtk.hpp"

using namespace lathom;
using namespace lathom::scenario;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lathom_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Two RVEs along x, one across y; linear material and a pressure ramp on the right.
const char* kSmallPrism = R"(
name = "small"
[geometry]
kind = "voronoi"
rve_size = [0.15, 0.15]
l_min = 0.02
seed = 3
tiling = [2, 1]
boundary_mode = "clip"
[material]
model = "linear"
lambda0 = 1e-12
[macro_mesh]
lx = 0.3
nx = 2
ly = 0.15
ny = 1
[bcs]
dirichlet_mode = "facets"
[[bcs.dirichlet]]
set = "left"
value = 0.0
[[bcs.dirichlet]]
set = "right"
times = [0.0, 4.0]
values = [0.0, 4.0e5]
[time]
mode = "steady"
dt = 1.0
steps = 4
[outputs]
flux_sets = ["left", "right"]
[[outputs.profile]]
name = "axis"
from = [0.0, 0.075]
to = [0.3, 0.075]
samples = 7
times = [1.0, 2.0, 3.0, 4.0]
)";

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("toml subset: tables, arrays of tables, inline tables and literals") {
    const auto j = parse_toml(R"(
# comment
title = "a \"quoted\" \t string" # trailing comment
big = 1_000_000
ratio = -2.5e-3
flag = true
neg_inf = -inf
[outer.inner]
list = [1, 2,
        3, ] # multi-line with trailing comma
[[items]]
name = "one"
[[items]]
name = "two"
point = {x = 1.0, y = [2, 3]}
dotted.key = 4
)");
    CHECK(j["title"] == "a \"quoted\" \t string");
    CHECK(j["big"] == 1000000);
    CHECK(j["ratio"].get<double>() == doctest::Approx(-2.5e-3));
    CHECK(j["flag"] == true);
    CHECK(std::isinf(j["neg_inf"].get<double>()));
    CHECK(j["neg_inf"].get<double>() < 0.0);
    CHECK(j["outer"]["inner"]["list"].size() == 3);
    REQUIRE(j["items"].size() == 2);
    CHECK(j["items"][1]["name"] == "two");
    CHECK(j["items"][1]["point"]["y"][1] == 3);
    CHECK(j["items"][1]["dotted"]["key"] == 4);
  }

  TEST_CASE("toml errors carry the line number") {
    auto message = [](const std::string& text) {
      try {
        (void)parse_toml(text);
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message("a = 1\nb = \n").find("line 2") != std::string::npos);
    CHECK(message("a = 1\na = 2\n").find("line 2") != std::string::npos);
    CHECK(message("[t]\nx = [1, 2\n").find("line") != std::string::npos);
    CHECK(message("s = \"open\n").find("line 1") != std::string::npos);
  }

  TEST_CASE("config schema: defaults, conversions and rejection of unknown keys") {
    const auto c = parse_config(kSmallPrism);
    CHECK(c.name == "small");
    CHECK(c.geometry.tiling[0] == 2);
    CHECK(c.geometry.boundary_mode == geometry::BoundaryMode::Clip);
    CHECK(c.dirichlet_mode == fullmodel::DirichletMode::Facets);
    CHECK(c.mesh.xs.size() == 3);
    CHECK(c.mesh.xs.back() == doctest::Approx(0.3));
    CHECK(c.bcs[1].value(2.0) == doctest::Approx(2.0e5));
    CHECK(c.time.step_times() == std::vector<double>{1.0, 2.0, 3.0, 4.0});

    CHECK_THROWS_AS(parse_config("[geometry]\nsede = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[material]\nmodel = \"clay\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[outputs]\nflux_sets = [\"left\"]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[time]\ndt = -1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[unknown]\n"), ConfigError);
  }

  TEST_CASE("config: htc temperatures in Celsius, days and time segments") {
    const auto c = parse_config(R"(
[material]
model = "htc"
[material.htc]
T0 = 25.0
[[bcs.dirichlet]]
set = "top"
field = "T"
days = [0.0, 1.0]
values = [20.0, 30.0]
[time]
segments = [{dt = 10.0, steps = 2}, {dt = 100.0, steps = 1}]
initial = {H = 0.9, T = 10.0}
)");
    CHECK(c.fields() == 2);
    CHECK(c.material.htc.T0 == doctest::Approx(25.0 + kCelsius));
    CHECK(c.bcs[0].field == 1);
    CHECK(c.bcs[0].value(43200.0) == doctest::Approx(25.0 + kCelsius));
    CHECK(c.time.initial[0] == doctest::Approx(0.9));
    CHECK(c.time.initial[1] == doctest::Approx(10.0 + kCelsius));
    CHECK(c.time.step_times() == std::vector<double>{10.0, 20.0, 120.0});
  }

  TEST_CASE("config hash is stable and sensitive to content") {
    const auto a = parse_config(kSmallPrism), b = parse_config(kSmallPrism);
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    std::string changed = kSmallPrism;
    changed.replace(changed.find("seed = 3"), 8, "seed = 4");
    CHECK(parse_config(changed).hash() != a.hash());
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
  }

  TEST_CASE("runner: macro and full agree on a small prism and prescribed values follow the ramp") {
    const auto c = parse_config(kSmallPrism);
    const auto m = run_macro(c), f = run_full(c);
    REQUIRE(m.times.size() == 4);
    REQUIRE(f.times.size() == 4);
    CHECK(m.flux_columns == std::vector<std::string>{"left", "right"});
    for (std::size_t i = 0; i < 4; ++i) {
      const double fm = m.fluxes[i][1], ff = f.fluxes[i][1];
      CHECK(fm > 0.0);
      CHECK(std::abs(fm - ff) <= 0.02 * ff);
      CHECK(m.fluxes[i][0] == doctest::Approx(-fm).epsilon(1e-8));
    }
    // The last profile sample sits on the prescribed right edge.
    const auto& prof = m.profiles.at(0);
    REQUIRE(prof.values.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(prof.values[i].back() == doctest::Approx(c.bcs[1].value(m.times[i])));
  }

  TEST_CASE("result files carry the reproducibility header and requested columns") {
    const auto c = parse_config(kSmallPrism);
    const auto dir = scratch("results");
    const auto m = run_macro(c);
    write_results(c, m, dir.string());
    const std::string flux = read_file(dir / "flux_history.csv");
    CHECK(flux.rfind("# lathom ", 0) == 0);
    CHECK(flux.find("config_hash=" + c.hash()) != std::string::npos);
    CHECK(flux.find("geometry_seed=3") != std::string::npos);
    CHECK(flux.find("time_s,left,right\n") != std::string::npos);
    const std::string prof = read_file(dir / "profile_axis.csv");
    CHECK(prof.find("arc_length_m,t=1,t=2,t=3,t=4\n") != std::string::npos);
  }

  TEST_CASE("vtk writers emit consistent cell counts") {
    const auto dir = scratch("vtk");
    const auto mesh = macro::MacroMesh::structured({0.0, 1.0, 2.0}, {0.0, 1.0}, 1.0);
    write_vtk_mesh((dir / "m.vtk").string(), mesh, {{"p", VectorX::LinSpaced(6, 0.0, 5.0)}});
    const std::string text = read_file(dir / "m.vtk");
    CHECK(text.find("POINTS 6") != std::string::npos);
    CHECK(text.find("CELLS 2 10") != std::string::npos);
    CHECK(text.find("SCALARS p double") != std::string::npos);
    CHECK_THROWS(write_vtk_mesh((dir / "bad.vtk").string(), mesh, {{"p", VectorX::Zero(5)}}));
  }

  TEST_CASE("rve study: constant lambda gives the identity and threads do not change results") {
    auto c = parse_config(R"(
[geometry]
rve_size = [0.1, 0.1]
l_min = 0.015
seed = 11
[material]
lambda0 = 2.0
[random]
cov = 0.0
[study]
structures = 3
variants = 2
)");
    const auto r = run_study(c, 3);
    REQUIRE(r.members.size() == 6);
    CHECK(r.summaries[0].mean_diagonal == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.summaries[0].mean_off_diagonal < 1e-10);

    c.random.cov = 0.3;
    const auto one = run_study(c, 1), many = run_study(c, 4);
    for (std::size_t k = 0; k < one.members.size(); ++k) CHECK((one.members[k].normalized - many.members[k].normalized).norm() == 0.0);
    CHECK(one.members[1].random_seed != one.members[0].random_seed);
    CHECK(one.members[2].geometry_seed == c.geometry.seed + 1);
    CHECK(one.lower_bound == doctest::Approx(1.0 / 1.09));
  }
}
