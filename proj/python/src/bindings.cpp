#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lathom/constitutive/permeability.hpp"
#include "lathom/geometry/generators.hpp"
#include "lathom/rve/rve.hpp"
#include "lathom/scenario/config.hpp"
#include "lathom/scenario/run.hpp"
#include "lathom/scenario/study.hpp"
#include "lathom/scenario/toml.hpp"
#include "lathom/scenario/verify.hpp"

namespace py = pybind11;
using namespace lathom;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Eigen::MatrixXd positions(const geometry::DualNetwork& n) {
  Eigen::MatrixXd x(static_cast<long>(n.nodes.size()), n.n_dim);
  for (std::size_t i = 0; i < n.nodes.size(); ++i) x.row(static_cast<long>(i)) = n.nodes[i].position.head(n.n_dim);
  return x;
}

Eigen::MatrixXi connectivity(const geometry::DualNetwork& n) {
  Eigen::MatrixXi c(static_cast<long>(n.elements.size()), 2);
  for (std::size_t i = 0; i < n.elements.size(); ++i) c.row(static_cast<long>(i)) << n.elements[i].node_p, n.elements[i].node_q;
  return c;
}

template <class F>
Eigen::VectorXd per_element(const geometry::DualNetwork& n, F f) {
  Eigen::VectorXd v(static_cast<long>(n.elements.size()));
  for (std::size_t i = 0; i < n.elements.size(); ++i) v[static_cast<long>(i)] = f(n.elements[i]);
  return v;
}

py::dict result_dict(const scenario::RunResult& r) {
  py::dict d;
  d["model"] = r.model;
  d["times"] = r.times;
  d["flux_columns"] = r.flux_columns;
  d["fluxes"] = r.fluxes;
  py::list profiles;
  for (const auto& p : r.profiles) {
    py::dict pd;
    pd["name"] = p.name;
    pd["field"] = p.field;
    pd["arc"] = p.arc;
    pd["times"] = p.times;
    pd["values"] = p.values;
    profiles.append(pd);
  }
  d["profiles"] = profiles;
  py::list points;
  for (const auto& p : r.points) {
    py::dict pd;
    pd["label"] = p.label;
    pd["times"] = p.times;
    pd["H"] = p.H;
    pd["T"] = p.T;
    pd["alpha_c"] = p.alpha_c;
    points.append(pd);
  }
  d["points"] = points;
  d["dofs"] = r.dofs;
  d["newton_iterations"] = r.newton_iterations;
  d["seconds"] = r.seconds;
  d["released_heat"] = r.released_heat;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lathom, m) {
  m.doc() = "Homogenization of discrete lattice diffusion models";
  m.attr("__version__") = LATHOM_VERSION;

  py::register_exception<Error>(m, "LathomError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<geometry::DualNetwork>(m, "Network")
      .def_readonly("n_dim", &geometry::DualNetwork::n_dim)
      .def_readonly("periodic", &geometry::DualNetwork::periodic)
      .def_property_readonly("node_count", [](const geometry::DualNetwork& n) { return n.nodes.size(); })
      .def_property_readonly("element_count", [](const geometry::DualNetwork& n) { return n.elements.size(); })
      .def_property_readonly("cell", [](const geometry::DualNetwork& n) { return Eigen::VectorXd(n.cell.head(n.n_dim)); })
      .def_property_readonly("positions", &positions)
      .def_property_readonly("connectivity", &connectivity)
      .def_property_readonly("lambda0", [](const geometry::DualNetwork& n) {
        return per_element(n, [](const auto& e) { return e.lambda0; });
      })
      .def_property_readonly("lengths", [](const geometry::DualNetwork& n) {
        return per_element(n, [](const auto& e) { return e.length; });
      })
      .def_property_readonly("areas", [](const geometry::DualNetwork& n) {
        return per_element(n, [](const auto& e) { return e.projected_area; });
      })
      .def("invariants", [](const geometry::DualNetwork& n) {
        const auto r = geometry::check_invariants(n);
        py::dict d;
        d["closure"] = r.max_closure;
        d["fabric"] = r.fabric_error;
        d["volume"] = r.volume_error;
        d["parallel"] = r.parallel;
        return d;
      })
      .def("export", &geometry::export_network, py::arg("path"));

  m.def(
      "voronoi_rve",
      [](int n_dim, double size, double l_min, std::uint64_t seed) {
        Vec3 cell = Vec3::Constant(size);
        if (n_dim == 2) cell.z() = 0.0;
        return geometry::build_voronoi_dual(geometry::generate_periodic_nuclei(cell, n_dim, l_min, seed), cell, n_dim);
      },
      py::arg("n_dim") = 2, py::arg("size") = 0.15, py::arg("l_min") = 0.01, py::arg("seed") = 1,
      "Periodic Voronoi RVE with lambda0 = 1 on every element.");
  m.def("import_network", &geometry::import_network, py::arg("path"));
  m.def("set_lambda0", &constitutive::set_lambda0, py::arg("network"), py::arg("lambda0"));
  m.def("randomize_lambda0", &constitutive::randomize_lambda0, py::arg("network"), py::arg("mean"), py::arg("cov"),
        py::arg("seed"));
  m.def(
      "tile",
      [](const geometry::DualNetwork& rve, std::array<int, 3> reps, const std::string& mode) {
        return geometry::tile_full_domain(rve, reps, geometry::boundary_mode_from_name(mode));
      },
      py::arg("rve"), py::arg("repetitions"), py::arg("mode") = "cut");
  m.def(
      "effective_tensor",
      [](const geometry::DualNetwork& n) {
        const auto t = rve::effective_tensor(n);
        return Eigen::MatrixXd(t.lambda.topLeftCorner(n.n_dim, n.n_dim));
      },
      py::arg("network"), "Effective conductivity tensor from the elements' lambda0.");
  m.def(
      "solve_rve",
      [](const geometry::DualNetwork& n, const Eigen::VectorXd& a) {
        Vec3 g = Vec3::Zero();
        g.head(a.size()) = a;
        const auto s = rve::solve_eigen_gradient(rve::assemble(n), g);
        py::dict d;
        d["p1"] = Eigen::VectorXd(s.p1);
        d["j0"] = Eigen::VectorXd(s.j0);
        d["f"] = Eigen::VectorXd(s.f.head(n.n_dim));
        return d;
      },
      py::arg("network"), py::arg("gradient"));

  m.def("parse_toml", [](const std::string& text) { return to_python(scenario::parse_toml(text)); }, py::arg("text"));

  py::class_<scenario::ScenarioConfig>(m, "Config")
      .def_readwrite("name", &scenario::ScenarioConfig::name)
      .def_property_readonly("hash", &scenario::ScenarioConfig::hash)
      .def_property_readonly("fields", &scenario::ScenarioConfig::fields)
      .def_property(
          "geometry_seed", [](const scenario::ScenarioConfig& c) { return c.geometry.seed; },
          [](scenario::ScenarioConfig& c, std::uint64_t s) { c.geometry.seed = s; })
      .def_property(
          "random_seed", [](const scenario::ScenarioConfig& c) { return c.random.seed; },
          [](scenario::ScenarioConfig& c, std::uint64_t s) { c.random.seed = s; })
      .def_property(
          "cov", [](const scenario::ScenarioConfig& c) { return c.random.cov; },
          [](scenario::ScenarioConfig& c, double v) { c.random.cov = v; })
      .def_property_readonly("step_times", [](const scenario::ScenarioConfig& c) { return c.time.step_times(); });
  m.def("load_config", &scenario::load_config, py::arg("path"));
  m.def("parse_config", &scenario::parse_config, py::arg("text"));
  m.def("build_rve", &scenario::build_rve, py::arg("config"));

  m.def(
      "run_macro",
      [](const scenario::ScenarioConfig& c) {
        scenario::RunResult r;
        {
          py::gil_scoped_release release;
          r = scenario::run_macro(c);
        }
        return result_dict(r);
      },
      py::arg("config"));
  m.def(
      "run_full",
      [](const scenario::ScenarioConfig& c) {
        scenario::RunResult r;
        {
          py::gil_scoped_release release;
          r = scenario::run_full(c);
        }
        return result_dict(r);
      },
      py::arg("config"));
  m.def(
      "write_results",
      [](const scenario::ScenarioConfig& c, const std::string& model, const std::string& out_dir) {
        const auto r = model == "full" ? scenario::run_full(c) : scenario::run_macro(c);
        scenario::write_results(c, r, out_dir);
      },
      py::arg("config"), py::arg("model"), py::arg("out_dir"));
  m.def(
      "run_study",
      [](const scenario::ScenarioConfig& c, int threads) {
        const auto r = scenario::run_study(c, threads);
        py::list rows;
        for (const auto& s : r.summaries) {
          py::dict d;
          d["size"] = s.size;
          d["members"] = s.members;
          d["mean_diagonal"] = s.mean_diagonal;
          d["std_diagonal"] = s.std_diagonal;
          d["mean_off_diagonal"] = s.mean_off_diagonal;
          d["std_off_diagonal"] = s.std_off_diagonal;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config"), py::arg("threads") = 1);
  m.def(
      "verify",
      [](const std::string& suite, const std::string& config_dir) {
        scenario::VerifyOptions o;
        o.config_dir = config_dir;
        scenario::VerifyReport r;
        {
          py::gil_scoped_release release;
          r = scenario::run_verify(suite, o);
        }
        py::list checks;
        for (const auto& c : r.checks) {
          py::dict d;
          d["name"] = c.name;
          d["measured"] = c.measured;
          d["expected"] = c.expected;
          d["tolerance"] = c.tolerance;
          d["criterion"] = c.criterion;
          d["pass"] = c.pass;
          checks.append(d);
        }
        py::dict d;
        d["suite"] = r.suite;
        d["checks"] = checks;
        d["notes"] = r.notes;
        d["passed"] = r.passed();
        d["seconds"] = r.seconds;
        return d;
      },
      py::arg("suite"), py::arg("config_dir") = "");
}
