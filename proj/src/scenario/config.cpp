#include "lathom/scenario/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "lathom/scenario/toml.hpp"

namespace lathom::scenario {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("[" + where + "] must be a table");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in [" + where + "]");
}

double num(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

double get_num(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? num(obj.at(key), where + "." + key) : fallback;
}

int get_int(const json& obj, const std::string& key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return obj.at(key).get<int>();
}

std::string get_str(const json& obj, const std::string& key, const std::string& fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  return obj.at(key).get<std::string>();
}

std::vector<double> num_array(const json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(num(x, what));
  return out;
}

Vec3 vec3(const json& v, const std::string& what, double fill = 0.0) {
  if (v.is_number()) return Vec3::Constant(v.get<double>());
  const auto a = num_array(v, what);
  if (a.empty() || a.size() > 3) throw ConfigError(what + " needs 1 to 3 components");
  Vec3 r = Vec3::Constant(fill);
  for (std::size_t i = 0; i < a.size(); ++i) r[static_cast<long>(i)] = a[i];
  return r;
}

std::array<int, 3> int3(const json& v, const std::string& what) {
  std::array<int, 3> r{1, 1, 1};
  if (!v.is_array() || v.empty() || v.size() > 3) throw ConfigError(what + " must be an array of 1 to 3 integers");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer() || v[i].get<int>() < 1) throw ConfigError(what + " entries must be positive integers");
    r[i] = v[i].get<int>();
  }
  return r;
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw ConfigError("mesh division count must be positive");
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) v[i] = a + (b - a) * i / n;
  return v;
}

double to_internal(double value, int field, MaterialKind kind) {
  return kind == MaterialKind::Htc && field == 1 ? value + kCelsius : value;
}

void parse_geometry(const json& g, GeometryConfig& out) {
  check_keys(g, "geometry", {"kind", "n_dim", "rve_size", "l_min", "seed", "tiling", "boundary_mode", "file",
                             "skew_angle_deg", "divisions"});
  out.kind = get_str(g, "kind", out.kind, "geometry");
  if (out.kind != "voronoi" && out.kind != "skewed" && out.kind != "file")
    throw ConfigError("geometry.kind must be voronoi, skewed or file");
  out.n_dim = get_int(g, "n_dim", out.n_dim, "geometry");
  if (out.n_dim != 2 && out.n_dim != 3) throw ConfigError("geometry.n_dim must be 2 or 3");
  if (g.contains("rve_size")) out.rve_size = vec3(g.at("rve_size"), "geometry.rve_size", 0.0);
  if (g.contains("rve_size") && g.at("rve_size").is_array() && g.at("rve_size").size() == 1)
    out.rve_size = Vec3::Constant(out.rve_size.x());
  for (int k = 0; k < out.n_dim; ++k)
    if (!(out.rve_size[k] > 0.0)) throw ConfigError("geometry.rve_size must be positive");
  out.l_min = get_num(g, "l_min", out.l_min, "geometry");
  if (!(out.l_min > 0.0)) throw ConfigError("geometry.l_min must be positive");
  if (g.contains("seed")) {
    if (!g.at("seed").is_number_integer()) throw ConfigError("geometry.seed must be an integer");
    out.seed = g.at("seed").get<std::uint64_t>();
  }
  if (g.contains("tiling")) out.tiling = int3(g.at("tiling"), "geometry.tiling");
  if (g.contains("boundary_mode")) {
    try {
      out.boundary_mode = geometry::boundary_mode_from_name(get_str(g, "boundary_mode", "", "geometry"));
    } catch (const GeometryError& e) {
      throw ConfigError(e.what());
    }
  }
  out.file = get_str(g, "file", out.file, "geometry");
  if (out.kind == "file" && out.file.empty()) throw ConfigError("geometry.file is required for kind = file");
  out.skew_angle_deg = get_num(g, "skew_angle_deg", out.skew_angle_deg, "geometry");
  if (g.contains("divisions")) out.divisions = int3(g.at("divisions"), "geometry.divisions");
}

void parse_material(const json& m, MaterialConfig& out) {
  check_keys(m, "material", {"model", "lambda0", "m", "alpha", "mu", "kappa0", "rho_w", "c0", "c1", "q0", "q1", "htc"});
  const std::string model = get_str(m, "model", "linear", "material");
  if (model == "linear") out.kind = MaterialKind::Linear;
  else if (model == "van_genuchten") out.kind = MaterialKind::VanGenuchten;
  else if (model == "htc") out.kind = MaterialKind::Htc;
  else throw ConfigError("material.model must be linear, van_genuchten or htc");
  out.lambda0 = get_num(m, "lambda0", out.lambda0, "material");
  if (!(out.lambda0 > 0.0)) throw ConfigError("material.lambda0 must be positive");
  auto& vg = out.vg;
  vg.m = get_num(m, "m", vg.m, "material");
  vg.alpha = get_num(m, "alpha", vg.alpha, "material");
  vg.mu = get_num(m, "mu", vg.mu, "material");
  vg.kappa0 = get_num(m, "kappa0", vg.kappa0, "material");
  vg.rho_w = get_num(m, "rho_w", vg.rho_w, "material");
  if (out.kind == MaterialKind::VanGenuchten) {
    try {
      (void)constitutive::PermeabilityModel::van_genuchten(vg);
    } catch (const Error& e) {
      throw ConfigError(std::string("material: ") + e.what());
    }
  }
  out.storage.c0 = get_num(m, "c0", 0.0, "material");
  out.storage.c1 = get_num(m, "c1", 0.0, "material");
  out.storage.q0 = get_num(m, "q0", 0.0, "material");
  out.storage.q1 = get_num(m, "q1", 0.0, "material");
  if (m.contains("htc")) {
    auto& h = out.htc;
    const json& t = m.at("htc");
    std::vector<std::pair<const char*, double*>> keys{
        {"rho", &h.rho},       {"c_t", &h.c_t},       {"kappa", &h.kappa},   {"c", &h.c},
        {"s", &h.s},           {"Qc_inf", &h.Qc_inf}, {"Qs_inf", &h.Qs_inf}, {"Eac_R", &h.Eac_R},
        {"Ac1", &h.Ac1},       {"Ac2", &h.Ac2},       {"alpha_c_inf", &h.alpha_c_inf},
        {"eta_c", &h.eta_c},   {"a", &h.a},           {"b", &h.b},           {"Eas_R", &h.Eas_R},
        {"As1", &h.As1},       {"As2", &h.As2},       {"alpha_s_inf", &h.alpha_s_inf},
        {"eta_s", &h.eta_s},   {"kvg_c", &h.kvg_c},   {"kvg_s", &h.kvg_s},   {"w0", &h.w0},
        {"g1", &h.g1},         {"kappa_c", &h.kappa_c}, {"D0", &h.D0},       {"D1", &h.D1},
        {"n", &h.n},           {"Ead_R", &h.Ead_R}};
    std::set<std::string> allowed{"T0"};
    for (const auto& [k, p] : keys) allowed.insert(k);
    check_keys(t, "material.htc", allowed);
    for (const auto& [k, p] : keys) *p = get_num(t, k, *p, "material.htc");
    if (t.contains("T0")) h.T0 = num(t.at("T0"), "material.htc.T0") + kCelsius;
  }
}

void parse_mesh(const json& m, MeshConfig& out) {
  check_keys(m, "macro_mesh", {"xs", "ys", "lx", "ly", "nx", "ny", "thickness", "path"});
  if (m.contains("xs")) out.xs = num_array(m.at("xs"), "macro_mesh.xs");
  else if (m.contains("lx")) out.xs = linspace(0.0, num(m.at("lx"), "macro_mesh.lx"), get_int(m, "nx", 1, "macro_mesh"));
  if (m.contains("ys")) out.ys = num_array(m.at("ys"), "macro_mesh.ys");
  else if (m.contains("ly")) out.ys = linspace(0.0, num(m.at("ly"), "macro_mesh.ly"), get_int(m, "ny", 1, "macro_mesh"));
  out.thickness = get_num(m, "thickness", out.thickness, "macro_mesh");
  out.path = get_str(m, "path", out.path, "macro_mesh");
  if (out.path != "fast" && out.path != "slow") throw ConfigError("macro_mesh.path must be fast or slow");
}

numerics::TimeFunction parse_time_function(const json& d, int field, MaterialKind kind, const std::string& where) {
  std::vector<double> values, times;
  if (d.contains("value")) {
    return numerics::TimeFunction::constant(to_internal(num(d.at("value"), where + ".value"), field, kind));
  }
  if (!d.contains("values")) throw ConfigError(where + " needs value or values");
  values = num_array(d.at("values"), where + ".values");
  if (d.contains("times")) times = num_array(d.at("times"), where + ".times");
  else if (d.contains("days")) {
    times = num_array(d.at("days"), where + ".days");
    for (double& t : times) t *= 86400.0;
  } else throw ConfigError(where + " needs times or days with values");
  if (times.size() != values.size() || times.empty()) throw ConfigError(where + ": times and values differ in length");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < times.size(); ++i) pts.emplace_back(times[i], to_internal(values[i], field, kind));
  try {
    return numerics::TimeFunction(pts);
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

void parse_bcs(const json& b, ScenarioConfig& out) {
  check_keys(b, "bcs", {"dirichlet", "dirichlet_mode"});
  if (b.contains("dirichlet_mode")) out.dirichlet_mode = fullmodel::dirichlet_mode_from_name(get_str(b, "dirichlet_mode", "", "bcs"));
  if (!b.contains("dirichlet")) return;
  if (!b.at("dirichlet").is_array()) throw ConfigError("bcs.dirichlet must be an array of tables");
  int k = 0;
  for (const auto& d : b.at("dirichlet")) {
    const std::string where = "bcs.dirichlet[" + std::to_string(k++) + "]";
    check_keys(d, where, {"set", "field", "value", "values", "times", "days"});
    BoundaryCondition bc;
    bc.set = get_str(d, "set", "", where);
    try {
      (void)geometry::side_from_name(bc.set);
    } catch (const Error&) {
      throw ConfigError(where + ".set must be left, right, bottom or top");
    }
    bc.field = field_index(get_str(d, "field", out.material.kind == MaterialKind::Htc ? "H" : "p", where),
                           out.material.kind);
    bc.value = parse_time_function(d, bc.field, out.material.kind, where);
    out.bcs.push_back(bc);
  }
}

void parse_time(const json& t, ScenarioConfig& out) {
  check_keys(t, "time", {"mode", "dt", "steps", "segments", "initial", "rtol", "atol", "max_iterations", "max_halvings"});
  auto& tc = out.time;
  const std::string mode = get_str(t, "mode", "transient", "time");
  if (mode != "steady" && mode != "transient") throw ConfigError("time.mode must be steady or transient");
  tc.steady = mode == "steady";
  if (t.contains("segments")) {
    tc.segments.clear();
    for (const auto& s : t.at("segments")) {
      check_keys(s, "time.segments", {"dt", "steps"});
      tc.segments.push_back({get_num(s, "dt", 1.0, "time.segments"), get_int(s, "steps", 1, "time.segments")});
    }
  } else {
    tc.segments = {{get_num(t, "dt", 1.0, "time"), get_int(t, "steps", 1, "time")}};
  }
  for (const auto& s : tc.segments)
    if (!(s.dt > 0.0) || s.steps < 1) throw ConfigError("time steps need dt > 0 and steps >= 1");
  const int nf = out.fields();
  tc.initial.assign(nf, 0.0);
  if (out.material.kind == MaterialKind::Htc) tc.initial = {1.0, out.material.htc.T0};
  auto per_field = [&](const json& obj, const std::string& where, std::vector<double>& dst, bool temperature) {
    check_keys(obj, where, out.material.kind == MaterialKind::Htc ? std::set<std::string>{"H", "T"}
                                                                   : std::set<std::string>{"p"});
    for (const auto& [k, v] : obj.items()) {
      const int f = field_index(k, out.material.kind);
      dst[f] = temperature ? to_internal(num(v, where + "." + k), f, out.material.kind) : num(v, where + "." + k);
    }
  };
  if (t.contains("initial")) per_field(t.at("initial"), "time.initial", tc.initial, true);
  tc.rtol = get_num(t, "rtol", tc.rtol, "time");
  if (t.contains("atol")) {
    tc.atol.assign(nf, 0.0);
    per_field(t.at("atol"), "time.atol", tc.atol, false);
  }
  tc.max_iterations = get_int(t, "max_iterations", tc.max_iterations, "time");
  tc.max_halvings = get_int(t, "max_halvings", tc.max_halvings, "time");
}

void parse_outputs(const json& o, ScenarioConfig& out) {
  check_keys(o, "outputs", {"flux_sets", "profile", "point", "vtk_every"});
  if (o.contains("flux_sets"))
    for (const auto& s : o.at("flux_sets")) {
      if (!s.is_string()) throw ConfigError("outputs.flux_sets must hold strings");
      out.outputs.flux_sets.push_back(s.get<std::string>());
    }
  out.outputs.vtk_every = get_int(o, "vtk_every", 0, "outputs");
  if (o.contains("profile"))
    for (const auto& p : o.at("profile")) {
      check_keys(p, "outputs.profile", {"name", "field", "from", "to", "samples", "times"});
      ProfileConfig pc;
      pc.name = get_str(p, "name", "", "outputs.profile");
      if (pc.name.empty()) throw ConfigError("outputs.profile needs a name");
      pc.field = field_index(get_str(p, "field", field_name(0, out.material.kind), "outputs.profile"), out.material.kind);
      if (!p.contains("from") || !p.contains("to")) throw ConfigError("outputs.profile needs from and to");
      pc.from = vec3(p.at("from"), "outputs.profile.from");
      pc.to = vec3(p.at("to"), "outputs.profile.to");
      pc.samples = get_int(p, "samples", pc.samples, "outputs.profile");
      if (pc.samples < 2) throw ConfigError("outputs.profile.samples must be at least 2");
      if (p.contains("times")) pc.times = num_array(p.at("times"), "outputs.profile.times");
      out.outputs.profiles.push_back(pc);
    }
  if (o.contains("point"))
    for (const auto& p : o.at("point")) {
      check_keys(p, "outputs.point", {"label", "at"});
      PointConfig pc;
      pc.label = get_str(p, "label", "", "outputs.point");
      if (pc.label.empty() || !p.contains("at")) throw ConfigError("outputs.point needs label and at");
      pc.at = vec3(p.at("at"), "outputs.point.at");
      out.outputs.points.push_back(pc);
    }
}

}  // namespace

double MaterialConfig::mean_lambda0() const {
  switch (kind) {
    case MaterialKind::Linear: return lambda0;
    case MaterialKind::VanGenuchten: return vg.rho_w * vg.kappa0 / vg.mu;
    case MaterialKind::Htc: return 1.0;
  }
  return 1.0;
}

constitutive::PermeabilityModel MaterialConfig::permeability() const {
  if (kind == MaterialKind::VanGenuchten) return constitutive::PermeabilityModel::van_genuchten(vg);
  return constitutive::PermeabilityModel::linear(mean_lambda0());
}

std::vector<double> TimeConfig::step_times() const {
  std::vector<double> t;
  double now = 0.0;
  for (const auto& s : segments)
    for (int k = 0; k < s.steps; ++k) {
      now += s.dt;
      t.push_back(now);
    }
  return t;
}

int field_index(const std::string& name, MaterialKind kind) {
  if (kind == MaterialKind::Htc) {
    if (name == "H") return 0;
    if (name == "T") return 1;
    throw ConfigError("field '" + name + "' is not H or T");
  }
  if (name == "p") return 0;
  throw ConfigError("field '" + name + "' is not p");
}

std::string field_name(int field, MaterialKind kind) {
  if (kind == MaterialKind::Htc) return field == 0 ? "H" : "T";
  return "p";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ScenarioConfig::hash() const { return fnv1a_hex(source); }

ScenarioConfig config_from_json(const json& root) {
  check_keys(root, "root", {"name", "geometry", "material", "random", "macro_mesh", "bcs", "time", "outputs", "study"});
  ScenarioConfig c;
  c.source = root.dump();
  c.name = get_str(root, "name", c.name, "root");
  if (root.contains("geometry")) parse_geometry(root.at("geometry"), c.geometry);
  if (root.contains("material")) parse_material(root.at("material"), c.material);
  if (root.contains("random")) {
    const json& r = root.at("random");
    check_keys(r, "random", {"cov", "seed"});
    c.random.cov = get_num(r, "cov", 0.0, "random");
    if (c.random.cov < 0.0) throw ConfigError("random.cov must be non-negative");
    if (r.contains("seed")) {
      if (!r.at("seed").is_number_integer()) throw ConfigError("random.seed must be an integer");
      c.random.seed = r.at("seed").get<std::uint64_t>();
    }
  }
  if (root.contains("macro_mesh")) parse_mesh(root.at("macro_mesh"), c.mesh);
  if (root.contains("bcs")) parse_bcs(root.at("bcs"), c);
  parse_time(root.contains("time") ? root.at("time") : json::object(), c);
  if (root.contains("outputs")) parse_outputs(root.at("outputs"), c);
  if (root.contains("study")) {
    const json& st = root.at("study");
    check_keys(st, "study", {"sizes", "structures", "variants"});
    if (st.contains("sizes")) c.study.sizes = num_array(st.at("sizes"), "study.sizes");
    for (double v : c.study.sizes)
      if (!(v > 0.0)) throw ConfigError("study.sizes entries must be positive");
    c.study.structures = get_int(st, "structures", c.study.structures, "study");
    c.study.variants = get_int(st, "variants", c.study.variants, "study");
    if (c.study.structures < 1 || c.study.variants < 1)
      throw ConfigError("study.structures and study.variants must be positive");
  }
  for (const auto& s : c.outputs.flux_sets) {
    bool found = false;
    for (const auto& bc : c.bcs) found |= bc.set == s;
    if (!found) throw ConfigError("flux set '" + s + "' has no Dirichlet condition");
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  try {
    return config_from_json(load_toml(path));
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ConfigError(path + ": " + msg);
  }
}

ScenarioConfig parse_config(const std::string& text) { return config_from_json(parse_toml(text)); }

}  // namespace lathom::scenario
