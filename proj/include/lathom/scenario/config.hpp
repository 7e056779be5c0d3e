#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lathom/constitutive/htc.hpp"
#include "lathom/constitutive/permeability.hpp"
#include "lathom/fullmodel/full.hpp"
#include "lathom/geometry/generators.hpp"
#include "lathom/numerics/stepper.hpp"

namespace lathom::scenario {

/// Offset between the Celsius values of config files and the internal Kelvin.
inline constexpr double kCelsius = 273.15;

struct GeometryConfig {
  std::string kind = "voronoi";  // voronoi | skewed | file
  int n_dim = 2;
  Vec3 rve_size = Vec3(0.15, 0.15, 0.15);
  double l_min = 0.01;
  std::uint64_t seed = 1;
  std::array<int, 3> tiling{1, 1, 1};
  geometry::BoundaryMode boundary_mode = geometry::BoundaryMode::Cut;
  std::string file;                        // lattice file (kind = file)
  double skew_angle_deg = 0.0;             // kind = skewed
  std::array<int, 3> divisions{10, 10, 10};
};

enum class MaterialKind { Linear, VanGenuchten, Htc };

struct MaterialConfig {
  MaterialKind kind = MaterialKind::Linear;
  double lambda0 = 1.0;  // linear permeability (s)
  constitutive::VanGenuchtenParams vg;
  constitutive::CapacitySource storage;
  constitutive::HtcParams htc;
  /// Mean element lambda0 used for the network.
  double mean_lambda0() const;
  constitutive::PermeabilityModel permeability() const;
};

struct RandomConfig {
  double cov = 0.0;
  std::uint64_t seed = 2;
};

struct MeshConfig {
  std::vector<double> xs{0.0, 1.0};
  std::vector<double> ys{0.0, 1.0};
  double thickness = 1.0;
  std::string path = "fast";  // fast | slow
};

struct BoundaryCondition {
  std::string set;  // left | right | bottom | top
  int field = 0;    // 0 = p or H, 1 = T
  numerics::TimeFunction value;
};

struct TimeSegment {
  double dt = 1.0;
  int steps = 1;
};

struct TimeConfig {
  bool steady = false;
  std::vector<TimeSegment> segments{{1.0, 1}};
  std::vector<double> initial{0.0};  // per field, internal units
  double rtol = 1e-8;
  std::vector<double> atol;          // per field floors
  int max_iterations = 25;
  int max_halvings = 10;
  /// Step end times.
  std::vector<double> step_times() const;
};

struct ProfileConfig {
  std::string name;
  int field = 0;
  Vec3 from = Vec3::Zero();
  Vec3 to = Vec3::Zero();
  int samples = 50;
  std::vector<double> times;  // empty: final time only
};

struct PointConfig {
  std::string label;
  Vec3 at = Vec3::Zero();
};

struct OutputConfig {
  std::vector<std::string> flux_sets;
  std::vector<ProfileConfig> profiles;
  std::vector<PointConfig> points;
  int vtk_every = 0;  // 0 disables field dumps
};

/// RVE ensemble: every size gets `structures` geometries times `variants` random fields.
struct StudyConfig {
  std::vector<double> sizes;  // RVE edge lengths (m); empty: geometry.rve_size only
  int structures = 10;
  int variants = 10;
};

struct ScenarioConfig {
  std::string name = "scenario";
  GeometryConfig geometry;
  MaterialConfig material;
  RandomConfig random;
  MeshConfig mesh;
  std::vector<BoundaryCondition> bcs;
  fullmodel::DirichletMode dirichlet_mode = fullmodel::DirichletMode::Nodes;
  TimeConfig time;
  OutputConfig outputs;
  StudyConfig study;
  std::string source;  // canonical text the hash is computed from

  int fields() const { return material.kind == MaterialKind::Htc ? 2 : 1; }
  std::string hash() const;
};

/// Maps a parsed TOML tree onto the schema; unknown keys and bad values raise ConfigError.
ScenarioConfig config_from_json(const nlohmann::json& root);
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);

/// Field index for a name ("p", "H", "T") under the material kind.
int field_index(const std::string& name, MaterialKind kind);
std::string field_name(int field, MaterialKind kind);

/// 64-bit FNV-1a of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace lathom::scenario
