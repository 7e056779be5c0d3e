#include "lathom/scenario/vtk.hpp"

#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>

namespace lathom::scenario {
namespace {

void write_point_data(fmt::ostream& out, long n, const std::vector<NamedField>& data) {
  if (data.empty()) return;
  out.print("POINT_DATA {}\n", n);
  for (const auto& [name, values] : data) {
    if (values.size() != n) throw Error("vtk: field '" + name + "' has the wrong length");
    out.print("SCALARS {} double 1\nLOOKUP_TABLE default\n", name);
    for (long i = 0; i < n; ++i) out.print("{:.10g}\n", values[i]);
  }
}

}  // namespace

void write_vtk_mesh(const std::string& path, const macro::MacroMesh& mesh, const std::vector<NamedField>& point_data) {
  auto out = fmt::output_file(path);
  out.print("# vtk DataFile Version 3.0\nlathom macro fields\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  out.print("POINTS {} double\n", mesh.nodes.size());
  for (const auto& x : mesh.nodes) out.print("{:.10g} {:.10g} 0\n", x.x(), x.y());
  out.print("CELLS {} {}\n", mesh.elements.size(), 5 * mesh.elements.size());
  for (const auto& e : mesh.elements) out.print("4 {} {} {} {}\n", e[0], e[1], e[2], e[3]);
  out.print("CELL_TYPES {}\n", mesh.elements.size());
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) out.print("9\n");
  write_point_data(out, static_cast<long>(mesh.nodes.size()), point_data);
}

void write_vtk_network(const std::string& path, const geometry::DualNetwork& network,
                       const std::vector<NamedField>& point_data) {
  std::vector<const geometry::ConduitElement*> lines;
  for (const auto& e : network.elements)
    if (e.image_shift == std::array<int, 3>{0, 0, 0} && e.node_p != e.node_q) lines.push_back(&e);
  const std::size_t n = network.nodes.size();
  auto out = fmt::output_file(path);
  out.print("# vtk DataFile Version 3.0\nlathom lattice fields\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  out.print("POINTS {} double\n", n);
  for (const auto& node : network.nodes)
    out.print("{:.10g} {:.10g} {:.10g}\n", node.position.x(), node.position.y(), node.position.z());
  const std::size_t cells = n + lines.size();
  out.print("CELLS {} {}\n", cells, 2 * n + 3 * lines.size());
  for (std::size_t i = 0; i < n; ++i) out.print("1 {}\n", i);
  for (const auto* e : lines) out.print("2 {} {}\n", e->node_p, e->node_q);
  out.print("CELL_TYPES {}\n", cells);
  for (std::size_t i = 0; i < n; ++i) out.print("1\n");
  for (std::size_t i = 0; i < lines.size(); ++i) out.print("3\n");
  write_point_data(out, static_cast<long>(n), point_data);
}

}  // namespace lathom::scenario
