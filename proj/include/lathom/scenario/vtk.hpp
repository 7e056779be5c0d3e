#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lathom/geometry/network.hpp"
#include "lathom/macro/mesh.hpp"

namespace lathom::scenario {

using NamedField = std::pair<std::string, VectorX>;

/// Legacy ASCII unstructured grid: quadrilateral cells with point data.
void write_vtk_mesh(const std::string& path, const macro::MacroMesh& mesh, const std::vector<NamedField>& point_data);

/// Legacy ASCII unstructured grid of a network: one vertex per node, one line
/// per element (elements crossing a periodic boundary are omitted).
void write_vtk_network(const std::string& path, const geometry::DualNetwork& network,
                       const std::vector<NamedField>& point_data);

}  // namespace lathom::scenario
