#pragma once

#include "vdflow/mesh.hpp"

#include <iosfwd>
#include <string>

namespace vdflow {

// Reads the MSH 2.2 ASCII subset: $MeshFormat (version 2.2, file-type 0,
// data-size 8), $Nodes, $Elements with 2-node lines (type 1) carrying the
// boundary tag as their first (physical) tag and 3-node triangles (type 2).
// Other sections are skipped with a warning on stderr. The mesh is validated
// before returning.
Mesh import_gmsh(const std::string& path);
Mesh import_gmsh(std::istream& in, const std::string& label = "<stream>");

// Writes the same subset; import_gmsh(write_gmsh(m)) reproduces connectivity
// and tags exactly.
void write_gmsh(const Mesh& m, const std::string& path);
void write_gmsh(const Mesh& m, std::ostream& out);

} // namespace vdflow
