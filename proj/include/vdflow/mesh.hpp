#pragma once

#include "vdflow/geometry.hpp"

#include <array>
#include <string>
#include <vector>

namespace vdflow {

struct BoundaryTag {
    int id = 0;
    std::string name;
};

struct BoundaryEdge {
    int edge = -1; // index into Mesh::edges
    int tag = 0;
};

// Conforming triangulation with tagged boundary edges. Immutable once built;
// all connectivity (unique edges, per-triangle edge ids, boundary edges) is
// derived deterministically so dof numbering is reproducible across runs.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles; // counterclockwise vertex ids
    std::vector<std::array<int, 2>> edges;     // unique, v0 < v1, lexicographic order
    std::vector<std::array<int, 3>> tri_edges; // edge id per local edge (0,1),(1,2),(2,0)
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<BoundaryTag> tags;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int element_count() const { return static_cast<int>(triangles.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    double signed_area(int elem) const;
    double total_area() const;

    // Mesh size h: maximum circumscribed-circle diameter over elements.
    double max_circumdiameter() const;

    // Derives edges / tri_edges / boundary multiplicity from `triangles`.
    // `boundary_tag_of` assigns a tag to each boundary edge (by sorted vertex
    // pair); entries left untagged get tag 0.
    void build_connectivity();
};

struct MeshValidation {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

// Reports violations of the mesh invariants: positive orientation, interior
// edges shared by exactly two triangles, boundary edges by one, exactly one
// tag per boundary edge, vertex indices in range.
MeshValidation validate_mesh(const Mesh& m);

struct RectSideTags {
    int bottom = 1;
    int right = 2;
    int top = 3;
    int left = 4;
};

// Structured triangulation of [x0,x1]x[y0,y1] with nx*ny cells, each split
// along alternating diagonals (crossed pattern) to avoid directional bias.
Mesh generate_rectangle_mesh(double x0, double y0, double x1, double y1,
                             int nx, int ny, RectSideTags tags = {});

// Polar-structured triangulation of a disk: an inner fan around the center
// plus quad rings split by alternating diagonals. Straight-edge elements;
// the boundary is the inscribed regular n_sectors-gon.
Mesh generate_disk_mesh(double radius, int n_rings, int n_sectors,
                        int boundary_tag = 1);

} // namespace vdflow
