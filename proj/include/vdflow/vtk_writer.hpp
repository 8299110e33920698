#pragma once

#include "vdflow/fem.hpp"

#include <string>

namespace vdflow {

// Legacy ASCII VTK unstructured grid with point data sigma, rho, u, p.
// Default export evaluates at mesh vertices; `subdivide` splits each P2
// triangle into four linear triangles through the edge nodes so quadratic
// fields keep their mid-edge values. rho is the nodal interpolation of
// lambda * sigma^2 (visualization only; the composite density itself is
// what the scheme guarantees nonnegative).
void write_vtk(const std::string& path, const Mesh& mesh, const FeFunction& sigma, double lambda,
               const FeFunction& u, const FeFunction& p, bool subdivide = false);

} // namespace vdflow
