#include "vdflow/vtk_writer.hpp"

#include "vdflow/errors.hpp"

#include <cstdio>
#include <fstream>

namespace vdflow {

namespace {

void write_value(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    os << buf;
}

} // namespace

void write_vtk(const std::string& path, const Mesh& mesh, const FeFunction& sigma, double lambda,
               const FeFunction& u, const FeFunction& p, bool subdivide) {
    std::ofstream os(path);
    if (!os) throw ResourceError("write_vtk: cannot open '" + path + "' for writing");

    const int nv = mesh.vertex_count();
    const int n_points = subdivide ? nv + mesh.edge_count() : nv;

    os << "# vtk DataFile Version 3.0\n";
    os << "vdflow fields\n";
    os << "ASCII\n";
    os << "DATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << n_points << " double\n";

    const DofMap& wmap = *sigma.map;
    for (int i = 0; i < n_points; ++i) {
        const Vec2 x = wmap.dof_position(i);
        write_value(os, x.x);
        os << " ";
        write_value(os, x.y);
        os << " 0\n";
    }

    if (!subdivide) {
        const int ne = mesh.element_count();
        os << "CELLS " << ne << " " << 4 * ne << "\n";
        for (const auto& t : mesh.triangles)
            os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
        os << "CELL_TYPES " << ne << "\n";
        for (int e = 0; e < ne; ++e) os << "5\n";
    } else {
        const int ne = 4 * mesh.element_count();
        os << "CELLS " << ne << " " << 4 * ne << "\n";
        for (int e = 0; e < mesh.element_count(); ++e) {
            const auto& t = mesh.triangles[e];
            const auto& te = mesh.tri_edges[e];
            const int m01 = nv + te[0], m12 = nv + te[1], m20 = nv + te[2];
            os << "3 " << t[0] << " " << m01 << " " << m20 << "\n";
            os << "3 " << t[1] << " " << m12 << " " << m01 << "\n";
            os << "3 " << t[2] << " " << m20 << " " << m12 << "\n";
            os << "3 " << m01 << " " << m12 << " " << m20 << "\n";
        }
        os << "CELL_TYPES " << ne << "\n";
        for (int e = 0; e < ne; ++e) os << "5\n";
    }

    auto p_at_point = [&](int i) {
        if (i < nv) return p.coeffs[i];
        const auto& e = mesh.edges[i - nv];
        return 0.5 * (p.coeffs[e[0]] + p.coeffs[e[1]]);
    };

    os << "POINT_DATA " << n_points << "\n";
    os << "SCALARS sigma double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < n_points; ++i) {
        write_value(os, sigma.coeffs[i]);
        os << "\n";
    }
    os << "SCALARS rho double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < n_points; ++i) {
        write_value(os, lambda * sigma.coeffs[i] * sigma.coeffs[i]);
        os << "\n";
    }
    os << "SCALARS p double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < n_points; ++i) {
        write_value(os, p_at_point(i));
        os << "\n";
    }
    os << "VECTORS u double\n";
    for (int i = 0; i < n_points; ++i) {
        write_value(os, u.coeffs[2 * i]);
        os << " ";
        write_value(os, u.coeffs[2 * i + 1]);
        os << " 0\n";
    }
}

} // namespace vdflow
