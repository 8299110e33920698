#pragma once

#include "vdflow/geometry.hpp"
#include "vdflow/mesh.hpp"
#include "vdflow/quadrature.hpp"

#include <array>
#include <functional>
#include <map>
#include <vector>

namespace vdflow {

enum class SpaceKind { P1Scalar, P2Scalar, P2Vector2 };

inline bool is_p2(SpaceKind k) { return k != SpaceKind::P1Scalar; }
inline int component_count(SpaceKind k) { return k == SpaceKind::P2Vector2 ? 2 : 1; }

// Lagrange basis on the reference triangle with barycentric coordinates
// l = (l0, l1, l2), vertices first. P2 local node order: vertices 0,1,2 then
// edge midpoints (0,1), (1,2), (2,0).
void p1_values(const double l[3], double out[3]);
void p2_values(const double l[3], double out[6]);

// Reference-coordinate gradients (d/dxi, d/deta) with l0 = 1-xi-eta, l1 = xi,
// l2 = eta.
void p1_ref_grads(double out[3][2]);
void p2_ref_grads(const double l[3], double out[6][2]);

struct ReferenceElement {
    SpaceKind kind;
    int node_count;
    std::vector<std::array<double, 3>> node_positions; // barycentric

    static ReferenceElement p1();
    static ReferenceElement p2();
};

std::vector<double> eval_basis(const ReferenceElement& elem, const double l[3]);

// Affine map data for one triangle: x(l) = v0 + J * (l1, l2).
struct ElementGeometry {
    Vec2 v0;
    Mat2 jac;
    Mat2 inv_jac_t;
    double det; // > 0 for valid elements

    Vec2 map(const double l[3]) const {
        return {v0.x + jac(0, 0) * l[1] + jac(0, 1) * l[2],
                v0.y + jac(1, 0) * l[1] + jac(1, 1) * l[2]};
    }
};

ElementGeometry element_geometry(const Mesh& m, int elem);

// Physical gradients of the basis at a point: inv(J)^T times the reference
// gradients. Throws GeometryError on degenerate elements.
std::vector<Vec2> eval_basis_grad(const ReferenceElement& elem, const double l[3],
                                  const ElementGeometry& geom);

// Global numbering: vertex dofs first (vertex index order), then for P2 one
// dof per mesh edge (edge index order). Vector-valued spaces interleave the
// two components per scalar dof: dof(s, c) = 2*s + c.
struct DofMap {
    const Mesh* mesh = nullptr;
    SpaceKind kind = SpaceKind::P1Scalar;
    int scalar_count = 0;
    std::map<int, std::vector<int>> boundary_scalar_dofs; // tag -> sorted dofs

    int components() const { return component_count(kind); }
    int dof_count() const { return scalar_count * components(); }
    int element_scalar_count() const { return is_p2(kind) ? 6 : 3; }

    // Scalar dof ids of one element in local node order.
    void element_scalar_dofs(int elem, int out[6]) const;

    // Position of a scalar dof (vertex or edge midpoint).
    Vec2 dof_position(int scalar_dof) const;

    // Sorted scalar dofs on the whole boundary (union over tags).
    std::vector<int> all_boundary_scalar_dofs() const;
};

DofMap build_dof_map(const Mesh& m, SpaceKind kind);

// Coefficient vector over a DofMap. Vector-valued functions store (x, y)
// interleaved per scalar dof.
struct FeFunction {
    const DofMap* map = nullptr;
    std::vector<double> coeffs;

    FeFunction() = default;
    explicit FeFunction(const DofMap& m) : map(&m), coeffs(m.dof_count(), 0.0) {}

    double eval(int elem, const double l[3]) const;          // scalar spaces
    Vec2 eval_vec(int elem, const double l[3]) const;        // vector spaces
    Vec2 grad(int elem, const double l[3], const ElementGeometry& g) const;
    Mat2 grad_vec(int elem, const double l[3], const ElementGeometry& g) const;
};

// Nodal interpolant (values at dof positions), the cheap alternative to the
// L2 projection.
FeFunction interpolate(const DofMap& map, const std::function<double(Vec2)>& f);
FeFunction interpolate_vec(const DofMap& map, const std::function<Vec2(Vec2)>& f);

// Quadrature evaluation of integral_Omega f with f(elem, x, l).
double integrate(const Mesh& m, const QuadratureRule& rule,
                 const std::function<double(int, Vec2, const double*)>& f);

// L2 inner products and norms realized with one shared quadrature rule;
// every discrete inner product in the solver goes through these sums.
double discrete_l2_inner(const FeFunction& f, const FeFunction& g, const QuadratureRule& rule);
double l2_norm_sq(const FeFunction& f, const QuadratureRule& rule);
double h1_semi_norm_sq(const FeFunction& f, const QuadratureRule& rule);

// ||sigma * u||_{L2}^2 for scalar sigma and vector u on the same mesh.
double weighted_velocity_norm_sq(const FeFunction& sigma, const FeFunction& u,
                                 const QuadratureRule& rule);

} // namespace vdflow
