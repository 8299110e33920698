#include "vdflow/fem.hpp"

#include "vdflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace vdflow {

void p1_values(const double l[3], double out[3]) {
    out[0] = l[0];
    out[1] = l[1];
    out[2] = l[2];
}

void p2_values(const double l[3], double out[6]) {
    out[0] = l[0] * (2.0 * l[0] - 1.0);
    out[1] = l[1] * (2.0 * l[1] - 1.0);
    out[2] = l[2] * (2.0 * l[2] - 1.0);
    out[3] = 4.0 * l[0] * l[1];
    out[4] = 4.0 * l[1] * l[2];
    out[5] = 4.0 * l[2] * l[0];
}

void p1_ref_grads(double out[3][2]) {
    out[0][0] = -1.0; out[0][1] = -1.0;
    out[1][0] = 1.0;  out[1][1] = 0.0;
    out[2][0] = 0.0;  out[2][1] = 1.0;
}

void p2_ref_grads(const double l[3], double out[6][2]) {
    // dl0 = (-1,-1), dl1 = (1,0), dl2 = (0,1)
    const double g0 = 4.0 * l[0] - 1.0;
    const double g1 = 4.0 * l[1] - 1.0;
    const double g2 = 4.0 * l[2] - 1.0;
    out[0][0] = -g0;                  out[0][1] = -g0;
    out[1][0] = g1;                   out[1][1] = 0.0;
    out[2][0] = 0.0;                  out[2][1] = g2;
    out[3][0] = 4.0 * (l[0] - l[1]);  out[3][1] = -4.0 * l[1];
    out[4][0] = 4.0 * l[2];           out[4][1] = 4.0 * l[1];
    out[5][0] = -4.0 * l[2];          out[5][1] = 4.0 * (l[0] - l[2]);
}

ReferenceElement ReferenceElement::p1() {
    return {SpaceKind::P1Scalar, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
}

ReferenceElement ReferenceElement::p2() {
    return {SpaceKind::P2Scalar, 6,
            {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}}};
}

std::vector<double> eval_basis(const ReferenceElement& elem, const double l[3]) {
    std::vector<double> out(elem.node_count);
    if (elem.node_count == 3) p1_values(l, out.data());
    else p2_values(l, out.data());
    return out;
}

ElementGeometry element_geometry(const Mesh& m, int elem) {
    const auto& t = m.triangles[elem];
    ElementGeometry g;
    g.v0 = m.vertices[t[0]];
    const Vec2 e1 = m.vertices[t[1]] - g.v0;
    const Vec2 e2 = m.vertices[t[2]] - g.v0;
    g.jac(0, 0) = e1.x; g.jac(0, 1) = e2.x;
    g.jac(1, 0) = e1.y; g.jac(1, 1) = e2.y;
    g.det = g.jac.det();
    if (g.det != 0.0) {
        const double inv = 1.0 / g.det;
        // inv(J)^T = adj(J)^T / det
        g.inv_jac_t(0, 0) = g.jac(1, 1) * inv;
        g.inv_jac_t(0, 1) = -g.jac(1, 0) * inv;
        g.inv_jac_t(1, 0) = -g.jac(0, 1) * inv;
        g.inv_jac_t(1, 1) = g.jac(0, 0) * inv;
    }
    return g;
}

std::vector<Vec2> eval_basis_grad(const ReferenceElement& elem, const double l[3],
                                  const ElementGeometry& geom) {
    if (geom.det <= 0.0)
        throw GeometryError("eval_basis_grad: degenerate element (det J <= 0)");
    std::vector<Vec2> out(elem.node_count);
    double ref[6][2];
    if (elem.node_count == 3) {
        double g3[3][2];
        p1_ref_grads(g3);
        for (int i = 0; i < 3; ++i) { ref[i][0] = g3[i][0]; ref[i][1] = g3[i][1]; }
    } else {
        p2_ref_grads(l, ref);
    }
    for (int i = 0; i < elem.node_count; ++i)
        out[i] = geom.inv_jac_t.apply({ref[i][0], ref[i][1]});
    return out;
}

void DofMap::element_scalar_dofs(int elem, int out[6]) const {
    const auto& t = mesh->triangles[elem];
    out[0] = t[0];
    out[1] = t[1];
    out[2] = t[2];
    if (is_p2(kind)) {
        const auto& e = mesh->tri_edges[elem];
        const int nv = mesh->vertex_count();
        out[3] = nv + e[0];
        out[4] = nv + e[1];
        out[5] = nv + e[2];
    }
}

Vec2 DofMap::dof_position(int scalar_dof) const {
    const int nv = mesh->vertex_count();
    if (scalar_dof < nv) return mesh->vertices[scalar_dof];
    const auto& e = mesh->edges[scalar_dof - nv];
    return 0.5 * (mesh->vertices[e[0]] + mesh->vertices[e[1]]);
}

std::vector<int> DofMap::all_boundary_scalar_dofs() const {
    std::set<int> s;
    for (const auto& [tag, dofs] : boundary_scalar_dofs) s.insert(dofs.begin(), dofs.end());
    return {s.begin(), s.end()};
}

DofMap build_dof_map(const Mesh& m, SpaceKind kind) {
    DofMap map;
    map.mesh = &m;
    map.kind = kind;
    map.scalar_count = is_p2(kind) ? m.vertex_count() + m.edge_count() : m.vertex_count();

    std::map<int, std::set<int>> per_tag;
    for (const auto& be : m.boundary_edges) {
        const auto& e = m.edges[be.edge];
        auto& s = per_tag[be.tag];
        s.insert(e[0]);
        s.insert(e[1]);
        if (is_p2(kind)) s.insert(m.vertex_count() + be.edge);
    }
    for (const auto& [tag, dofs] : per_tag)
        map.boundary_scalar_dofs[tag].assign(dofs.begin(), dofs.end());
    return map;
}

double FeFunction::eval(int elem, const double l[3]) const {
    int dofs[6];
    map->element_scalar_dofs(elem, dofs);
    const int n = map->element_scalar_count();
    double v[6];
    if (n == 3) p1_values(l, v);
    else p2_values(l, v);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += coeffs[dofs[i]] * v[i];
    return s;
}

Vec2 FeFunction::eval_vec(int elem, const double l[3]) const {
    int dofs[6];
    map->element_scalar_dofs(elem, dofs);
    const int n = map->element_scalar_count();
    double v[6];
    if (n == 3) p1_values(l, v);
    else p2_values(l, v);
    Vec2 s;
    for (int i = 0; i < n; ++i) {
        s.x += coeffs[2 * dofs[i]] * v[i];
        s.y += coeffs[2 * dofs[i] + 1] * v[i];
    }
    return s;
}

Vec2 FeFunction::grad(int elem, const double l[3], const ElementGeometry& g) const {
    int dofs[6];
    map->element_scalar_dofs(elem, dofs);
    const int n = map->element_scalar_count();
    double ref[6][2];
    if (n == 3) {
        double g3[3][2];
        p1_ref_grads(g3);
        for (int i = 0; i < 3; ++i) { ref[i][0] = g3[i][0]; ref[i][1] = g3[i][1]; }
    } else {
        p2_ref_grads(l, ref);
    }
    Vec2 ref_grad;
    for (int i = 0; i < n; ++i) {
        ref_grad.x += coeffs[dofs[i]] * ref[i][0];
        ref_grad.y += coeffs[dofs[i]] * ref[i][1];
    }
    return g.inv_jac_t.apply(ref_grad);
}

Mat2 FeFunction::grad_vec(int elem, const double l[3], const ElementGeometry& g) const {
    int dofs[6];
    map->element_scalar_dofs(elem, dofs);
    const int n = map->element_scalar_count();
    double ref[6][2];
    p2_ref_grads(l, ref);
    Vec2 rx, ry; // reference gradients of the two components
    for (int i = 0; i < n; ++i) {
        rx.x += coeffs[2 * dofs[i]] * ref[i][0];
        rx.y += coeffs[2 * dofs[i]] * ref[i][1];
        ry.x += coeffs[2 * dofs[i] + 1] * ref[i][0];
        ry.y += coeffs[2 * dofs[i] + 1] * ref[i][1];
    }
    const Vec2 gx = g.inv_jac_t.apply(rx);
    const Vec2 gy = g.inv_jac_t.apply(ry);
    Mat2 out;
    out(0, 0) = gx.x; out(0, 1) = gx.y;
    out(1, 0) = gy.x; out(1, 1) = gy.y;
    return out;
}

FeFunction interpolate(const DofMap& map, const std::function<double(Vec2)>& f) {
    FeFunction out(map);
    for (int s = 0; s < map.scalar_count; ++s) out.coeffs[s] = f(map.dof_position(s));
    return out;
}

FeFunction interpolate_vec(const DofMap& map, const std::function<Vec2(Vec2)>& f) {
    FeFunction out(map);
    for (int s = 0; s < map.scalar_count; ++s) {
        const Vec2 v = f(map.dof_position(s));
        out.coeffs[2 * s] = v.x;
        out.coeffs[2 * s + 1] = v.y;
    }
    return out;
}

double integrate(const Mesh& m, const QuadratureRule& rule,
                 const std::function<double(int, Vec2, const double*)>& f) {
    double total = 0.0;
    for (int e = 0; e < m.element_count(); ++e) {
        const ElementGeometry g = element_geometry(m, e);
        double elem_sum = 0.0;
        for (const auto& qp : rule.points) {
            const double l[3] = {qp.l0, qp.l1, qp.l2};
            elem_sum += qp.w * f(e, g.map(l), l);
        }
        total += elem_sum * g.det;
    }
    return total;
}

namespace {

template <class Eval>
double quad_sum(const Mesh& m, const QuadratureRule& rule, Eval&& eval) {
    double total = 0.0;
    for (int e = 0; e < m.element_count(); ++e) {
        const ElementGeometry g = element_geometry(m, e);
        double elem_sum = 0.0;
        for (const auto& qp : rule.points) {
            const double l[3] = {qp.l0, qp.l1, qp.l2};
            elem_sum += qp.w * eval(e, l, g);
        }
        total += elem_sum * g.det;
    }
    return total;
}

} // namespace

double discrete_l2_inner(const FeFunction& f, const FeFunction& g, const QuadratureRule& rule) {
    const Mesh& m = *f.map->mesh;
    if (f.map->components() == 2) {
        return quad_sum(m, rule, [&](int e, const double* l, const ElementGeometry& geo) {
            (void)geo;
            return f.eval_vec(e, l).dot(g.eval_vec(e, l));
        });
    }
    return quad_sum(m, rule, [&](int e, const double* l, const ElementGeometry& geo) {
        (void)geo;
        return f.eval(e, l) * g.eval(e, l);
    });
}

double l2_norm_sq(const FeFunction& f, const QuadratureRule& rule) {
    return discrete_l2_inner(f, f, rule);
}

double h1_semi_norm_sq(const FeFunction& f, const QuadratureRule& rule) {
    const Mesh& m = *f.map->mesh;
    if (f.map->components() == 2) {
        return quad_sum(m, rule, [&](int e, const double* l, const ElementGeometry& geo) {
            const Mat2 gu = f.grad_vec(e, l, geo);
            return gu.m[0] * gu.m[0] + gu.m[1] * gu.m[1] + gu.m[2] * gu.m[2] + gu.m[3] * gu.m[3];
        });
    }
    return quad_sum(m, rule, [&](int e, const double* l, const ElementGeometry& geo) {
        const Vec2 gf = f.grad(e, l, geo);
        return gf.x * gf.x + gf.y * gf.y;
    });
}

double weighted_velocity_norm_sq(const FeFunction& sigma, const FeFunction& u,
                                 const QuadratureRule& rule) {
    const Mesh& m = *sigma.map->mesh;
    return quad_sum(m, rule, [&](int e, const double* l, const ElementGeometry& geo) {
        (void)geo;
        const double s = sigma.eval(e, l);
        const Vec2 v = u.eval_vec(e, l);
        return s * s * v.dot(v);
    });
}

} // namespace vdflow
