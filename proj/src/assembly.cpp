#include "vdflow/assembly.hpp"

#include "vdflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vdflow {

namespace {

// Reference basis values and gradients tabulated once per rule.
struct BasisTable {
    int n;                                  // scalar basis size (3 or 6)
    std::vector<std::array<double, 6>> val; // per qp
    std::vector<std::array<std::array<double, 2>, 6>> ref_grad;

    BasisTable(SpaceKind kind, const QuadratureRule& rule) {
        n = is_p2(kind) ? 6 : 3;
        val.resize(rule.points.size());
        ref_grad.resize(rule.points.size());
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double l[3] = {rule.points[q].l0, rule.points[q].l1, rule.points[q].l2};
            if (n == 6) {
                p2_values(l, val[q].data());
                double g[6][2];
                p2_ref_grads(l, g);
                for (int i = 0; i < 6; ++i) {
                    ref_grad[q][i][0] = g[i][0];
                    ref_grad[q][i][1] = g[i][1];
                }
            } else {
                p1_values(l, val[q].data());
                double g[3][2];
                p1_ref_grads(g);
                for (int i = 0; i < 3; ++i) {
                    ref_grad[q][i][0] = g[i][0];
                    ref_grad[q][i][1] = g[i][1];
                }
            }
        }
    }
};

inline void physical_grads(const BasisTable& tab, size_t q, const ElementGeometry& g,
                           Vec2 out[6]) {
    for (int i = 0; i < tab.n; ++i)
        out[i] = g.inv_jac_t.apply({tab.ref_grad[q][i][0], tab.ref_grad[q][i][1]});
}

size_t mass_triplet_estimate(const DofMap& space) {
    const size_t per = static_cast<size_t>(space.element_scalar_count());
    return static_cast<size_t>(space.mesh->element_count()) * per * per * space.components();
}

} // namespace

CsrMatrix assemble_mass(const DofMap& space, const QuadratureRule& rule, const QuadWeight& weight) {
    const Mesh& mesh = *space.mesh;
    const BasisTable tab(space.kind, rule);
    const int comps = space.components();
    TripletBuffer t(space.dof_count(), space.dof_count());
    t.reserve(mass_triplet_estimate(space));

    int dofs[6];
    double local[6][6];
    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        space.element_scalar_dofs(e, dofs);
        for (int i = 0; i < tab.n; ++i)
            for (int j = 0; j < tab.n; ++j) local[i][j] = 0.0;

        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double l[3] = {rule.points[q].l0, rule.points[q].l1, rule.points[q].l2};
            double w = rule.points[q].w * g.det;
            if (weight) w *= weight(e, g.map(l), l);
            for (int i = 0; i < tab.n; ++i) {
                const double wi = w * tab.val[q][i];
                for (int j = 0; j < tab.n; ++j) local[i][j] += wi * tab.val[q][j];
            }
        }
        for (int i = 0; i < tab.n; ++i)
            for (int j = 0; j < tab.n; ++j)
                for (int c = 0; c < comps; ++c)
                    t.add(comps * dofs[i] + c, comps * dofs[j] + c, local[i][j]);
    }
    return csr_from_triplets(t);
}

CsrMatrix assemble_stiffness(const DofMap& space, const QuadratureRule& rule) {
    const Mesh& mesh = *space.mesh;
    const BasisTable tab(space.kind, rule);
    const int comps = space.components();
    TripletBuffer t(space.dof_count(), space.dof_count());
    t.reserve(mass_triplet_estimate(space));

    int dofs[6];
    double local[6][6];
    Vec2 grad[6];
    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        space.element_scalar_dofs(e, dofs);
        for (int i = 0; i < tab.n; ++i)
            for (int j = 0; j < tab.n; ++j) local[i][j] = 0.0;

        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.points[q].w * g.det;
            physical_grads(tab, q, g, grad);
            for (int i = 0; i < tab.n; ++i)
                for (int j = 0; j < tab.n; ++j) local[i][j] += w * grad[i].dot(grad[j]);
        }
        for (int i = 0; i < tab.n; ++i)
            for (int j = 0; j < tab.n; ++j)
                for (int c = 0; c < comps; ++c)
                    t.add(comps * dofs[i] + c, comps * dofs[j] + c, local[i][j]);
    }
    return csr_from_triplets(t);
}

std::vector<double> assemble_unit_load(const DofMap& space, const QuadratureRule& rule) {
    const Mesh& mesh = *space.mesh;
    const BasisTable tab(space.kind, rule);
    std::vector<double> load(space.dof_count(), 0.0);
    int dofs[6];
    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        space.element_scalar_dofs(e, dofs);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.points[q].w * g.det;
            for (int i = 0; i < tab.n; ++i) load[dofs[i]] += w * tab.val[q][i];
        }
    }
    return load;
}

CsrMatrix assemble_scalar_convection(const DofMap& space, const FeFunction& u,
                                     const QuadratureRule& rule) {
    const Mesh& mesh = *space.mesh;
    const BasisTable tab(space.kind, rule);
    const BasisTable utab(u.map->kind, rule);
    TripletBuffer t(space.dof_count(), space.dof_count());
    t.reserve(mass_triplet_estimate(space));

    int dofs[6], udofs[6];
    double local[6][6];
    Vec2 grad[6], ugrad[6];
    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        space.element_scalar_dofs(e, dofs);
        u.map->element_scalar_dofs(e, udofs);
        for (int i = 0; i < tab.n; ++i)
            for (int j = 0; j < tab.n; ++j) local[i][j] = 0.0;

        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.points[q].w * g.det;
            physical_grads(tab, q, g, grad);
            physical_grads(utab, q, g, ugrad);
            Vec2 uq;
            double div_u = 0.0;
            for (int i = 0; i < utab.n; ++i) {
                const double ux = u.coeffs[2 * udofs[i]], uy = u.coeffs[2 * udofs[i] + 1];
                uq.x += ux * utab.val[q][i];
                uq.y += uy * utab.val[q][i];
                div_u += ux * ugrad[i].x + uy * ugrad[i].y;
            }
            for (int i = 0; i < tab.n; ++i) {
                const double wi = w * tab.val[q][i];
                for (int j = 0; j < tab.n; ++j)
                    local[i][j] += wi * (uq.dot(grad[j]) + 0.5 * div_u * tab.val[q][j]);
            }
        }
        for (int i = 0; i < tab.n; ++i)
            for (int j = 0; j < tab.n; ++j) t.add(dofs[i], dofs[j], local[i][j]);
    }
    return csr_from_triplets(t);
}

DensitySystem assemble_density_step(const FeFunction& sigma_prev, const FeFunction& u_curr,
                                    double tau, const QuadratureRule& rule) {
    if (tau <= 0.0) throw InputError("assemble_density_step: tau must be positive");
    const DofMap& space = *sigma_prev.map;
    const Mesh& mesh = *space.mesh;
    const BasisTable tab(space.kind, rule);
    const BasisTable utab(u_curr.map->kind, rule);

    TripletBuffer t(space.dof_count(), space.dof_count());
    t.reserve(mass_triplet_estimate(space));
    std::vector<double> rhs(space.dof_count(), 0.0);

    const double inv_tau = 1.0 / tau;
    int dofs[6], udofs[6];
    double local[6][6], local_rhs[6];
    Vec2 grad[6], ugrad[6];
    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        space.element_scalar_dofs(e, dofs);
        u_curr.map->element_scalar_dofs(e, udofs);
        for (int i = 0; i < tab.n; ++i) {
            local_rhs[i] = 0.0;
            for (int j = 0; j < tab.n; ++j) local[i][j] = 0.0;
        }

        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.points[q].w * g.det;
            physical_grads(tab, q, g, grad);
            physical_grads(utab, q, g, ugrad);
            Vec2 uq;
            double div_u = 0.0;
            for (int i = 0; i < utab.n; ++i) {
                const double ux = u_curr.coeffs[2 * udofs[i]], uy = u_curr.coeffs[2 * udofs[i] + 1];
                uq.x += ux * utab.val[q][i];
                uq.y += uy * utab.val[q][i];
                div_u += ux * ugrad[i].x + uy * ugrad[i].y;
            }
            double sig_prev = 0.0;
            for (int i = 0; i < tab.n; ++i) sig_prev += sigma_prev.coeffs[dofs[i]] * tab.val[q][i];

            for (int i = 0; i < tab.n; ++i) {
                const double wi = w * tab.val[q][i];
                local_rhs[i] += wi * sig_prev * inv_tau;
                for (int j = 0; j < tab.n; ++j)
                    local[i][j] += wi * (inv_tau * tab.val[q][j] + uq.dot(grad[j]) +
                                         0.5 * div_u * tab.val[q][j]);
            }
        }
        for (int i = 0; i < tab.n; ++i) {
            rhs[dofs[i]] += local_rhs[i];
            for (int j = 0; j < tab.n; ++j) t.add(dofs[i], dofs[j], local[i][j]);
        }
    }

    DensitySystem sys;
    sys.matrix = csr_from_triplets(t);
    sys.triplets = std::move(t);
    sys.rhs = std::move(rhs);
    return sys;
}

MomentumSystem assemble_momentum_step(const FeFunction& sigma_next, const FeFunction& sigma_prev,
                                      double lambda_prev, const FeFunction& u_prev,
                                      const FeFunction& u_tilde_prev, double mu, double tau,
                                      const std::function<Vec2(Vec2)>& forcing,
                                      const DofMap& vmap, const DofMap& pmap,
                                      const QuadratureRule& rule, bool attach_border) {
    if (tau <= 0.0 || mu <= 0.0)
        throw InputError("assemble_momentum_step: tau and mu must be positive");

    const Mesh& mesh = *vmap.mesh;
    const BasisTable vtab(SpaceKind::P2Scalar, rule);
    const BasisTable ptab(SpaceKind::P1Scalar, rule);
    const BasisTable stab(sigma_next.map->kind, rule);

    MomentumSystem sys;
    sys.n_v = vmap.dof_count();
    sys.n_p = pmap.dof_count();
    sys.bordered = attach_border;
    const int n_total = sys.n_v + sys.n_p;
    sys.matrix = TripletBuffer(n_total, n_total);
    sys.matrix.reserve(static_cast<size_t>(mesh.element_count()) * (2 * 36 + 2 * 36 + 9));
    sys.rhs.assign(n_total, 0.0);

    const double inv_tau = 1.0 / tau;
    int vdofs[6], pdofs[6], sdofs[6];
    double a_scalar[6][6]; // shared by both velocity components
    double b_div[3][12];   // pressure row block: (div v, q)
    double rhs_local[12];
    Vec2 vgrad[6], sgrad[6];

    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        vmap.element_scalar_dofs(e, vdofs);
        pmap.element_scalar_dofs(e, pdofs);
        sigma_next.map->element_scalar_dofs(e, sdofs);

        for (int i = 0; i < 6; ++i) {
            rhs_local[2 * i] = rhs_local[2 * i + 1] = 0.0;
            for (int j = 0; j < 6; ++j) a_scalar[i][j] = 0.0;
        }
        for (int qi = 0; qi < 3; ++qi)
            for (int j = 0; j < 12; ++j) b_div[qi][j] = 0.0;

        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.points[q].w * g.det;
            const double l[3] = {rule.points[q].l0, rule.points[q].l1, rule.points[q].l2};
            physical_grads(vtab, q, g, vgrad);
            physical_grads(stab, q, g, sgrad);

            // Field values at this quadrature point.
            double s1 = 0.0, s0 = 0.0;
            Vec2 grad_s0;
            for (int i = 0; i < stab.n; ++i) {
                s1 += sigma_next.coeffs[sdofs[i]] * stab.val[q][i];
                s0 += sigma_prev.coeffs[sdofs[i]] * stab.val[q][i];
                grad_s0 += sigma_prev.coeffs[sdofs[i]] * sgrad[i];
            }
            Vec2 u0, tu0;
            double div_u0 = 0.0;
            for (int i = 0; i < 6; ++i) {
                const double ux = u_prev.coeffs[2 * vdofs[i]], uy = u_prev.coeffs[2 * vdofs[i] + 1];
                u0.x += ux * vtab.val[q][i];
                u0.y += uy * vtab.val[q][i];
                div_u0 += ux * vgrad[i].x + uy * vgrad[i].y;
                tu0.x += u_tilde_prev.coeffs[2 * vdofs[i]] * vtab.val[q][i];
                tu0.y += u_tilde_prev.coeffs[2 * vdofs[i] + 1] * vtab.val[q][i];
            }
            const double rho0 = lambda_prev * s0 * s0;
            // div(rho u) = rho div u + grad(rho) . u, grad(rho) = 2 lambda s0 grad s0
            const double div_rho_u = rho0 * div_u0 + 2.0 * lambda_prev * s0 * grad_s0.dot(u0);
            const Vec2 f = forcing(g.map(l));

            const double mass_w = inv_tau * s1 * s1;
            const double rhs_w = inv_tau * s1 * s0;
            for (int i = 0; i < 6; ++i) {
                const double wi = w * vtab.val[q][i];
                rhs_local[2 * i] += wi * (rhs_w * tu0.x + f.x);
                rhs_local[2 * i + 1] += wi * (rhs_w * tu0.y + f.y);
                for (int j = 0; j < 6; ++j) {
                    a_scalar[i][j] += wi * (mass_w * vtab.val[q][j] + u0.dot(vgrad[j]) * rho0 +
                                            0.5 * div_rho_u * vtab.val[q][j]) +
                                      w * mu * vgrad[i].dot(vgrad[j]);
                }
            }
            for (int qi = 0; qi < 3; ++qi) {
                const double wq = w * ptab.val[q][qi];
                for (int j = 0; j < 6; ++j) {
                    b_div[qi][2 * j] += wq * vgrad[j].x;
                    b_div[qi][2 * j + 1] += wq * vgrad[j].y;
                }
            }
        }

        for (int i = 0; i < 6; ++i) {
            const int gi = 2 * vdofs[i];
            sys.rhs[gi] += rhs_local[2 * i];
            sys.rhs[gi + 1] += rhs_local[2 * i + 1];
            for (int j = 0; j < 6; ++j) {
                const int gj = 2 * vdofs[j];
                sys.matrix.add(gi, gj, a_scalar[i][j]);
                sys.matrix.add(gi + 1, gj + 1, a_scalar[i][j]);
            }
        }
        // Divergence rows and their exact negated transpose in the momentum rows.
        for (int qi = 0; qi < 3; ++qi) {
            const int gq = sys.n_v + pdofs[qi];
            for (int j = 0; j < 6; ++j) {
                for (int c = 0; c < 2; ++c) {
                    const double v = b_div[qi][2 * j + c];
                    const int gv = 2 * vdofs[j] + c;
                    sys.matrix.add(gq, gv, v);
                    sys.matrix.add(gv, gq, -v);
                }
            }
        }
    }

    if (attach_border) {
        const std::vector<double> wload = assemble_unit_load(pmap, rule);
        sys.border_weights.assign(n_total, 0.0);
        for (int qdof = 0; qdof < sys.n_p; ++qdof)
            sys.border_weights[sys.n_v + qdof] = wload[qdof];
    }
    return sys;
}

ReducedSystem apply_dirichlet(const TripletBuffer& a, const std::vector<double>& rhs,
                              const std::vector<int>& dofs, const std::vector<double>& values) {
    if (dofs.size() != values.size())
        throw InputError("apply_dirichlet: dof/value size mismatch");
    const int n = a.rows;

    ReducedSystem red;
    red.constrained_dofs = dofs;
    red.constrained_values = values;
    red.full_to_reduced.assign(n, 0);

    std::vector<double> constraint_value(n, 0.0);
    for (size_t i = 0; i < dofs.size(); ++i) {
        if (dofs[i] < 0 || dofs[i] >= n) throw InputError("apply_dirichlet: dof out of range");
        red.full_to_reduced[dofs[i]] = -1;
        constraint_value[dofs[i]] = values[i];
    }
    for (int d = 0; d < n; ++d) {
        if (red.full_to_reduced[d] == 0) {
            red.full_to_reduced[d] = static_cast<int>(red.free_dofs.size());
            red.free_dofs.push_back(d);
        }
    }
    const int n_free = static_cast<int>(red.free_dofs.size());

    red.rhs.resize(n_free);
    for (int i = 0; i < n_free; ++i) red.rhs[i] = rhs[red.free_dofs[i]];

    TripletBuffer t(n_free, n_free);
    t.reserve(a.entries.size());
    for (const auto& entry : a.entries) {
        const int ri = red.full_to_reduced[entry.row];
        if (ri < 0) continue;
        const int ci = red.full_to_reduced[entry.col];
        if (ci < 0) {
            red.rhs[ri] -= entry.value * constraint_value[entry.col];
        } else {
            t.add(ri, ci, entry.value);
        }
    }
    red.matrix = csr_from_triplets(t);
    return red;
}

ReducedSystem ReductionPlan::reduce(const TripletBuffer& a, const std::vector<double>& rhs,
                                    const std::vector<int>& dofs,
                                    const std::vector<double>& values) {
    auto pack = [](int r, int c) {
        return (static_cast<long long>(r) << 32) | static_cast<unsigned>(c);
    };

    bool reuse = valid_ && layout_.size() == a.entries.size() && constrained_dofs_ == dofs;
    if (reuse) {
        for (size_t i = 0; i < a.entries.size(); ++i)
            if (layout_[i] != pack(a.entries[i].row, a.entries[i].col)) {
                reuse = false;
                break;
            }
    }

    if (!reuse) {
        ReducedSystem red = apply_dirichlet(a, rhs, dofs, values);
        layout_.resize(a.entries.size());
        slot_.assign(a.entries.size(), -1);
        rhs_contribs_.clear();
        std::vector<int> constraint_index(a.rows, -1);
        for (size_t i = 0; i < dofs.size(); ++i) constraint_index[dofs[i]] = static_cast<int>(i);
        for (size_t i = 0; i < a.entries.size(); ++i) {
            const auto& e = a.entries[i];
            layout_[i] = pack(e.row, e.col);
            const int ri = red.full_to_reduced[e.row];
            if (ri < 0) continue;
            const int ci = red.full_to_reduced[e.col];
            if (ci < 0) {
                rhs_contribs_.push_back({static_cast<int>(i), ri, constraint_index[e.col]});
            } else {
                const int begin = red.matrix.row_offsets[ri], end = red.matrix.row_offsets[ri + 1];
                const auto it = std::lower_bound(red.matrix.col_indices.begin() + begin,
                                                 red.matrix.col_indices.begin() + end, ci);
                slot_[i] = static_cast<int>(it - red.matrix.col_indices.begin());
            }
        }
        constrained_dofs_ = dofs;
        pattern_ = red.matrix;
        free_dofs_ = red.free_dofs;
        full_to_reduced_ = red.full_to_reduced;
        valid_ = true;
        return red;
    }

    ReducedSystem red;
    red.matrix = pattern_;
    std::fill(red.matrix.values.begin(), red.matrix.values.end(), 0.0);
    for (size_t i = 0; i < a.entries.size(); ++i)
        if (slot_[i] >= 0) red.matrix.values[slot_[i]] += a.entries[i].value;

    red.free_dofs = free_dofs_;
    red.full_to_reduced = full_to_reduced_;
    red.constrained_dofs = dofs;
    red.constrained_values = values;
    red.rhs.resize(free_dofs_.size());
    for (size_t i = 0; i < free_dofs_.size(); ++i) red.rhs[i] = rhs[free_dofs_[i]];
    for (const auto& c : rhs_contribs_)
        red.rhs[c.reduced_row] -= a.entries[c.triplet].value * values[c.constraint];
    return red;
}

std::vector<double> ReducedSystem::expand(const std::vector<double>& reduced) const {
    std::vector<double> full(full_to_reduced.size(), 0.0);
    for (size_t d = 0; d < full_to_reduced.size(); ++d)
        if (full_to_reduced[d] >= 0) full[d] = reduced[full_to_reduced[d]];
    for (size_t i = 0; i < constrained_dofs.size(); ++i)
        full[constrained_dofs[i]] = constrained_values[i];
    return full;
}

FeFunction l2_project(const std::function<double(Vec2)>& field, const DofMap& space,
                      const QuadratureRule& rule) {
    const Mesh& mesh = *space.mesh;
    const CsrMatrix mass = assemble_mass(space, rule);
    const BasisTable tab(space.kind, rule);

    std::vector<double> rhs(space.dof_count(), 0.0);
    int dofs[6];
    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        space.element_scalar_dofs(e, dofs);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double l[3] = {rule.points[q].l0, rule.points[q].l1, rule.points[q].l2};
            const double w = rule.points[q].w * g.det * field(g.map(l));
            for (int i = 0; i < tab.n; ++i) rhs[dofs[i]] += w * tab.val[q][i];
        }
    }
    auto [x, report] = solve_direct(mass, rhs);
    if (!report.factorization_ok || report.relative_residual > 1e-10)
        throw SolverError("l2_project: mass solve failed, residual " +
                          std::to_string(report.relative_residual));
    FeFunction out(space);
    out.coeffs = std::move(x);
    return out;
}

void collect_velocity_dirichlet(const DofMap& vmap,
                                const std::map<int, std::function<Vec2(Vec2)>>& data,
                                std::vector<int>& dofs, std::vector<double>& values) {
    std::map<int, Vec2> merged; // scalar dof -> value, deterministic by tag order
    for (const auto& [tag, fn] : data) {
        const auto it = vmap.boundary_scalar_dofs.find(tag);
        if (it == vmap.boundary_scalar_dofs.end()) continue;
        for (int s : it->second) merged[s] = fn(vmap.dof_position(s));
    }
    dofs.clear();
    values.clear();
    dofs.reserve(2 * merged.size());
    values.reserve(2 * merged.size());
    for (const auto& [s, v] : merged) {
        dofs.push_back(2 * s);
        values.push_back(v.x);
        dofs.push_back(2 * s + 1);
        values.push_back(v.y);
    }
}

std::pair<FeFunction, FeFunction> stokes_project(
    const std::function<Vec2(Vec2)>& u, const std::function<Mat2(Vec2)>& grad_u,
    const std::function<double(Vec2)>& p, const DofMap& vmap, const DofMap& pmap,
    const QuadratureRule& rule,
    const std::map<int, std::function<Vec2(Vec2)>>& dirichlet_data, bool attach_border) {
    // Empty dirichlet_data means "impose the trace of u itself on every tag".
    std::map<int, std::function<Vec2(Vec2)>> bc = dirichlet_data;
    if (bc.empty())
        for (const auto& tag : vmap.mesh->tags) bc[tag.id] = u;

    const Mesh& mesh = *vmap.mesh;
    const BasisTable vtab(SpaceKind::P2Scalar, rule);
    const BasisTable ptab(SpaceKind::P1Scalar, rule);

    const int n_v = vmap.dof_count();
    const int n_p = pmap.dof_count();
    const int n_total = n_v + n_p;
    TripletBuffer t(n_total, n_total);
    std::vector<double> rhs(n_total, 0.0);

    int vdofs[6], pdofs[3];
    Vec2 vgrad[6];
    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        vmap.element_scalar_dofs(e, vdofs);
        {
            int tmp[6];
            pmap.element_scalar_dofs(e, tmp);
            for (int i = 0; i < 3; ++i) pdofs[i] = tmp[i];
        }
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double l[3] = {rule.points[q].l0, rule.points[q].l1, rule.points[q].l2};
            const double w = rule.points[q].w * g.det;
            physical_grads(vtab, q, g, vgrad);
            const Vec2 x = g.map(l);
            const Mat2 gu = grad_u(x);
            const double pv = p(x);

            for (int i = 0; i < 6; ++i) {
                const int gx = 2 * vdofs[i], gy = gx + 1;
                // (grad u, grad v) rows and -(div v, p) data on the RHS
                rhs[gx] += w * (gu(0, 0) * vgrad[i].x + gu(0, 1) * vgrad[i].y - pv * vgrad[i].x);
                rhs[gy] += w * (gu(1, 0) * vgrad[i].x + gu(1, 1) * vgrad[i].y - pv * vgrad[i].y);
                for (int j = 0; j < 6; ++j) {
                    const double k = w * vgrad[i].dot(vgrad[j]);
                    t.add(gx, 2 * vdofs[j], k);
                    t.add(gy, 2 * vdofs[j] + 1, k);
                }
            }
            const double div_u = gu.trace();
            for (int qi = 0; qi < 3; ++qi) {
                const double wq = w * ptab.val[q][qi];
                rhs[n_v + pdofs[qi]] += wq * div_u;
                for (int j = 0; j < 6; ++j) {
                    t.add(n_v + pdofs[qi], 2 * vdofs[j], wq * vgrad[j].x);
                    t.add(n_v + pdofs[qi], 2 * vdofs[j] + 1, wq * vgrad[j].y);
                    t.add(2 * vdofs[j], n_v + pdofs[qi], -wq * vgrad[j].x);
                    t.add(2 * vdofs[j] + 1, n_v + pdofs[qi], -wq * vgrad[j].y);
                }
            }
        }
    }
    std::vector<int> bc_dofs;
    std::vector<double> bc_values;
    collect_velocity_dirichlet(vmap, bc, bc_dofs, bc_values);
    const ReducedSystem red = apply_dirichlet(t, rhs, bc_dofs, bc_values);

    std::vector<double> xr;
    SolveReport report;
    if (attach_border) {
        // Border constrains integral(Q p) = integral(p) so the projection
        // reproduces representable pairs exactly.
        const std::vector<double> wload = assemble_unit_load(pmap, rule);
        std::vector<double> w_red(red.free_dofs.size(), 0.0);
        for (int qdof = 0; qdof < n_p; ++qdof) {
            const int reduced = red.full_to_reduced[n_v + qdof];
            if (reduced >= 0) w_red[reduced] = wload[qdof];
        }
        double pmean = 0.0;
        for (int e = 0; e < mesh.element_count(); ++e) {
            const ElementGeometry g = element_geometry(mesh, e);
            for (const auto& qp : rule.points) {
                const double l[3] = {qp.l0, qp.l1, qp.l2};
                pmean += qp.w * g.det * p(g.map(l));
            }
        }
        BorderedSolver solver;
        solver.factorize(red.matrix, w_red);
        BorderedSolver::Result result = solver.solve(red.rhs, pmean);
        xr = std::move(result.x);
        report = result.report;
    } else {
        std::tie(xr, report) = solve_direct(red.matrix, red.rhs);
    }
    if (!report.factorization_ok || report.relative_residual > 1e-9)
        throw SolverError("stokes_project: solve failed, residual " +
                          std::to_string(report.relative_residual));
    const std::vector<double> x = red.expand(xr);

    FeFunction uh(vmap), ph(pmap);
    std::copy(x.begin(), x.begin() + n_v, uh.coeffs.begin());
    std::copy(x.begin() + n_v, x.begin() + n_v + n_p, ph.coeffs.begin());
    return {std::move(uh), std::move(ph)};
}

} // namespace vdflow
