// Acceptance suite: one binary, one run-group per invocation, one PASS/FAIL
// line per criterion checked in that group. Exit code equals the number of
// failed criteria.
//
// Groups:
//   convergence   manufactured-disk ladder tau = 1/8..1/64 (criteria 1, 4a, 6,
//                 3 on those runs)
//   taylor_green  1000-step conservation run (criteria 2, 4b, 8a, 3)
//   dissipation   four viscosities to t = 2 (criterion 5, 3)
//   kernels       quadrature/gradient/element/solver/projection oracles
//                 (criterion 7) and convection skew-symmetry (criterion 8b)
//   backstep      impulsive channel to t = 7 (criterion 9a, 3)
//   cylinder      cylinder channel to t = 7 with the upstream symmetry
//                 statistic at t = 3 (criterion 9b, 3)

#include "vdflow/assembly.hpp"
#include "vdflow/diagnostics.hpp"
#include "vdflow/errors.hpp"
#include "vdflow/scheme.hpp"

#include "../oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace vdflow;

namespace {

int g_failures = 0;

void record(int criterion, const std::string& label, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

struct RunTrace {
    std::vector<StepDiagnostics> series;
    double min_density = 1e300;
    double max_mass_drift = 0.0;
    double max_energy_residual = 0.0;
    double max_gamma_defect = 0.0; // max(1 - gamma, 0)
    double max_gamma_dev = 0.0;    // max |gamma - 1|
    double max_sigma_growth = 0.0; // max(||s+|| / ||s|| - 1)
    bool sigma_growth_valid = false;
};

RunTrace traced_run(Simulation& sim, long steps, bool track_sigma_norm) {
    RunTrace trace;
    trace.series.push_back(sim.initial_diagnostics());
    trace.min_density = std::min(trace.min_density, trace.series.front().min_density);
    double sigma_norm_prev =
        track_sigma_norm ? std::sqrt(l2_norm_sq(sim.state().sigma, sim.rule())) : 0.0;
    const double mass0 = sim.mass_target();
    for (long k = 0; k < steps; ++k) {
        const StepDiagnostics d = sim.advance();
        trace.series.push_back(d);
        trace.min_density = std::min(trace.min_density, d.min_density);
        trace.max_mass_drift =
            std::max(trace.max_mass_drift, std::abs(d.mass - mass0) / std::abs(mass0));
        trace.max_energy_residual = std::max(trace.max_energy_residual, std::abs(d.energy_residual));
        trace.max_gamma_defect = std::max(trace.max_gamma_defect, 1.0 - d.gamma);
        trace.max_gamma_dev = std::max(trace.max_gamma_dev, std::abs(d.gamma - 1.0));
        if (track_sigma_norm) {
            const double sigma_norm = std::sqrt(l2_norm_sq(sim.state().sigma, sim.rule()));
            trace.max_sigma_growth =
                std::max(trace.max_sigma_growth, sigma_norm / sigma_norm_prev - 1.0);
            sigma_norm_prev = sigma_norm;
            trace.sigma_growth_valid = true;
        }
    }
    return trace;
}

SchemeConfig config_for(const CaseSetup& c, double tau, double T) {
    SchemeConfig cfg;
    cfg.mu = c.mu;
    cfg.tau = tau;
    cfg.T = T;
    cfg.strict = false; // the suite asserts explicitly and reports per criterion
    return cfg;
}

// ------------------------------------------------------------- convergence

void group_convergence() {
    const double table_u[4] = {2.7128e-2, 1.2816e-2, 6.0949e-3, 2.9476e-3};
    const double table_rho[4] = {4.9718e-2, 2.8767e-2, 1.3666e-2, 7.0731e-3};
    const double table_p[4] = {4.9852e-2, 3.2804e-2, 1.7207e-2, 8.7454e-3};

    std::vector<ErrorRecord> records;
    std::vector<double> gamma_dev, identity_worst, identity_tol;
    double min_density = 1e300;

    for (int level = 0; level < 4; ++level) {
        CaseSetup c = case_manufactured_disk(level);
        const double tau = manufactured_tau(level);
        Simulation sim(c, config_for(c, tau, 1.0));
        RunTrace trace = traced_run(sim, std::lround(1.0 / tau), false);

        const auto& exact = *c.exact;
        const double t_final = trace.series.back().t;
        const ExactFields fields{
            [&](Vec2 x) { return exact.rho(x, t_final); },
            [&](Vec2 x) { return exact.u(x, t_final); },
            [&](Vec2 x) { return exact.p(x, t_final); },
        };
        const auto& s = sim.state();
        records.push_back(error_norms(s.lambda, s.sigma, s.u, s.p, fields,
                                      sim.mesh().max_circumdiameter(), tau, sim.rule()));
        gamma_dev.push_back(trace.max_gamma_dev);
        identity_worst.push_back(trace.max_energy_residual);
        identity_tol.push_back(1e-8 * std::max(1.0, sim.initial_energy() / tau));
        min_density = std::min(min_density, trace.min_density);

        if (trace.max_gamma_defect > 1e-10)
            record(6, "gamma lower bound (manufactured level " + std::to_string(level) + ")",
                   false, "1 - gamma = " + sci(trace.max_gamma_defect));
        std::printf("  level %d: tau = %g, h = %.4f, err_u = %s, err_rho = %s, err_p = %s\n",
                    level, tau, records.back().h, sci(records.back().err_u).c_str(),
                    sci(records.back().err_rho).c_str(), sci(records.back().err_p).c_str());
    }

    bool magnitudes_ok = true;
    std::string worst;
    for (int i = 0; i < 4; ++i) {
        auto check = [&](double got, double ref, const char* field) {
            if (got > 5.0 * ref || got < ref / 5.0) {
                magnitudes_ok = false;
                worst += std::string(field) + "@" + sci(got) + " vs " + sci(ref) + "; ";
            }
        };
        check(records[i].err_u, table_u[i], "u");
        check(records[i].err_rho, table_rho[i], "rho");
        check(records[i].err_p, table_p[i], "p");
    }
    record(1, "error magnitudes within 5x of the reference table", magnitudes_ok,
           magnitudes_ok ? "all twelve values in range" : worst);

    const ConvergenceOrders orders = convergence_orders(records);
    bool orders_ok = true;
    std::string detail;
    for (size_t i = 0; i < orders.order_u.size(); ++i) {
        if (orders.order_u[i] < 0.8 || orders.order_u[i] > 1.25) orders_ok = false;
        if (orders.order_rho[i] < 0.8 || orders.order_rho[i] > 1.25) orders_ok = false;
        if (orders.order_p[i] < 0.5 || orders.order_p[i] > 1.25) orders_ok = false;
        detail += "u:" + sci(orders.order_u[i]) + " rho:" + sci(orders.order_rho[i]) +
                  " p:" + sci(orders.order_p[i]) + "; ";
    }
    record(1, "observed orders (u, rho in [0.8,1.25], p in [0.5,1.25])", orders_ok, detail);

    double worst_resid = 0.0, worst_tol = 0.0;
    for (size_t i = 0; i < identity_worst.size(); ++i)
        if (identity_worst[i] / identity_tol[i] > worst_resid / std::max(worst_tol, 1e-300)) {
            worst_resid = identity_worst[i];
            worst_tol = identity_tol[i];
        }
    const bool identity_ok = [&] {
        for (size_t i = 0; i < identity_worst.size(); ++i)
            if (identity_worst[i] > identity_tol[i]) return false;
        return true;
    }();
    // The rotating Dirichlet data does work on the fluid through the wall;
    // the residual as defined carries that power term (it tracks
    // mu * ||grad u_tilde||^2), so this check measures an honest gap.
    record(4, "energy identity per step, manufactured disk", identity_ok,
           "max residual " + sci(worst_resid) + " vs tolerance " + sci(worst_tol));

    bool gamma_decreasing = true;
    std::string gd;
    for (int i = 0; i + 1 < 4; ++i) {
        if (gamma_dev[i + 1] >= gamma_dev[i]) gamma_decreasing = false;
        gd += sci(gamma_dev[i]) + " -> " + sci(gamma_dev[i + 1]) + "; ";
    }
    record(6, "max |gamma - 1| decreases under refinement", gamma_decreasing, gd);
    record(3, "density samples nonnegative (manufactured runs)", min_density >= 0.0,
           "min sample " + sci(min_density));
}

// ------------------------------------------------------------ taylor_green

void group_taylor_green() {
    CaseSetup c = case_taylor_green_square(0.01, 64, 64);
    Simulation sim(c, config_for(c, 0.01, 10.0));
    const double identity_tol = 1e-8 * std::max(1.0, sim.initial_energy() / 0.01);
    RunTrace trace = traced_run(sim, 1000, true);

    record(2, "mass conservation over 1000 steps", trace.max_mass_drift <= 1e-10,
           "max relative drift " + sci(trace.max_mass_drift));
    record(4, "energy identity per step, Taylor-Green run",
           trace.max_energy_residual <= identity_tol,
           "max residual " + sci(trace.max_energy_residual) + " vs tolerance " + sci(identity_tol));
    record(8, "sigma L2 norm non-increasing per step", trace.max_sigma_growth <= 1e-12,
           "max growth " + sci(trace.max_sigma_growth));
    record(6, "gamma lower bound over the conservation run", trace.max_gamma_defect <= 1e-10,
           "max(1 - gamma) = " + sci(trace.max_gamma_defect));
    record(3, "density samples nonnegative (conservation run)", trace.min_density >= 0.0,
           "min sample " + sci(trace.min_density));
}

// ------------------------------------------------------------- dissipation

void group_dissipation() {
    const double viscosities[4] = {0.1, 0.05, 0.01, 0.005};
    double final_energy[4];
    bool monotone = true;
    double min_density = 1e300;
    std::string detail;

    for (int i = 0; i < 4; ++i) {
        CaseSetup c = case_taylor_green_square(viscosities[i], 64, 64);
        Simulation sim(c, config_for(c, 0.01, 2.0));
        const double e0 = sim.initial_energy();
        RunTrace trace = traced_run(sim, 200, false);
        for (size_t k = 1; k < trace.series.size(); ++k)
            if (trace.series[k].energy > trace.series[k - 1].energy + 1e-12 * e0) monotone = false;
        final_energy[i] = trace.series.back().energy;
        min_density = std::min(min_density, trace.min_density);
        detail += "mu=" + std::to_string(viscosities[i]) + ": E(2)=" + sci(final_energy[i]) + "; ";
    }
    record(5, "energy non-increasing for every viscosity", monotone, detail);

    const bool ordered = final_energy[0] < final_energy[1] && final_energy[1] < final_energy[2] &&
                         final_energy[2] < final_energy[3];
    record(5, "larger viscosity decays faster (E at t=2 strictly ordered)", ordered, detail);
    record(3, "density samples nonnegative (dissipation runs)", min_density >= 0.0,
           "min sample " + sci(min_density));
}

// ----------------------------------------------------------------- kernels

void group_kernels() {
    // quadrature vs the factorial formula, all monomials of degree <= 8
    {
        double worst = 0.0;
        for (int d = 1; d <= 8; ++d) {
            const auto& rule = quadrature_rule(d);
            for (int a = 0; a + 0 <= d; ++a)
                for (int b = 0; a + b <= d; ++b) {
                    double s = 0.0;
                    for (const auto& qp : rule.points)
                        s += qp.w * std::pow(qp.l1, a) * std::pow(qp.l2, b);
                    const double exact = oracle::monomial_moment(a, b);
                    worst = std::max(worst, std::abs(s - exact) / exact);
                }
        }
        record(7, "quadrature exactness against a! b! / (a+b+2)!", worst <= 1e-14,
               "worst relative error " + sci(worst));
    }

    // basis gradients vs central differences
    {
        const Vec2 v0{0.1, 0.05}, v1{1.02, 0.31}, v2{0.4, 0.95};
        Mesh m;
        m.vertices = {v0, v1, v2};
        m.triangles = {{0, 1, 2}};
        m.build_connectivity();
        const ElementGeometry g = element_geometry(m, 0);
        const ReferenceElement p2 = ReferenceElement::p2();
        auto basis_at = [&](Vec2 x, int i) {
            const double dx = x.x - v0.x, dy = x.y - v0.y;
            const double l1 = ((v2.y - v0.y) * dx - (v2.x - v0.x) * dy) / g.det;
            const double l2 = (-(v1.y - v0.y) * dx + (v1.x - v0.x) * dy) / g.det;
            const double l[3] = {1.0 - l1 - l2, l1, l2};
            return eval_basis(p2, l)[i];
        };
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u01(0.05, 0.9);
        double worst = 0.0;
        const double h = 1e-6;
        for (int trial = 0; trial < 20; ++trial) {
            double a = u01(rng), b = u01(rng);
            if (a + b > 0.95) {
                a *= 0.5;
                b *= 0.5;
            }
            const double l[3] = {1.0 - a - b, a, b};
            const Vec2 x = g.map(l);
            const auto grads = eval_basis_grad(p2, l, g);
            for (int i = 0; i < 6; ++i) {
                const double fx =
                    (basis_at({x.x + h, x.y}, i) - basis_at({x.x - h, x.y}, i)) / (2 * h);
                const double fy =
                    (basis_at({x.x, x.y + h}, i) - basis_at({x.x, x.y - h}, i)) / (2 * h);
                const double scale = std::max(1.0, std::abs(grads[i].x) + std::abs(grads[i].y));
                worst = std::max(worst, std::abs(grads[i].x - fx) / scale);
                worst = std::max(worst, std::abs(grads[i].y - fy) / scale);
            }
        }
        record(7, "basis gradients vs central finite differences", worst <= 1e-6,
               "worst relative deviation " + sci(worst));
    }

    // element matrices vs a dense conical-product quadrature
    {
        const Vec2 v0{0.12, -0.2}, v1{1.4, 0.33}, v2{0.45, 1.02};
        Mesh m;
        m.vertices = {v0, v1, v2};
        m.triangles = {{0, 1, 2}};
        m.build_connectivity();
        const DofMap p2 = build_dof_map(m, SpaceKind::P2Scalar);
        const auto& rule = quadrature_rule(9);
        const CsrMatrix mass = assemble_mass(p2, rule);
        const CsrMatrix stiff = assemble_stiffness(p2, rule);

        auto entry = [](const CsrMatrix& a, int r, int c) {
            for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
                if (a.col_indices[k] == c) return a.values[k];
            return 0.0;
        };
        const double det = (v1.x - v0.x) * (v2.y - v0.y) - (v2.x - v0.x) * (v1.y - v0.y);
        const Vec2 g0{(v1.y - v2.y) / det, (v2.x - v1.x) / det};
        const Vec2 g1{(v2.y - v0.y) / det, (v0.x - v2.x) / det};
        const Vec2 g2{(v0.y - v1.y) / det, (v1.x - v0.x) / det};
        auto grads = [&](double l0, double l1, double l2) {
            return std::array<Vec2, 6>{
                (4 * l0 - 1) * g0,           (4 * l1 - 1) * g1,           (4 * l2 - 1) * g2,
                4.0 * (l1 * g0 + l0 * g1),   4.0 * (l2 * g1 + l1 * g2),   4.0 * (l0 * g2 + l2 * g0)};
        };
        double worst = 0.0;
        int dofs[6];
        p2.element_scalar_dofs(0, dofs);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                const double mo = oracle::element_integral(
                    v0, v1, v2, 12, [&](double l0, double l1, double l2, Vec2) {
                        const auto phi = oracle::p2_basis(l0, l1, l2);
                        return phi[i] * phi[j];
                    });
                const double so = oracle::element_integral(
                    v0, v1, v2, 12, [&](double l0, double l1, double l2, Vec2) {
                        const auto gr = grads(l0, l1, l2);
                        return gr[i].dot(gr[j]);
                    });
                worst = std::max(worst, std::abs(entry(mass, dofs[i], dofs[j]) - mo) / mass.max_abs());
                worst = std::max(worst, std::abs(entry(stiff, dofs[i], dofs[j]) - so) / stiff.max_abs());
            }
        record(7, "element mass/stiffness matrices vs dense quadrature", worst <= 1e-13,
               "worst relative deviation " + sci(worst));
    }

    // sparse direct solver vs dense elimination
    {
        std::mt19937 rng(29);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const int n = 50;
        std::vector<double> dense(n * n, 0.0);
        TripletBuffer t(n, n);
        for (int i = 0; i < n; ++i) {
            t.add(i, i, 4.0 + u(rng));
            dense[i * n + i] += t.entries.back().value;
            for (int k = 0; k < 6; ++k) {
                const int j = rng() % n;
                const double v = u(rng);
                t.add(i, j, v);
                dense[i * n + j] += v;
            }
        }
        std::vector<double> b(n);
        for (auto& v : b) v = u(rng);
        const auto [x, rep] = solve_direct(csr_from_triplets(t), b);
        const auto xo = oracle::dense_solve(dense, b);
        double diff = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i) {
            diff += (x[i] - xo[i]) * (x[i] - xo[i]);
            scale += xo[i] * xo[i];
        }
        const double rel = std::sqrt(diff / scale);
        record(7, "sparse LU vs dense elimination on a random 50x50 system", rel <= 1e-10,
               "relative difference " + sci(rel) + ", residual " + sci(rep.relative_residual));
    }

    // Stokes projection reproduces a representable pair
    {
        const Mesh m = generate_rectangle_mesh(0, 0, 1, 1, 6, 6);
        const DofMap vmap = build_dof_map(m, SpaceKind::P2Vector2);
        const DofMap pmap = build_dof_map(m, SpaceKind::P1Scalar);
        auto uex = [](Vec2 q) { return Vec2{q.y * q.y + q.x, -q.y}; };
        auto guex = [](Vec2 q) {
            Mat2 g;
            g(0, 0) = 1.0;
            g(0, 1) = 2.0 * q.y;
            g(1, 0) = 0.0;
            g(1, 1) = -1.0;
            return g;
        };
        auto pex = [](Vec2 q) { return 2.0 * q.x - q.y; };
        auto [uh, ph] = stokes_project(uex, guex, pex, vmap, pmap, quadrature_rule(9), {}, true);
        double worst = 0.0;
        for (int s = 0; s < vmap.scalar_count; ++s) {
            const Vec2 x = vmap.dof_position(s);
            worst = std::max(worst, std::abs(uh.coeffs[2 * s] - uex(x).x));
            worst = std::max(worst, std::abs(uh.coeffs[2 * s + 1] - uex(x).y));
        }
        for (int s = 0; s < pmap.scalar_count; ++s)
            worst = std::max(worst, std::abs(ph.coeffs[s] - pex(pmap.dof_position(s))));
        record(7, "Stokes projection reproduces a representable pair", worst <= 1e-11,
               "worst nodal deviation " + sci(worst));
    }

    // convection skew-symmetry for both transport operators
    {
        const Mesh m = generate_rectangle_mesh(0, 0, 1, 1, 8, 8);
        const DofMap wmap = build_dof_map(m, SpaceKind::P2Scalar);
        const DofMap vmap = build_dof_map(m, SpaceKind::P2Vector2);
        const DofMap pmap = build_dof_map(m, SpaceKind::P1Scalar);
        const auto& rule = quadrature_rule(9);

        std::mt19937 rng(37);
        std::normal_distribution<double> nd(0.0, 1.0);
        FeFunction u(vmap);
        for (auto& c : u.coeffs) c = nd(rng);
        for (int s : vmap.all_boundary_scalar_dofs()) {
            u.coeffs[2 * s] = 0.0;
            u.coeffs[2 * s + 1] = 0.0;
        }

        auto skew_defect = [](const CsrMatrix& a) {
            const CsrMatrix at = a.transposed();
            double worst = 0.0;
            for (int r = 0; r < a.rows; ++r) {
                int ka = a.row_offsets[r], kt = at.row_offsets[r];
                while (ka < a.row_offsets[r + 1] || kt < at.row_offsets[r + 1]) {
                    const int ca = ka < a.row_offsets[r + 1] ? a.col_indices[ka] : a.cols;
                    const int ct = kt < at.row_offsets[r + 1] ? at.col_indices[kt] : at.cols;
                    if (ca == ct) {
                        worst = std::max(worst, std::abs(a.values[ka] + at.values[kt]));
                        ++ka, ++kt;
                    } else if (ca < ct) {
                        worst = std::max(worst, std::abs(a.values[ka++]));
                    } else {
                        worst = std::max(worst, std::abs(at.values[kt++]));
                    }
                }
            }
            return worst;
        };

        const CsrMatrix c_density = assemble_scalar_convection(wmap, u, rule);
        const double defect_density = skew_defect(c_density) / c_density.max_abs();

        const FeFunction sigma = interpolate(wmap, [](Vec2 p) { return 1.1 + 0.3 * p.x * p.y; });
        auto f = [](Vec2) { return Vec2{0.0, 0.0}; };
        MomentumSystem with = assemble_momentum_step(sigma, sigma, 0.9, u, u, 0.1, 0.01, f, vmap,
                                                     pmap, rule, false);
        MomentumSystem without = assemble_momentum_step(sigma, sigma, 0.0, u, u, 0.1, 0.01, f,
                                                        vmap, pmap, rule, false);
        TripletBuffer diff(vmap.dof_count(), vmap.dof_count());
        for (size_t i = 0; i < with.matrix.entries.size(); ++i) {
            const auto& a = with.matrix.entries[i];
            const auto& b = without.matrix.entries[i];
            if (a.row < vmap.dof_count() && a.col < vmap.dof_count())
                diff.add(a.row, a.col, a.value - b.value);
        }
        const CsrMatrix n_mom = csr_from_triplets(diff);
        const double defect_momentum = skew_defect(n_mom) / n_mom.max_abs();

        record(8, "convection skew-symmetry, transport and momentum operators",
               defect_density <= 1e-13 && defect_momentum <= 1e-13,
               "relative defects " + sci(defect_density) + ", " + sci(defect_momentum));
    }
}

// ---------------------------------------------------------------- channels

void group_backstep() {
    CaseSetup c = case_backstep();
    Simulation sim(c, config_for(c, 0.01, 7.0));
    bool completed = true;
    std::string what;
    RunTrace trace;
    try {
        trace = traced_run(sim, 700, false);
    } catch (const std::exception& e) {
        completed = false;
        what = e.what();
    }
    record(9, "backstep runs to t = 7 without solver failure", completed,
           completed ? "t_final = " + std::to_string(sim.state().t) : what);
    if (completed) {
        record(6, "gamma lower bound over the backstep run", trace.max_gamma_defect <= 1e-10,
               "max(1 - gamma) = " + sci(trace.max_gamma_defect));
        record(3, "density samples nonnegative (backstep run)", trace.min_density >= 0.0,
               "min sample " + sci(trace.min_density));
        record(2, "mass conservation over the backstep run", trace.max_mass_drift <= 1e-10,
               "max relative drift " + sci(trace.max_mass_drift));
    }
}

void group_cylinder() {
    CaseSetup c = case_cylinder();
    Simulation sim(c, config_for(c, 0.01, 7.0));
    bool completed = true;
    std::string what;
    RunTrace trace;
    double sym_ratio = -1.0;
    try {
        trace.series.push_back(sim.initial_diagnostics());
        trace.min_density = trace.series.front().min_density;
        for (int k = 0; k < 700; ++k) {
            const StepDiagnostics d = sim.advance();
            trace.min_density = std::min(trace.min_density, d.min_density);
            trace.max_gamma_defect = std::max(trace.max_gamma_defect, 1.0 - d.gamma);
            trace.max_mass_drift = std::max(
                trace.max_mass_drift, std::abs(d.mass - sim.mass_target()) / sim.mass_target());
            if (d.step == 300) {
                // upstream symmetry statistic at t = 3: mean |u2| / mean |u1|
                // over quadrature points with x < 0.7
                double sum1 = 0.0, sum2 = 0.0;
                long count = 0;
                const auto& u = sim.state().u;
                for (int e = 0; e < sim.mesh().element_count(); ++e) {
                    const ElementGeometry g = element_geometry(sim.mesh(), e);
                    for (const auto& qp : sim.rule().points) {
                        const double l[3] = {qp.l0, qp.l1, qp.l2};
                        const Vec2 x = g.map(l);
                        if (x.x >= 0.7) continue;
                        const Vec2 v = u.eval_vec(e, l);
                        sum1 += std::abs(v.x);
                        sum2 += std::abs(v.y);
                        ++count;
                    }
                }
                sym_ratio = (sum2 / count) / (sum1 / count);
            }
        }
    } catch (const std::exception& e) {
        completed = false;
        what = e.what();
    }
    record(9, "cylinder runs to t = 7 without solver failure", completed,
           completed ? "t_final = " + std::to_string(sim.state().t) : what);
    if (completed) {
        record(9, "upstream symmetry at t = 3: mean |u2| <= 0.05 mean |u1|",
               sym_ratio >= 0.0 && sym_ratio <= 0.05, "ratio " + sci(sym_ratio));
        record(6, "gamma lower bound over the cylinder run", trace.max_gamma_defect <= 1e-10,
               "max(1 - gamma) = " + sci(trace.max_gamma_defect));
        record(3, "density samples nonnegative (cylinder run)", trace.min_density >= 0.0,
               "min sample " + sci(trace.min_density));
        record(2, "mass conservation over the cylinder run", trace.max_mass_drift <= 1e-10,
               "max relative drift " + sci(trace.max_mass_drift));
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr,
                     "usage: acceptance <group>\n"
                     "groups: convergence taylor_green dissipation kernels backstep cylinder\n");
        return 64;
    }
    const std::string group = argv[1];
    const auto start = std::chrono::steady_clock::now();
    try {
        if (group == "convergence") group_convergence();
        else if (group == "taylor_green") group_taylor_green();
        else if (group == "dissipation") group_dissipation();
        else if (group == "kernels") group_kernels();
        else if (group == "backstep") group_backstep();
        else if (group == "cylinder") group_cylinder();
        else {
            std::fprintf(stderr, "unknown group '%s'\n", group.c_str());
            return 64;
        }
    } catch (const std::exception& e) {
        std::printf("FAIL group %s: unexpected exception: %s\n", group.c_str(), e.what());
        return 1;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("group %s finished in %.1f s with %d failure(s)\n", group.c_str(), seconds,
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
