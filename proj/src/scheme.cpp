#include "vdflow/scheme.hpp"

#include "vdflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace vdflow {

double gamma_from_norms(double diff_sq, double prev_tilde_sq, double prev_recovered_sq,
                        double next_sq, double eps_den) {
    if (next_sq <= eps_den) return 1.0;
    return 1.0 + (diff_sq - prev_tilde_sq + prev_recovered_sq) / next_sq;
}

double lambda_from_mass(double mass, double sigma_sq_integral) {
    if (sigma_sq_integral <= 0.0)
        throw DegenerateDensityError("recover_density: integral of sigma^2 is not positive");
    return mass / sigma_sq_integral;
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// ||s1 u1 - s0 u0||_{L2}^2 with all four fields evaluated pointwise.
double product_diff_norm_sq(const FeFunction& s1, const FeFunction& u1, const FeFunction& s0,
                            const FeFunction& u0, const QuadratureRule& rule) {
    const Mesh& mesh = *s1.map->mesh;
    return integrate(mesh, rule, [&](int e, Vec2, const double* l) {
        const Vec2 d = s1.eval(e, l) * u1.eval_vec(e, l) - s0.eval(e, l) * u0.eval_vec(e, l);
        return d.dot(d);
    });
}

} // namespace

Simulation::Simulation(const CaseSetup& setup, const SchemeConfig& cfg)
    : case_(setup), cfg_(cfg), mesh_(setup.make_mesh()) {
    if (!(cfg_.mu > 0.0) || !(cfg_.tau > 0.0) || !(cfg_.T > 0.0))
        throw ConfigError("scheme: mu, tau, T must be positive");
    if (cfg_.tau > cfg_.T + 1e-15) throw ConfigError("scheme: tau must not exceed T");

    const auto problems = case_.self_check(mesh_);
    if (!problems.empty())
        throw ConfigError("case '" + case_.name + "' failed self-check: " + problems.front());

    w_space_ = build_dof_map(mesh_, SpaceKind::P2Scalar);
    v_space_ = build_dof_map(mesh_, SpaceKind::P2Vector2);
    p_space_ = build_dof_map(mesh_, SpaceKind::P1Scalar);
    rule_ = &quadrature_rule(cfg_.quadrature_degree);

    // The pressure gauge border applies only when every velocity condition is
    // Dirichlet; a do-nothing outlet already fixes the pressure level.
    attach_border_ = true;
    for (const auto& [tag, bc] : case_.bcs)
        if (bc.kind == BcKind::DoNothing) attach_border_ = false;

    // Initial data by projections: sigma = P sqrt(rho0), (u, p) by the Stokes
    // projection, lambda balancing the projected initial mass.
    state_.sigma = l2_project([this](Vec2 x) { return std::sqrt(case_.rho0(x)); }, w_space_, *rule_);

    const FeFunction rho_proj = l2_project(case_.rho0, w_space_, *rule_);
    const std::vector<double> unit_load = assemble_unit_load(w_space_, *rule_);
    mass_target_ = 0.0;
    for (int i = 0; i < w_space_.dof_count(); ++i) mass_target_ += unit_load[i] * rho_proj.coeffs[i];

    // The projection carries the trace of u0 itself (an empty map does that);
    // the time loop then imposes the boundary-condition table. Impulsive-start
    // cases pin the initial trace to zero on their Dirichlet tags instead.
    std::map<int, std::function<Vec2(Vec2)>> init_bc;
    if (case_.zero_initial_velocity_bc) {
        for (const auto& [tag, bc] : case_.bcs)
            if (bc.kind == BcKind::Dirichlet)
                init_bc[tag] = [](Vec2) { return Vec2{0.0, 0.0}; };
    }
    auto [u0h, p0h] = stokes_project(case_.u0, case_.u0_grad, case_.p0, v_space_, p_space_, *rule_,
                                     init_bc, attach_border_);
    state_.u = std::move(u0h);
    state_.p = std::move(p0h);
    state_.u_tilde = state_.u;

    state_.lambda = lambda_from_mass(mass_target_, l2_norm_sq(state_.sigma, *rule_));
    state_.gamma = 1.0;
    state_.n = 0;
    state_.t = 0.0;

    initial_energy_ = kinetic_energy(state_.sigma, state_.u, *rule_);
    energy_cache_ = initial_energy_;
    sigma_u_tilde_sq_cache_ = weighted_velocity_norm_sq(state_.sigma, state_.u_tilde, *rule_);
    eps_den_ = cfg_.eps_den >= 0.0
                   ? cfg_.eps_den
                   : 1e-28 * std::max(1.0, mass_target_) * std::max(1.0, mass_target_);
}

FeFunction Simulation::step_density(const FeFunction& u_drive, double tau) {
    DensitySystem sys = assemble_density_step(state_.sigma, u_drive, tau, *rule_);

    const double t_next = cfg_.tau * (state_.n + 1);
    for (const auto& [tag, bc] : case_.bcs) {
        if (!bc.has_sigma()) continue;
        const auto it = w_space_.boundary_scalar_dofs.find(tag);
        if (it == w_space_.boundary_scalar_dofs.end()) continue;
        for (int s : it->second) {
            sys.constrained_dofs.push_back(s);
            sys.constrained_values.push_back(bc.sigma(w_space_.dof_position(s), t_next));
        }
    }

    const ReducedSystem red =
        density_plan_.reduce(sys.triplets, sys.rhs, sys.constrained_dofs, sys.constrained_values);

    density_solver_.factorize(red.matrix);
    auto [xr, report] = density_solver_.solve(red.rhs);
    if (!report.factorization_ok || report.relative_residual > cfg_.solver_residual_bound)
        throw SolverError("density step: residual " + sci(report.relative_residual) +
                              " above bound " + sci(cfg_.solver_residual_bound),
                          state_.n + 1);

    FeFunction sigma_next(w_space_);
    sigma_next.coeffs = red.expand(xr);
    return sigma_next;
}

std::pair<FeFunction, FeFunction> Simulation::step_momentum(const FeFunction& sigma_next,
                                                            double tau) {
    const double t_next = cfg_.tau * (state_.n + 1);
    auto f = [this, t_next](Vec2 x) { return case_.forcing(x, t_next); };

    MomentumSystem sys =
        assemble_momentum_step(sigma_next, state_.sigma, state_.lambda, state_.u, state_.u_tilde,
                               cfg_.mu, tau, f, v_space_, p_space_, *rule_, attach_border_);

    std::map<int, std::function<Vec2(Vec2)>> bc_data;
    for (const auto& [tag, bc] : case_.bcs) {
        if (bc.kind != BcKind::Dirichlet) continue;
        auto g = bc.velocity;
        bc_data[tag] = [g, t_next](Vec2 x) { return g(x, t_next); };
    }
    collect_velocity_dirichlet(v_space_, bc_data, sys.dirichlet_dofs, sys.dirichlet_values);

    const ReducedSystem red =
        momentum_plan_.reduce(sys.matrix, sys.rhs, sys.dirichlet_dofs, sys.dirichlet_values);

    std::vector<double> xr;
    SolveReport report;
    if (sys.bordered) {
        std::vector<double> w_red(red.free_dofs.size(), 0.0);
        for (size_t i = 0; i < red.free_dofs.size(); ++i)
            w_red[i] = sys.border_weights[red.free_dofs[i]];
        bordered_momentum_solver_.factorize(red.matrix, w_red);
        BorderedSolver::Result result = bordered_momentum_solver_.solve(red.rhs);
        xr = std::move(result.x);
        report = result.report;
    } else {
        momentum_solver_.factorize(red.matrix);
        std::tie(xr, report) = momentum_solver_.solve(red.rhs);
    }
    if (!report.factorization_ok || report.relative_residual > cfg_.solver_residual_bound)
        throw SolverError("momentum step: residual " + sci(report.relative_residual) +
                              " above bound " + sci(cfg_.solver_residual_bound),
                          state_.n + 1);
    const std::vector<double> x = red.expand(xr);

    FeFunction u_tilde_next(v_space_), p_next(p_space_);
    std::copy(x.begin(), x.begin() + v_space_.dof_count(), u_tilde_next.coeffs.begin());
    std::copy(x.begin() + v_space_.dof_count(),
              x.begin() + v_space_.dof_count() + p_space_.dof_count(), p_next.coeffs.begin());
    return {std::move(u_tilde_next), std::move(p_next)};
}

std::pair<double, FeFunction> Simulation::recover_velocity(const FeFunction& sigma_next,
                                                           const FeFunction& u_tilde_next) const {
    const double next_sq = weighted_velocity_norm_sq(sigma_next, u_tilde_next, *rule_);
    const double diff_sq =
        product_diff_norm_sq(sigma_next, u_tilde_next, state_.sigma, state_.u_tilde, *rule_);
    const double prev_tilde_sq = weighted_velocity_norm_sq(state_.sigma, state_.u_tilde, *rule_);
    const double prev_rec_sq = weighted_velocity_norm_sq(state_.sigma, state_.u, *rule_);

    const double gamma = gamma_from_norms(diff_sq, prev_tilde_sq, prev_rec_sq, next_sq, eps_den_);
    if (gamma <= 0.0)
        throw PropertyViolation("recover_velocity: gamma = " + sci(gamma) +
                                    " is not positive (solver or assembly defect)",
                                state_.n + 1);
    FeFunction u_next = u_tilde_next;
    const double scale = std::sqrt(gamma);
    for (double& c : u_next.coeffs) c *= scale;
    return {gamma, std::move(u_next)};
}

double Simulation::recover_density(const FeFunction& sigma_next) const {
    return lambda_from_mass(mass_target_, l2_norm_sq(sigma_next, *rule_));
}

StepDiagnostics Simulation::advance() {
    const double tau = cfg_.tau;
    const double energy_prev = energy_cache_;

    FeFunction sigma_next = step_density(state_.u, tau);
    auto [u_tilde_next, p_next] = step_momentum(sigma_next, tau);

    // Step 3 with the previous step's norms reused; the cached values are the
    // same quadrature sums recover_velocity() would recompute.
    const double next_sq = weighted_velocity_norm_sq(sigma_next, u_tilde_next, *rule_);
    const double diff_sq =
        product_diff_norm_sq(sigma_next, u_tilde_next, state_.sigma, state_.u_tilde, *rule_);
    const double gamma =
        gamma_from_norms(diff_sq, sigma_u_tilde_sq_cache_, 2.0 * energy_cache_, next_sq, eps_den_);
    if (gamma <= 0.0)
        throw PropertyViolation("recover_velocity: gamma = " + sci(gamma) +
                                    " is not positive (solver or assembly defect)",
                                state_.n + 1);
    FeFunction u_next = u_tilde_next;
    const double vel_scale = std::sqrt(gamma);
    for (double& c : u_next.coeffs) c *= vel_scale;

    if (cfg_.debug_break_gamma_step >= 0 && state_.n + 1 == cfg_.debug_break_gamma_step)
        throw PropertyViolation("recover_velocity: gamma forced nonpositive by test hook",
                                state_.n + 1);
    const double sigma_sq_integral = l2_norm_sq(sigma_next, *rule_);
    const double lambda_next = lambda_from_mass(mass_target_, sigma_sq_integral);

    state_.sigma = std::move(sigma_next);
    state_.u_tilde = std::move(u_tilde_next);
    state_.u = std::move(u_next);
    state_.p = std::move(p_next);
    state_.gamma = gamma;
    state_.lambda = lambda_next;
    state_.n += 1;
    state_.t = tau * state_.n;

    StepDiagnostics diag;
    diag.step = state_.n;
    diag.t = state_.t;
    diag.mass = state_.lambda * sigma_sq_integral;
    diag.energy = kinetic_energy(state_.sigma, state_.u, *rule_);
    energy_cache_ = diag.energy;
    sigma_u_tilde_sq_cache_ = next_sq;
    diag.min_density = min_density_sample(state_.lambda, state_.sigma, *rule_);
    diag.gamma = state_.gamma;
    diag.lambda = state_.lambda;
    diag.grad_norm = h1_semi_norm_sq(state_.u_tilde, *rule_);
    const double f_inner = case_.zero_forcing
                               ? 0.0
                               : forcing_inner(case_.forcing, state_.t, state_.u_tilde, *rule_);
    diag.energy_residual =
        energy_identity_residual(energy_prev, diag.energy, diag.grad_norm, f_inner, cfg_.mu, tau);

    check_properties(diag);
    return diag;
}

void Simulation::check_properties(StepDiagnostics& diag) const {
    auto fail = [&](const std::string& msg) {
        if (cfg_.strict) throw PropertyViolation(msg, diag.step);
        diag.violations.push_back(msg);
    };

    if (diag.min_density < 0.0)
        fail("negative density sample " + sci(diag.min_density));
    if (std::abs(diag.mass - mass_target_) > 1e-10 * std::abs(mass_target_))
        fail("mass drift " + sci(diag.mass - mass_target_) + " beyond 1e-10 relative");
    if (diag.gamma < 1.0 - 1e-10)
        fail("gamma " + sci(diag.gamma) + " below 1");
    if (case_.homogeneous_velocity_bc) {
        const double tol = 1e-8 * std::max(1.0, initial_energy_ / cfg_.tau);
        if (std::abs(diag.energy_residual) > tol)
            fail("energy identity residual " + sci(diag.energy_residual) + " beyond " + sci(tol));
    }
}

StepDiagnostics Simulation::initial_diagnostics() const {
    StepDiagnostics diag;
    diag.step = 0;
    diag.t = 0.0;
    diag.mass = total_mass(state_.lambda, state_.sigma, *rule_);
    diag.energy = initial_energy_;
    diag.min_density = min_density_sample(state_.lambda, state_.sigma, *rule_);
    diag.gamma = 1.0;
    diag.lambda = state_.lambda;
    diag.energy_residual = 0.0;
    diag.grad_norm = h1_semi_norm_sq(state_.u_tilde, *rule_);
    return diag;
}

RunResult Simulation::run(const Sinks& sinks) {
    const double steps_exact = cfg_.T / cfg_.tau;
    const long n_steps = std::lround(steps_exact);
    if (std::abs(steps_exact - static_cast<double>(n_steps)) >
        1e-12 * std::max(1.0, steps_exact))
        std::cerr << "scheme: tau does not divide T; running " << n_steps << " steps to t = "
                  << n_steps * cfg_.tau << "\n";

    RunResult result;
    StepDiagnostics first = initial_diagnostics();
    result.series.push_back(first);
    if (sinks.on_diagnostics) sinks.on_diagnostics(first);
    if (sinks.on_snapshot && cfg_.snapshot_stride > 0) sinks.on_snapshot(state_);

    for (long k = 0; k < n_steps; ++k) {
        StepDiagnostics diag = advance();
        if (!diag.violations.empty()) result.property_violation = true;
        result.series.push_back(diag);
        if (sinks.on_diagnostics) sinks.on_diagnostics(diag);
        const bool due = cfg_.snapshot_stride > 0 &&
                         (state_.n % cfg_.snapshot_stride == 0 || k + 1 == n_steps);
        if (sinks.on_snapshot && due) sinks.on_snapshot(state_);
    }
    return result;
}

} // namespace vdflow
