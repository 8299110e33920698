#pragma once

#include "vdflow/assembly.hpp"
#include "vdflow/cases.hpp"
#include "vdflow/diagnostics.hpp"
#include "vdflow/fem.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace vdflow {

struct SchemeConfig {
    double mu = 1.0;
    double tau = 0.01;
    double T = 1.0;
    // The convection integrand carries the pointwise density lambda*sigma^2
    // (quartic per element), so exactness up to degree 9 is what closes the
    // discrete energy identity at roundoff.
    int quadrature_degree = 9;
    double solver_residual_bound = 1e-12;
    double eps_den = -1.0; // gamma-branch threshold; < 0 picks 1e-28 * max(1, mass)^2
    int snapshot_stride = 0;
    bool strict = true;
    int debug_break_gamma_step = -1; // test hook: forces gamma <= 0 at this step
};

// Fields of one time level.
struct SchemeState {
    int n = 0;
    double t = 0.0;
    FeFunction sigma;   // W_h, sqrt-density
    double lambda = 1.0;
    FeFunction u_tilde; // V_h, pre-recovery velocity
    FeFunction u;       // V_h, recovered velocity
    FeFunction p;       // M_h
    double gamma = 1.0;
};

// Density as the scaled square lambda * sigma(x)^2, nonnegative at every
// evaluation point by construction. Never projected back into W_h.
struct CompositeDensity {
    double lambda = 1.0;
    const FeFunction* sigma = nullptr;
};

// Velocity recovery factor. With d = ||s1 u1 - s0 u0||^2,
// a = ||s0 u0_tilde||^2, b = ||s0 u0||^2, n = ||s1 u1||^2:
//   gamma = 1 + (d - a + b) / n   (or 1 when n <= eps_den).
double gamma_from_norms(double diff_sq, double prev_tilde_sq, double prev_recovered_sq,
                        double next_sq, double eps_den);

// Density recovery factor lambda = mass / integral(sigma^2); throws
// DegenerateDensityError when the denominator vanishes.
double lambda_from_mass(double mass, double sigma_sq_integral);

struct RunResult {
    std::vector<StepDiagnostics> series;
    bool property_violation = false;
};

class Simulation {
public:
    Simulation(const CaseSetup& setup, const SchemeConfig& cfg);

    const SchemeState& state() const { return state_; }
    const Mesh& mesh() const { return mesh_; }
    const DofMap& sigma_space() const { return w_space_; }
    const DofMap& velocity_space() const { return v_space_; }
    const DofMap& pressure_space() const { return p_space_; }
    const QuadratureRule& rule() const { return *rule_; }
    const CaseSetup& setup() const { return case_; }
    const SchemeConfig& config() const { return cfg_; }

    double mass_target() const { return mass_target_; }
    double initial_energy() const { return initial_energy_; }
    double eps_den() const { return eps_den_; }

    // One full step 1 -> 2 -> 3 -> 4; updates the state and returns the step
    // diagnostics. In strict mode a violated property throws.
    StepDiagnostics advance();

    struct Sinks {
        std::function<void(const StepDiagnostics&)> on_diagnostics;
        std::function<void(const SchemeState&)> on_snapshot;
    };

    // N = round(T / tau) advances with a diagnostics row for t = 0 included.
    RunResult run(const Sinks& sinks = {});

    // The individual steps, exposed for verification.
    FeFunction step_density(const FeFunction& u_drive, double tau);
    std::pair<FeFunction, FeFunction> step_momentum(const FeFunction& sigma_next, double tau);
    std::pair<double, FeFunction> recover_velocity(const FeFunction& sigma_next,
                                                   const FeFunction& u_tilde_next) const;
    double recover_density(const FeFunction& sigma_next) const;

    StepDiagnostics initial_diagnostics() const;

private:
    void check_properties(StepDiagnostics& diag) const;

    CaseSetup case_;
    SchemeConfig cfg_;
    Mesh mesh_;
    DofMap w_space_, v_space_, p_space_;
    const QuadratureRule* rule_;
    bool attach_border_ = true;

    SchemeState state_;
    double mass_target_ = 0.0;
    double initial_energy_ = 0.0;
    double eps_den_ = 0.0;

    // Norms carried from the previous step; bit-identical to recomputing
    // them, they just save two mesh passes per advance.
    double energy_cache_ = 0.0;
    double sigma_u_tilde_sq_cache_ = 0.0;

    DirectSolver density_solver_, momentum_solver_;
    BorderedSolver bordered_momentum_solver_;
    ReductionPlan density_plan_, momentum_plan_;
};

} // namespace vdflow
