#pragma once

#include "vdflow/fem.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vdflow {

struct StepDiagnostics {
    int step = 0;
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;      // E = 1/2 ||sigma u||^2
    double min_density = 0.0; // min over quadrature points and P2 nodes
    double gamma = 1.0;
    double lambda = 1.0;
    double energy_residual = 0.0;
    double grad_norm = 0.0;   // ||grad u_tilde||^2
    std::vector<std::string> violations;
};

struct ErrorRecord {
    double h = 0.0;
    double tau = 0.0;
    double err_u = 0.0;
    double err_rho = 0.0;
    double err_p = 0.0;
};

double total_mass(double lambda, const FeFunction& sigma, const QuadratureRule& rule);

double kinetic_energy(const FeFunction& sigma, const FeFunction& u, const QuadratureRule& rule);

// (E_next - E_prev)/tau + mu ||grad u_tilde_next||^2 - (f_next, u_tilde_next),
// every term by the assembly quadrature. Zero up to solver residual and
// roundoff for homogeneous Dirichlet data.
double energy_identity_residual(double energy_prev, double energy_next,
                                double grad_norm_sq_next, double forcing_inner_next,
                                double mu, double tau);

// Quadrature value of (f(., t), u).
double forcing_inner(const std::function<Vec2(Vec2, double)>& f, double t, const FeFunction& u,
                     const QuadratureRule& rule);

double min_density_sample(double lambda, const FeFunction& sigma, const QuadratureRule& rule);

struct ExactFields {
    std::function<double(Vec2)> rho;
    std::function<Vec2(Vec2)> u;
    std::function<double(Vec2)> p;
};

// L2 errors against exact fields at one time; the pressure error is computed
// after removing the discrete mean of (p_exact - p_h).
ErrorRecord error_norms(double lambda, const FeFunction& sigma, const FeFunction& u,
                        const FeFunction& p, const ExactFields& exact, double h, double tau,
                        const QuadratureRule& rule);

struct ConvergenceOrders {
    std::vector<double> order_u, order_rho, order_p; // size records-1
};

// order_i = log2(err_i / err_{i+1}); requires tau halving between records.
ConvergenceOrders convergence_orders(const std::vector<ErrorRecord>& records);

} // namespace vdflow
