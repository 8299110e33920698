#include "vdflow/diagnostics.hpp"

#include "vdflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vdflow {

double total_mass(double lambda, const FeFunction& sigma, const QuadratureRule& rule) {
    return lambda * l2_norm_sq(sigma, rule);
}

double kinetic_energy(const FeFunction& sigma, const FeFunction& u, const QuadratureRule& rule) {
    return 0.5 * weighted_velocity_norm_sq(sigma, u, rule);
}

double energy_identity_residual(double energy_prev, double energy_next,
                                double grad_norm_sq_next, double forcing_inner_next,
                                double mu, double tau) {
    return (energy_next - energy_prev) / tau + mu * grad_norm_sq_next - forcing_inner_next;
}

double forcing_inner(const std::function<Vec2(Vec2, double)>& f, double t, const FeFunction& u,
                     const QuadratureRule& rule) {
    const Mesh& mesh = *u.map->mesh;
    return integrate(mesh, rule, [&](int e, Vec2 x, const double* l) {
        return f(x, t).dot(u.eval_vec(e, l));
    });
}

double min_density_sample(double lambda, const FeFunction& sigma, const QuadratureRule& rule) {
    const Mesh& mesh = *sigma.map->mesh;
    double min_sq = std::numeric_limits<double>::infinity();
    for (int e = 0; e < mesh.element_count(); ++e) {
        for (const auto& qp : rule.points) {
            const double l[3] = {qp.l0, qp.l1, qp.l2};
            const double s = sigma.eval(e, l);
            min_sq = std::min(min_sq, s * s);
        }
    }
    for (double c : sigma.coeffs) min_sq = std::min(min_sq, c * c);
    return lambda * min_sq;
}

ErrorRecord error_norms(double lambda, const FeFunction& sigma, const FeFunction& u,
                        const FeFunction& p, const ExactFields& exact, double h, double tau,
                        const QuadratureRule& rule) {
    const Mesh& mesh = *sigma.map->mesh;
    ErrorRecord rec;
    rec.h = h;
    rec.tau = tau;

    rec.err_u = std::sqrt(integrate(mesh, rule, [&](int e, Vec2 x, const double* l) {
        const Vec2 d = exact.u(x) - u.eval_vec(e, l);
        return d.dot(d);
    }));
    rec.err_rho = std::sqrt(integrate(mesh, rule, [&](int e, Vec2 x, const double* l) {
        const double s = sigma.eval(e, l);
        const double d = exact.rho(x) - lambda * s * s;
        return d * d;
    }));

    const double area = mesh.total_area();
    const double mean = integrate(mesh, rule, [&](int e, Vec2 x, const double* l) {
                            return exact.p(x) - p.eval(e, l);
                        }) / area;
    rec.err_p = std::sqrt(integrate(mesh, rule, [&](int e, Vec2 x, const double* l) {
        const double d = exact.p(x) - p.eval(e, l) - mean;
        return d * d;
    }));
    return rec;
}

ConvergenceOrders convergence_orders(const std::vector<ErrorRecord>& records) {
    if (records.size() < 2)
        throw InputError("convergence_orders: need at least two records");
    for (size_t i = 0; i + 1 < records.size(); ++i) {
        const double ratio = records[i].tau / records[i + 1].tau;
        if (std::abs(ratio - 2.0) > 1e-9)
            throw InputError("convergence_orders: tau sequence must halve between records");
    }
    ConvergenceOrders out;
    for (size_t i = 0; i + 1 < records.size(); ++i) {
        out.order_u.push_back(std::log2(records[i].err_u / records[i + 1].err_u));
        out.order_rho.push_back(std::log2(records[i].err_rho / records[i + 1].err_rho));
        out.order_p.push_back(std::log2(records[i].err_p / records[i + 1].err_p));
    }
    return out;
}

} // namespace vdflow
