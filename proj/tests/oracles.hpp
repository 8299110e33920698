#pragma once

// Test-side oracles, kept independent of the library paths they check:
// exact monomial moments, a conical-product Gauss rule on the reference
// triangle, dense Gaussian elimination with partial pivoting, and explicit
// P1/P2 basis formulas for brute-force element integrals.

#include "vdflow/geometry.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// integral over the reference triangle of x^a y^b
inline double monomial_moment(int a, int b) {
    return factorial(a) * factorial(b) / factorial(a + b + 2);
}

// Gauss-Legendre nodes/weights on [0,1], Newton iteration on P_n.
inline std::vector<std::pair<double, double>> gauss_legendre01(int n) {
    std::vector<std::pair<double, double>> out(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5)); // on [-1,1]
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = {0.5 * (x + 1.0), 0.5 * w};
    }
    return out;
}

struct TriPoint {
    double x, y, w; // reference-triangle coordinates and weight
};

// Conical-product rule on {x,y >= 0, x+y <= 1}: square-to-triangle map
// (u, v) -> (u, v(1-u)) with the Jacobian (1-u) folded into the weights.
// Exact for total degree <= 2n-2 in the worst direction; pick n generously.
inline std::vector<TriPoint> conical_rule(int degree) {
    const int n = degree / 2 + 2;
    const auto gl = gauss_legendre01(n);
    std::vector<TriPoint> pts;
    pts.reserve(n * n);
    for (const auto& [u, wu] : gl)
        for (const auto& [v, wv] : gl)
            pts.push_back({u, v * (1.0 - u), wu * wv * (1.0 - u)});
    return pts;
}

// Dense Gaussian elimination with partial pivoting; a is row-major n x n.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
        if (a[piv * n + k] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i * n + k] / a[k * n + k];
            a[i * n + k] = 0.0;
            for (int j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
        x[i] = s / a[i * n + i];
    }
    return x;
}

// Explicit Lagrange formulas in barycentric coordinates (independent of the
// library implementation).
inline std::array<double, 6> p2_basis(double l0, double l1, double l2) {
    return {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
            4 * l0 * l1, 4 * l1 * l2, 4 * l2 * l0};
}

inline std::array<double, 3> p1_basis(double l0, double l1, double l2) {
    return {l0, l1, l2};
}

// Brute-force element integral of f over the physical triangle (v0, v1, v2);
// f receives barycentric coordinates and the physical point.
inline double element_integral(const vdflow::Vec2& v0, const vdflow::Vec2& v1,
                               const vdflow::Vec2& v2, int degree,
                               const std::function<double(double, double, double, vdflow::Vec2)>& f) {
    const double det = (v1.x - v0.x) * (v2.y - v0.y) - (v2.x - v0.x) * (v1.y - v0.y);
    double total = 0.0;
    for (const auto& qp : conical_rule(degree)) {
        const double l1 = qp.x, l2 = qp.y, l0 = 1.0 - qp.x - qp.y;
        const vdflow::Vec2 x{v0.x + l1 * (v1.x - v0.x) + l2 * (v2.x - v0.x),
                             v0.y + l1 * (v1.y - v0.y) + l2 * (v2.y - v0.y)};
        total += qp.w * f(l0, l1, l2, x);
    }
    return total * det;
}

} // namespace oracle
