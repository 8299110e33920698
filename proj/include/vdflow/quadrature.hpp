#pragma once

#include <vector>

namespace vdflow {

struct QuadPoint {
    double l0, l1, l2; // barycentric coordinates
    double w;          // reference-area weight
};

// Symmetric positive-weight rule on the reference triangle. Weights sum to
// 1/2 and the rule integrates every bivariate monomial of total degree up to
// `degree` exactly.
struct QuadratureRule {
    int degree = 0;
    std::vector<QuadPoint> points;
};

// Dunavant-style tables exist for degrees {1,2,4,5,6,8,9,10}; the remaining
// requests are served by the next table up (still exact, still positive).
// Throws UnsupportedDegreeError outside [1, 10].
const QuadratureRule& quadrature_rule(int degree);

inline constexpr int kMaxQuadratureDegree = 10;

} // namespace vdflow
