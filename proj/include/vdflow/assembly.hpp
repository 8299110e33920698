#pragma once

#include "vdflow/fem.hpp"
#include "vdflow/sparse.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>

namespace vdflow {

// Pointwise scalar weight evaluated at quadrature points.
using QuadWeight = std::function<double(int elem, Vec2 x, const double* l)>;

// Mass matrix (w phi_j, phi_i); block-diagonal over components for vector
// spaces. Symmetric positive semidefinite, definite for positive weights.
CsrMatrix assemble_mass(const DofMap& space, const QuadratureRule& rule,
                        const QuadWeight& weight = {});

// Stiffness matrix (grad phi_j, grad phi_i), block-diagonal for vector spaces.
CsrMatrix assemble_stiffness(const DofMap& space, const QuadratureRule& rule);

// Load vector of the constant 1: w_i = integral phi_i. Row of discrete
// integrals used for the pressure mean-zero border.
std::vector<double> assemble_unit_load(const DofMap& space, const QuadratureRule& rule);

// Scalar transport operator C_ij = (u . grad phi_j, phi_i)
//                                + 1/2 (phi_j div u, phi_i).
// The half-divergence term makes C + C^T a pure boundary-flux matrix.
CsrMatrix assemble_scalar_convection(const DofMap& space, const FeFunction& u,
                                     const QuadratureRule& rule);

// Step 1 system: matrix = M/tau + C(u), rhs = M sigma_prev / tau (realized as
// (sigma_prev, phi)/tau at quadrature points). Constraint slots are filled by
// the caller when an inflow pins sigma.
struct DensitySystem {
    CsrMatrix matrix;
    TripletBuffer triplets; // same operator, kept for cached elimination
    std::vector<double> rhs;
    std::vector<int> constrained_dofs;
    std::vector<double> constrained_values;
};

DensitySystem assemble_density_step(const FeFunction& sigma_prev, const FeFunction& u_curr,
                                    double tau, const QuadratureRule& rule);

// Step 2 saddle-point system over (velocity dofs, pressure dofs, optional
// mean-zero multiplier). Velocity block:
//   (1/tau) M[(sigma_next)^2] + mu K + N(rho_prev, u_prev),
//   N_ij = (rho (u.grad) phi_j, phi_i) + 1/2 (phi_j div(rho u), phi_i),
// with rho = lambda_prev * sigma_prev^2 evaluated pointwise. Pressure
// coupling uses one divergence block and its exact transpose. RHS:
//   (1/tau)(sigma_next sigma_prev u_tilde_prev, v) + (f, v).
struct MomentumSystem {
    TripletBuffer matrix; // (n_v + n_p) square, border kept separate
    std::vector<double> rhs;
    int n_v = 0;
    int n_p = 0;
    bool bordered = false;
    // Multiplier row/column of the mean-zero border: integral of each
    // pressure basis function, zero on velocity dofs. Empty when unbordered.
    std::vector<double> border_weights;
    std::vector<int> dirichlet_dofs; // velocity dofs, filled by the caller
    std::vector<double> dirichlet_values;
};

MomentumSystem assemble_momentum_step(const FeFunction& sigma_next, const FeFunction& sigma_prev,
                                      double lambda_prev, const FeFunction& u_prev,
                                      const FeFunction& u_tilde_prev, double mu, double tau,
                                      const std::function<Vec2(Vec2)>& forcing,
                                      const DofMap& vmap, const DofMap& pmap,
                                      const QuadratureRule& rule, bool attach_border);

// Dirichlet handling by true elimination: constrained unknowns leave the
// system, their contribution moves to the right-hand side, and the reduced
// matrix is exactly the Galerkin operator on the complementary test space.
struct ReducedSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    std::vector<int> free_dofs;                // reduced index -> full index
    std::vector<int> full_to_reduced;          // -1 where constrained
    std::vector<int> constrained_dofs;
    std::vector<double> constrained_values;

    std::vector<double> expand(const std::vector<double>& reduced) const;
};

ReducedSystem apply_dirichlet(const TripletBuffer& a, const std::vector<double>& rhs,
                              const std::vector<int>& dofs, const std::vector<double>& values);

// apply_dirichlet with the symbolic part cached: time loops reassemble
// systems with an identical triplet layout every step, so the slot of each
// triplet in the reduced matrix is computed once and then reused. The layout
// is verified entry by entry on reuse; any mismatch rebuilds the plan.
class ReductionPlan {
public:
    ReducedSystem reduce(const TripletBuffer& a, const std::vector<double>& rhs,
                         const std::vector<int>& dofs, const std::vector<double>& values);

private:
    bool valid_ = false;
    std::vector<long long> layout_; // packed (row, col) per triplet
    std::vector<int> slot_;         // reduced-nnz slot, or -1 when dropped
    struct RhsContribution {
        int triplet;
        int reduced_row;
        int constraint;
    };
    std::vector<RhsContribution> rhs_contribs_;
    std::vector<int> constrained_dofs_;
    CsrMatrix pattern_;
    std::vector<int> free_dofs_, full_to_reduced_;
};

// L2 projection into a scalar space: (P f - f, r) = 0 for all r.
FeFunction l2_project(const std::function<double(Vec2)>& field, const DofMap& space,
                      const QuadratureRule& rule);

// Discrete Stokes projection (R u, Q p) of a velocity/pressure pair:
//   (grad(R u - u), grad v) - (div v, Q p - p) = 0,
//   (div(R u - u), q) = 0.
// An empty `dirichlet_data` imposes the trace of u on every tag; otherwise
// the map gives the boundary values per tag and tags absent from it keep
// natural rows. The optional border pins integral(Q p) = integral(p).
std::pair<FeFunction, FeFunction> stokes_project(
    const std::function<Vec2(Vec2)>& u, const std::function<Mat2(Vec2)>& grad_u,
    const std::function<double(Vec2)>& p, const DofMap& vmap, const DofMap& pmap,
    const QuadratureRule& rule,
    const std::map<int, std::function<Vec2(Vec2)>>& dirichlet_data, bool attach_border);

// Velocity Dirichlet dof/value lists for a set of tagged boundary conditions.
void collect_velocity_dirichlet(const DofMap& vmap,
                                const std::map<int, std::function<Vec2(Vec2)>>& data,
                                std::vector<int>& dofs, std::vector<double>& values);

} // namespace vdflow
