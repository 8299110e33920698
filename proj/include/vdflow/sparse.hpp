#pragma once

#include <memory>
#include <string>
#include <vector>

namespace vdflow {

struct Triplet {
    int row;
    int col;
    double value;
};

struct TripletBuffer {
    int rows = 0;
    int cols = 0;
    std::vector<Triplet> entries;

    TripletBuffer() = default;
    TripletBuffer(int r, int c) : rows(r), cols(c) {}

    void add(int r, int c, double v) { entries.push_back({r, c, v}); }
    void reserve(size_t n) { entries.reserve(n); }
};

// Compressed sparse row storage: per-row columns strictly increasing,
// duplicate triplets summed on conversion. Immutable once built.
struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_offsets; // size rows+1
    std::vector<int> col_indices;
    std::vector<double> values;

    size_t nnz() const { return values.size(); }
    double max_abs() const;
    CsrMatrix transposed() const;
};

CsrMatrix csr_from_triplets(const TripletBuffer& t);

std::vector<double> spmv(const CsrMatrix& a, const std::vector<double>& x);

struct SolveReport {
    double relative_residual = 0.0; // ||Ax-b|| / ||b||, 2-norms
    bool factorization_ok = false;
    // Backward-error based growth indicator ||Ax-b||_inf / (||A||_inf ||x||_inf
    // + ||b||_inf); near machine epsilon for a stable factorization.
    double pivot_growth = 0.0;
    std::string detail;
};

// Sparse LU with partial pivoting and a fill-reducing ordering. Deterministic
// and single-threaded. A failed factorization is retried once with a second
// ordering before SingularMatrixError is thrown. Solves run one or two steps
// of iterative refinement when the first residual is above roundoff.
std::pair<std::vector<double>, SolveReport> solve_direct(const CsrMatrix& a,
                                                         const std::vector<double>& b);

// Same solver with the symbolic analysis cached, for time loops that
// refactorize matrices of identical sparsity every step.
class DirectSolver {
public:
    DirectSolver();
    ~DirectSolver();
    DirectSolver(DirectSolver&&) noexcept;
    DirectSolver& operator=(DirectSolver&&) noexcept;

    void factorize(const CsrMatrix& a); // reuses the analysis when the pattern repeats
    std::pair<std::vector<double>, SolveReport> solve(const std::vector<double>& b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Solves the bordered system
//   [A  w] [x]   [b]
//   [w^T 0] [m] = [g]
// without factorizing the dense-bordered matrix: A is pinned at one dof
// (A + alpha e_k e_k^T, which is nonsingular when A's nullspace is the
// constant-pressure mode) and the bordered solution is recovered from
// cached sparse solves plus a 2x2 system. The report's residual is measured
// against the bordered system itself.
class BorderedSolver {
public:
    void factorize(const CsrMatrix& a, const std::vector<double>& w);

    struct Result {
        std::vector<double> x;
        double multiplier = 0.0;
        SolveReport report;
    };
    Result solve(const std::vector<double>& b, double g = 0.0) const;

private:
    Result solve_once(const std::vector<double>& b, double g) const;

    DirectSolver inner_;
    CsrMatrix a_;
    std::vector<double> w_;
    std::vector<double> v_, z_; // cached pinned-inverse images of w and e_pin
    int pin_ = -1;
    double alpha_ = 1.0;
};

// Appends one Lagrange-multiplier row/column enforcing sum_i weights[i] *
// x[dofs[i]] = 0; used to pin the pressure gauge without distorting the
// mean-zero space.
std::pair<CsrMatrix, std::vector<double>> augment_mean_zero(const CsrMatrix& a,
                                                            const std::vector<double>& b,
                                                            const std::vector<int>& dofs,
                                                            const std::vector<double>& weights);

} // namespace vdflow
