#include "vdflow/sparse.hpp"

#include "vdflow/errors.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace vdflow {

namespace {

// UMFPACK calls into BLAS; cap it at one thread so repeated runs stay
// bitwise identical regardless of the ambient thread setup.
const bool kBlasSingleThread = [] {
    setenv("OPENBLAS_NUM_THREADS", "1", 0);
    setenv("OMP_NUM_THREADS", "1", 0);
    return true;
}();

} // namespace

double CsrMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

CsrMatrix CsrMatrix::transposed() const {
    TripletBuffer t(cols, rows);
    t.reserve(nnz());
    for (int r = 0; r < rows; ++r)
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            t.add(col_indices[k], r, values[k]);
    return csr_from_triplets(t);
}

CsrMatrix csr_from_triplets(const TripletBuffer& t) {
    for (const auto& e : t.entries)
        if (e.row < 0 || e.row >= t.rows || e.col < 0 || e.col >= t.cols)
            throw InputError("csr_from_triplets: index (" + std::to_string(e.row) + "," +
                             std::to_string(e.col) + ") outside " + std::to_string(t.rows) +
                             "x" + std::to_string(t.cols));

    CsrMatrix a;
    a.rows = t.rows;
    a.cols = t.cols;
    a.row_offsets.assign(t.rows + 1, 0);

    // Counting sort by row, then sort and merge columns within each row.
    std::vector<int> count(t.rows, 0);
    for (const auto& e : t.entries) count[e.row]++;
    std::vector<int> start(t.rows + 1, 0);
    std::partial_sum(count.begin(), count.end(), start.begin() + 1);

    std::vector<std::pair<int, double>> slot(t.entries.size());
    {
        std::vector<int> cursor(start.begin(), start.end() - 1);
        for (const auto& e : t.entries) slot[cursor[e.row]++] = {e.col, e.value};
    }

    a.col_indices.reserve(t.entries.size());
    a.values.reserve(t.entries.size());
    for (int r = 0; r < t.rows; ++r) {
        const auto first = slot.begin() + start[r];
        const auto last = slot.begin() + start[r + 1];
        std::sort(first, last, [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto it = first; it != last;) {
            const int col = it->first;
            double sum = 0.0;
            for (; it != last && it->first == col; ++it) sum += it->second;
            a.col_indices.push_back(col);
            a.values.push_back(sum);
        }
        a.row_offsets[r + 1] = static_cast<int>(a.col_indices.size());
    }
    return a;
}

std::vector<double> spmv(const CsrMatrix& a, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != a.cols)
        throw InputError("spmv: dimension mismatch (" + std::to_string(a.cols) + " columns vs " +
                         std::to_string(x.size()) + " vector entries)");
    std::vector<double> y(a.rows, 0.0);
    for (int r = 0; r < a.rows; ++r) {
        double s = 0.0;
        for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
            s += a.values[k] * x[a.col_indices[k]];
        y[r] = s;
    }
    return y;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>; // column-major

SpMat to_eigen(const CsrMatrix& a) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(a.nnz());
    for (int r = 0; r < a.rows; ++r)
        for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
            t.emplace_back(r, a.col_indices[k], a.values[k]);
    SpMat m(a.rows, a.cols);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

int find_suspicious_index(const CsrMatrix& a) {
    // Best-effort pivot diagnosis: first row or column with no nonzero entry.
    std::vector<char> col_used(a.cols, 0);
    for (int r = 0; r < a.rows; ++r) {
        bool any = false;
        for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
            if (a.values[k] != 0.0) {
                any = true;
                col_used[a.col_indices[k]] = 1;
            }
        if (!any) return r;
    }
    for (int c = 0; c < a.cols; ++c)
        if (!col_used[c]) return c;
    return -1;
}

SolveReport make_report(const CsrMatrix& a, const std::vector<double>& b,
                        const std::vector<double>& x) {
    SolveReport rep;
    rep.factorization_ok = true;
    const std::vector<double> r = spmv(a, x);
    double rn2 = 0.0, bn2 = 0.0, rinf = 0.0, xinf = 0.0, binf = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
        const double ri = r[i] - b[i];
        rn2 += ri * ri;
        bn2 += b[i] * b[i];
        rinf = std::max(rinf, std::abs(ri));
        binf = std::max(binf, std::abs(b[i]));
    }
    for (double v : x) xinf = std::max(xinf, std::abs(v));
    double ainf = 0.0;
    for (int row = 0; row < a.rows; ++row) {
        double s = 0.0;
        for (int k = a.row_offsets[row]; k < a.row_offsets[row + 1]; ++k)
            s += std::abs(a.values[k]);
        ainf = std::max(ainf, s);
    }
    rep.relative_residual = bn2 > 0.0 ? std::sqrt(rn2 / bn2) : std::sqrt(rn2);
    const double denom = ainf * xinf + binf;
    rep.pivot_growth = denom > 0.0 ? rinf / denom : 0.0;
    return rep;
}

} // namespace

struct DirectSolver::Impl {
    Eigen::UmfPackLU<SpMat> umf;
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> fallback;
    CsrMatrix matrix;
    SpMat eigen_matrix;
    bool analyzed = false;
    bool use_fallback = false;
    std::vector<int> pattern_offsets, pattern_cols;
};

DirectSolver::DirectSolver() : impl_(std::make_unique<Impl>()) {}
DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

void DirectSolver::factorize(const CsrMatrix& a) {
    if (a.rows != a.cols) throw InputError("DirectSolver: matrix must be square");
    Impl& im = *impl_;
    im.matrix = a;
    im.eigen_matrix = to_eigen(a);

    const bool same_pattern = im.analyzed && im.pattern_offsets == a.row_offsets &&
                              im.pattern_cols == a.col_indices;
    if (!same_pattern) {
        // Assembled FEM patterns are structurally symmetric; AMD on A + A^T
        // gives far less fill than the unsymmetric default on saddle systems.
        im.umf.umfpackControl()[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
        im.umf.analyzePattern(im.eigen_matrix);
        im.pattern_offsets = a.row_offsets;
        im.pattern_cols = a.col_indices;
        im.analyzed = true;
        im.use_fallback = false;
    }
    if (!im.use_fallback) {
        im.umf.factorize(im.eigen_matrix);
        if (im.umf.info() == Eigen::Success) return;
    }
    // One retry with a different ordering and pivoting implementation.
    im.fallback.analyzePattern(im.eigen_matrix);
    im.fallback.factorize(im.eigen_matrix);
    im.use_fallback = true;
    if (im.fallback.info() != Eigen::Success) {
        const int idx = find_suspicious_index(a);
        throw SingularMatrixError("solve_direct: factorization failed (" +
                                      im.fallback.lastErrorMessage() +
                                      "), suspected pivot index " + std::to_string(idx),
                                  idx);
    }
}

std::pair<std::vector<double>, SolveReport> DirectSolver::solve(const std::vector<double>& b) const {
    const Impl& im = *impl_;
    if (static_cast<int>(b.size()) != im.matrix.rows)
        throw InputError("DirectSolver::solve: right-hand side size mismatch");
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), b.size());
    auto lu_solve = [&](const Eigen::VectorXd& rhs) {
        return im.use_fallback ? Eigen::VectorXd(im.fallback.solve(rhs))
                               : Eigen::VectorXd(im.umf.solve(rhs));
    };
    Eigen::VectorXd xv = lu_solve(bv);

    std::vector<double> x(xv.data(), xv.data() + xv.size());
    SolveReport rep = make_report(im.matrix, b, x);

    // Iterative refinement recovers the last digits on ill-conditioned
    // saddle-point systems; two passes are ample for a direct factorization.
    for (int pass = 0; pass < 2 && rep.relative_residual > 1e-14; ++pass) {
        const std::vector<double> ax = spmv(im.matrix, x);
        Eigen::VectorXd r(xv.size());
        for (int i = 0; i < r.size(); ++i) r[i] = b[i] - ax[i];
        const Eigen::VectorXd dx = lu_solve(r);
        std::vector<double> x_new = x;
        for (int i = 0; i < dx.size(); ++i) x_new[i] += dx[i];
        SolveReport rep_new = make_report(im.matrix, b, x_new);
        if (rep_new.relative_residual >= rep.relative_residual) break;
        x = std::move(x_new);
        rep = rep_new;
    }
    return {std::move(x), rep};
}

std::pair<std::vector<double>, SolveReport> solve_direct(const CsrMatrix& a,
                                                         const std::vector<double>& b) {
    DirectSolver solver;
    solver.factorize(a);
    return solver.solve(b);
}

void BorderedSolver::factorize(const CsrMatrix& a, const std::vector<double>& w) {
    if (a.rows != a.cols) throw InputError("BorderedSolver: matrix must be square");
    if (static_cast<int>(w.size()) != a.rows)
        throw InputError("BorderedSolver: weight vector size mismatch");
    a_ = a;
    w_ = w;

    pin_ = -1;
    double wmax = 0.0;
    for (int i = 0; i < a.rows; ++i)
        if (std::abs(w[i]) > wmax) {
            wmax = std::abs(w[i]);
            pin_ = i;
        }
    if (pin_ < 0) throw InputError("BorderedSolver: all border weights are zero");
    alpha_ = std::max(a.max_abs(), 1.0);

    TripletBuffer t(a.rows, a.cols);
    t.reserve(a.nnz() + 1);
    for (int r = 0; r < a.rows; ++r)
        for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
            t.add(r, a.col_indices[k], a.values[k]);
    t.add(pin_, pin_, alpha_);
    inner_.factorize(csr_from_triplets(t));

    v_ = inner_.solve(w_).first;
    std::vector<double> ek(a.rows, 0.0);
    ek[pin_] = 1.0;
    z_ = inner_.solve(ek).first;
}

BorderedSolver::Result BorderedSolver::solve_once(const std::vector<double>& b, double g) const {
    const int n = a_.rows;
    Result res;
    const std::vector<double> y = inner_.solve(b).first;

    auto dot = [n](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += u[i] * v[i];
        return s;
    };
    const double wy = dot(w_, y), wv = dot(w_, v_), wz = dot(w_, z_);

    // Unknowns s = x[pin], m: from x = y - m v + alpha s z and w^T x = g.
    const double a11 = 1.0 - alpha_ * z_[pin_], a12 = v_[pin_];
    const double a21 = alpha_ * wz, a22 = -wv;
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0)
        throw SolverError("BorderedSolver: singular 2x2 correction system");
    const double r1 = y[pin_], r2 = g - wy;
    const double s = (r1 * a22 - a12 * r2) / det;
    res.multiplier = (a11 * r2 - r1 * a21) / det;

    res.x.resize(n);
    for (int i = 0; i < n; ++i)
        res.x[i] = y[i] - res.multiplier * v_[i] + alpha_ * s * z_[i];
    return res;
}

BorderedSolver::Result BorderedSolver::solve(const std::vector<double>& b, double g) const {
    const int n = a_.rows;
    Result res = solve_once(b, g);

    auto bordered_residual = [&](const Result& r, std::vector<double>& rm, double& rg) {
        rm = spmv(a_, r.x);
        double wx = 0.0;
        for (int i = 0; i < n; ++i) {
            rm[i] = b[i] - rm[i] - r.multiplier * w_[i];
            wx += w_[i] * r.x[i];
        }
        rg = g - wx;
        double rn = rg * rg, bn = g * g;
        for (int i = 0; i < n; ++i) {
            rn += rm[i] * rm[i];
            bn += b[i] * b[i];
        }
        return bn > 0.0 ? std::sqrt(rn / bn) : std::sqrt(rn);
    };

    std::vector<double> rm;
    double rg = 0.0;
    double rel = bordered_residual(res, rm, rg);
    for (int pass = 0; pass < 2 && rel > 1e-14; ++pass) {
        Result corr = solve_once(rm, rg);
        Result refined = res;
        for (int i = 0; i < n; ++i) refined.x[i] += corr.x[i];
        refined.multiplier += corr.multiplier;
        std::vector<double> rm2;
        double rg2 = 0.0;
        const double rel2 = bordered_residual(refined, rm2, rg2);
        if (rel2 >= rel) break;
        res = std::move(refined);
        rm = std::move(rm2);
        rg = rg2;
        rel = rel2;
    }
    res.report.factorization_ok = true;
    res.report.relative_residual = rel;
    const double axw = a_.max_abs() + (w_.empty() ? 0.0 : *std::max_element(w_.begin(), w_.end()));
    double xinf = std::abs(res.multiplier), rinf = std::abs(rg), binf = std::abs(g);
    for (double v : res.x) xinf = std::max(xinf, std::abs(v));
    for (double v : rm) rinf = std::max(rinf, std::abs(v));
    for (double v : b) binf = std::max(binf, std::abs(v));
    const double denom = axw * xinf + binf;
    res.report.pivot_growth = denom > 0.0 ? rinf / denom : 0.0;
    return res;
}

std::pair<CsrMatrix, std::vector<double>> augment_mean_zero(const CsrMatrix& a,
                                                            const std::vector<double>& b,
                                                            const std::vector<int>& dofs,
                                                            const std::vector<double>& weights) {
    if (dofs.size() != weights.size())
        throw InputError("augment_mean_zero: dof/weight size mismatch");
    bool any = false;
    for (double w : weights)
        if (w != 0.0) any = true;
    if (!any) throw InputError("augment_mean_zero: all weights are zero");

    const int n = a.rows;
    TripletBuffer t(n + 1, n + 1);
    t.reserve(a.nnz() + 2 * dofs.size());
    for (int r = 0; r < n; ++r)
        for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
            t.add(r, a.col_indices[k], a.values[k]);
    for (size_t i = 0; i < dofs.size(); ++i) {
        t.add(n, dofs[i], weights[i]);
        t.add(dofs[i], n, weights[i]);
    }
    std::vector<double> rhs = b;
    rhs.push_back(0.0);
    return {csr_from_triplets(t), std::move(rhs)};
}

} // namespace vdflow
