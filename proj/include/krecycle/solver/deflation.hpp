#ifndef KRECYCLE_SOLVER_DEFLATION_HPP
#define KRECYCLE_SOLVER_DEFLATION_HPP

/// \file krecycle/solver/deflation.hpp
/// \brief Augmentation projector P = I - C (C^T A C)^{-1} C^T A built from a
///        basis C with the products AC and the coarse factor cached.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/dense.hpp"
#include "krecycle/linalg/sparse_matrix.hpp"
#include "krecycle/linalg/vector_ops.hpp"

namespace krecycle {

/// Rank-guard threshold on coarse Cholesky pivots, relative to the largest
/// accepted pivot.
inline constexpr double default_rank_guard = 1e-12;

class DeflationOperator {
public:
    DeflationOperator() = default;
    DeflationOperator(DenseBlock basis, DenseBlock ac, CholeskyFactor coarse)
        : basis_(std::move(basis)), ac_(std::move(ac)), coarse_(std::move(coarse)) {}

    /// No-op projector on R^n.
    static DeflationOperator empty(std::size_t n) { return DeflationOperator(DenseBlock(n, 0), DenseBlock(n, 0), {}); }

    std::size_t n() const noexcept { return basis_.rows(); }
    std::size_t columns() const noexcept { return basis_.cols(); }
    bool is_empty() const noexcept { return basis_.cols() == 0; }

    const DenseBlock &basis() const noexcept { return basis_; }
    const DenseBlock &ac() const noexcept { return ac_; }
    const CholeskyFactor &coarse_factor() const noexcept { return coarse_; }

    /// x <- P x = x - C (C^T A C)^{-1} (AC)^T x
    void project_in_place(std::span<double> x) const {
        detail::require(x.size() == n(), "project: dimension mismatch");
        if (is_empty()) return;
        Vector coef = ac_.transpose_times(x);
        coarse_.solve_in_place(coef);
        basis_.subtract_times(coef, x);
    }

    /// r <- P^T r = r - AC (C^T A C)^{-1} C^T r
    void project_transpose_in_place(std::span<double> r) const {
        detail::require(r.size() == n(), "project_transpose: dimension mismatch");
        if (is_empty()) return;
        Vector coef = basis_.transpose_times(r);
        coarse_.solve_in_place(coef);
        ac_.subtract_times(coef, r);
    }

    /// y = (C^T A C)^{-1} C^T r; then r <- r - AC y (= P^T r) and x <- x + C y.
    void coarse_correct(std::span<double> r, std::span<double> x) const {
        detail::require(r.size() == n() && x.size() == n(), "coarse_correct: dimension mismatch");
        if (is_empty()) return;
        Vector coef = basis_.transpose_times(r);
        coarse_.solve_in_place(coef);
        ac_.subtract_times(coef, r);
        for (double &v : coef) v = -v;
        basis_.subtract_times(coef, x);
    }

    /// Coarse correction C (C^T A C)^{-1} C^T b.
    Vector coarse_solution(std::span<const double> b) const {
        detail::require(b.size() == n(), "coarse_solution: dimension mismatch");
        if (is_empty()) return Vector(n(), 0.0);
        Vector coef = basis_.transpose_times(b);
        coarse_.solve_in_place(coef);
        return basis_.times(coef);
    }

private:
    DenseBlock basis_;
    DenseBlock ac_;
    CholeskyFactor coarse_;
};

/// x <- P x
inline Vector project(const DeflationOperator &d, std::span<const double> x) {
    Vector y(x.begin(), x.end());
    d.project_in_place(y);
    return y;
}

/// A C, one spmv per column.
inline DenseBlock block_apply(const SparseSpdMatrix &a, const DenseBlock &c) {
    detail::require(c.rows() == a.n() || c.cols() == 0, "block_apply: row count mismatch");
    DenseBlock ac(a.n(), c.cols());
    for (std::size_t j = 0; j < c.cols(); ++j) a.apply(c.col(j), ac.col(j));
    return ac;
}

/// Builds the projector. Throws RankDeficient naming the first column whose
/// coarse pivot falls below `rank_guard` times the largest accepted pivot.
inline DeflationOperator build_deflation(const SparseSpdMatrix &a, const DenseBlock &c,
                                         double rank_guard = default_rank_guard) {
    if (c.cols() == 0) return DeflationOperator::empty(a.n());
    detail::require(c.rows() == a.n(), "build_deflation: basis row count must equal n");
    detail::require(c.cols() <= a.n(), "build_deflation: more columns than rows");
    DenseBlock ac = block_apply(a, c);
    DenseBlock coarse = symmetric_transpose_product(c, ac);
    CholeskyFactor factor;
    Vector coupling;
    for (std::size_t j = 0; j < coarse.cols(); ++j) {
        coupling.resize(j);
        for (std::size_t k = 0; k < j; ++k) coupling[k] = coarse(j, k);
        if (!factor.try_append(coupling, coarse(j, j), rank_guard))
            throw RankDeficient("build_deflation: augmentation column " + std::to_string(j) +
                                    " depends on earlier columns",
                                j);
    }
    return DeflationOperator(c, std::move(ac), std::move(factor));
}

/// Result of `build_deflation_guarded`: the projector over the surviving
/// columns plus the indices (into the input basis) that were dropped.
struct GuardedDeflation {
    DeflationOperator op;
    std::vector<std::size_t> kept;
    std::vector<std::size_t> dropped;
};

/// Like `build_deflation`, but drops every column that trips the rank guard
/// instead of failing. One pass; later columns are tested against the
/// surviving earlier ones only.
inline GuardedDeflation build_deflation_guarded(const SparseSpdMatrix &a, const DenseBlock &c,
                                                double rank_guard = default_rank_guard) {
    GuardedDeflation out;
    if (c.cols() == 0) {
        out.op = DeflationOperator::empty(a.n());
        return out;
    }
    detail::require(c.rows() == a.n(), "build_deflation: basis row count must equal n");
    DenseBlock ac = block_apply(a, c);
    DenseBlock coarse = symmetric_transpose_product(c, ac);
    CholeskyFactor factor;
    Vector coupling;
    for (std::size_t j = 0; j < coarse.cols(); ++j) {
        coupling.resize(out.kept.size());
        for (std::size_t k = 0; k < out.kept.size(); ++k) coupling[k] = coarse(j, out.kept[k]);
        if (factor.try_append(coupling, coarse(j, j), rank_guard))
            out.kept.push_back(j);
        else
            out.dropped.push_back(j);
    }
    if (out.dropped.empty()) {
        out.op = DeflationOperator(c, std::move(ac), std::move(factor));
    } else {
        out.op = DeflationOperator(c.select_columns(out.kept), ac.select_columns(out.kept), std::move(factor));
    }
    return out;
}

} // namespace krecycle

#endif
