#ifndef KRECYCLE_LINALG_DENSE_HPP
#define KRECYCLE_LINALG_DENSE_HPP

/// \file krecycle/linalg/dense.hpp
/// \brief Column-major dense blocks ("multivectors") and a small dense
///        Cholesky factorization for coarse matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/vector_ops.hpp"

namespace krecycle {

/// n x k column-major block. Columns are contiguous and exposed as spans.
class DenseBlock {
public:
    DenseBlock() = default;
    DenseBlock(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseBlock identity(std::size_t n) {
        DenseBlock m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    /// Builds a block from row-major nested lists (handy in tests).
    static DenseBlock from_rows(const std::vector<std::vector<double>> &rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.front().size() : 0;
        DenseBlock m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            detail::require(rows[i].size() == c, "DenseBlock::from_rows: ragged input");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return cols_ == 0; }

    double &operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    std::span<const double> data() const noexcept { return data_; }

    using EigenMap = Eigen::Map<Eigen::MatrixXd>;
    using EigenConstMap = Eigen::Map<const Eigen::MatrixXd>;
    EigenMap eigen() { return {data_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)}; }
    EigenConstMap eigen() const {
        return {data_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
    }

    void append_column(std::span<const double> v) {
        if (cols_ == 0 && rows_ == 0) rows_ = v.size();
        detail::require(v.size() == rows_, "DenseBlock::append_column: row count mismatch");
        data_.insert(data_.end(), v.begin(), v.end());
        ++cols_;
    }

    void append_block(const DenseBlock &other) {
        if (other.cols_ == 0) return;
        if (cols_ == 0 && rows_ == 0) rows_ = other.rows_;
        detail::require(other.rows_ == rows_, "DenseBlock::append_block: row count mismatch");
        data_.insert(data_.end(), other.data_.begin(), other.data_.end());
        cols_ += other.cols_;
    }

    /// Keeps the listed columns, in the listed order.
    DenseBlock select_columns(std::span<const std::size_t> keep) const {
        DenseBlock out(rows_, 0);
        out.data_.reserve(keep.size() * rows_);
        for (auto j : keep) {
            detail::require(j < cols_, "DenseBlock::select_columns: index out of range");
            out.append_column(col(j));
        }
        return out;
    }

    /// Drops column j, shifting later columns left.
    void erase_column(std::size_t j) {
        detail::require(j < cols_, "DenseBlock::erase_column: index out of range");
        auto first = data_.begin() + static_cast<std::ptrdiff_t>(j * rows_);
        data_.erase(first, first + static_cast<std::ptrdiff_t>(rows_));
        --cols_;
    }

    /// X^T v, length cols()
    Vector transpose_times(std::span<const double> v) const {
        detail::require(v.size() == rows_, "DenseBlock::transpose_times: dimension mismatch");
        Vector out(cols_);
        if (cols_ > 0) detail::map(std::span<double>(out)).noalias() = eigen().transpose() * detail::map(v);
        return out;
    }

    /// X c, length rows()
    Vector times(std::span<const double> c) const {
        detail::require(c.size() == cols_, "DenseBlock::times: dimension mismatch");
        Vector out(rows_, 0.0);
        if (cols_ > 0) detail::map(std::span<double>(out)).noalias() = eigen() * detail::map(c);
        return out;
    }

    /// y -= X c
    void subtract_times(std::span<const double> c, std::span<double> y) const {
        detail::require(c.size() == cols_ && y.size() == rows_, "DenseBlock::subtract_times: dimension mismatch");
        if (cols_ > 0) detail::map(y).noalias() -= eigen() * detail::map(c);
    }

    /// Largest absolute entry.
    double max_abs() const {
        double m = 0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    bool operator==(const DenseBlock &) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// X^T Y
inline DenseBlock transpose_product(const DenseBlock &x, const DenseBlock &y) {
    detail::require(x.rows() == y.rows(), "transpose_product: row count mismatch");
    DenseBlock out(x.cols(), y.cols());
    if (out.rows() > 0 && out.cols() > 0) out.eigen().noalias() = x.eigen().transpose() * y.eigen();
    return out;
}

/// X Y for square-ish dense operands.
inline DenseBlock product(const DenseBlock &x, const DenseBlock &y) {
    detail::require(x.cols() == y.rows(), "product: inner dimension mismatch");
    DenseBlock out(x.rows(), y.cols());
    if (out.rows() > 0 && out.cols() > 0 && x.cols() > 0) out.eigen().noalias() = x.eigen() * y.eigen();
    return out;
}

inline DenseBlock transpose(const DenseBlock &x) {
    DenseBlock t(x.cols(), x.rows());
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) t(j, i) = x(i, j);
    return t;
}

/// Symmetric X^T Y where the product is known to be symmetric (e.g. C^T (AC)).
/// Only the lower triangle is evaluated and then mirrored.
inline DenseBlock symmetric_transpose_product(const DenseBlock &x, const DenseBlock &y) {
    detail::require(x.rows() == y.rows() && x.cols() == y.cols(),
                    "symmetric_transpose_product: shape mismatch");
    const std::size_t k = x.cols();
    DenseBlock out(k, k);
    if (k == 0) return out;
    out.eigen().triangularView<Eigen::Lower>() = x.eigen().transpose() * y.eigen();
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = j + 1; i < k; ++i) out(j, i) = out(i, j);
    return out;
}

namespace detail {

inline void require_square_symmetric(const DenseBlock &g, const char *who) {
    if (g.rows() != g.cols()) throw ContractViolation(std::string(who) + ": matrix must be square");
    const double tol = 1e-12 * std::max(g.max_abs(), 1e-300);
    for (std::size_t j = 0; j < g.cols(); ++j)
        for (std::size_t i = j + 1; i < g.rows(); ++i)
            if (std::abs(g(i, j) - g(j, i)) > tol)
                throw ContractViolation(std::string(who) + ": matrix is not symmetric");
}

} // namespace detail

/// Lower-triangular factor L with G = L L^T, stored as packed rows so both
/// triangular sweeps read memory contiguously.
class CholeskyFactor {
public:
    CholeskyFactor() = default;

    std::size_t size() const noexcept { return n_; }

    double entry(std::size_t i, std::size_t j) const {
        return j <= i ? packed_[i * (i + 1) / 2 + j] : 0.0;
    }

    DenseBlock lower() const {
        DenseBlock l(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j <= i; ++j) l(i, j) = entry(i, j);
        return l;
    }

    /// Solves L y = b in place.
    void solve_lower_in_place(std::span<double> b) const {
        detail::require(b.size() == n_, "CholeskyFactor::solve: dimension mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            const double *row = packed_.data() + i * (i + 1) / 2;
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= row[k] * b[k];
            b[i] = s / row[i];
        }
    }

    /// Solves G x = b in place.
    void solve_in_place(std::span<double> b) const {
        solve_lower_in_place(b);
        for (std::size_t i = n_; i-- > 0;) {
            const double *row = packed_.data() + i * (i + 1) / 2;
            b[i] /= row[i];
            const double xi = b[i];
            for (std::size_t k = 0; k < i; ++k) b[k] -= row[k] * xi;
        }
    }

    Vector solve(std::span<const double> b) const {
        Vector x(b.begin(), b.end());
        solve_in_place(x);
        return x;
    }

    Vector solve_lower(std::span<const double> b) const {
        Vector y(b.begin(), b.end());
        solve_lower_in_place(y);
        return y;
    }

    /// Tries to border the factor with a new row/column. `coupling` holds
    /// G(new, 0..size) and `diag` G(new, new). Returns false (leaving the
    /// factor untouched) when the pivot is not larger than
    /// `relative_pivot_tol` times the largest pivot accepted so far.
    bool try_append(std::span<const double> coupling, double diag, double relative_pivot_tol) {
        detail::require(coupling.size() == n_, "CholeskyFactor::try_append: dimension mismatch");
        Vector row(coupling.begin(), coupling.end());
        solve_lower_in_place(row);
        double pivot = diag;
        for (double v : row) pivot -= v * v;
        if (!(pivot > relative_pivot_tol * largest_pivot_) || !std::isfinite(pivot)) return false;
        largest_pivot_ = std::max(largest_pivot_, pivot);
        packed_.insert(packed_.end(), row.begin(), row.end());
        packed_.push_back(std::sqrt(pivot));
        ++n_;
        return true;
    }

private:
    std::size_t n_ = 0;
    double largest_pivot_ = 0;
    std::vector<double> packed_;
};

/// Dense Cholesky of a symmetric matrix. A pivot is rejected when it is not
/// larger than `relative_pivot_tol` times the largest pivot accepted so far
/// (with the default 0 only non-positive pivots are rejected).
inline CholeskyFactor dense_cholesky(const DenseBlock &g, double relative_pivot_tol = 0.0) {
    detail::require_square_symmetric(g, "dense_cholesky");
    const std::size_t n = g.rows();
    CholeskyFactor f;
    Vector coupling;
    for (std::size_t j = 0; j < n; ++j) {
        coupling.resize(j);
        for (std::size_t k = 0; k < j; ++k) coupling[k] = g(j, k);
        if (!f.try_append(coupling, g(j, j), relative_pivot_tol))
            throw RankDeficient("dense_cholesky: non-positive pivot at column " + std::to_string(j), j);
    }
    return f;
}

} // namespace krecycle

#endif
