#ifndef KRECYCLE_LINALG_SPARSE_MATRIX_HPP
#define KRECYCLE_LINALG_SPARSE_MATRIX_HPP

/// \file krecycle/linalg/sparse_matrix.hpp
/// \brief Compressed sparse row storage of a symmetric positive definite
///        operator. The full symmetric pattern is stored.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/vector_ops.hpp"

namespace krecycle {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

class SparseSpdMatrix {
public:
    SparseSpdMatrix() = default;

    /// Takes ownership of CSR arrays and checks every structural invariant:
    /// sorted unique columns per row, exact symmetry of pattern and values,
    /// strictly positive diagonal.
    SparseSpdMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                    std::vector<std::size_t> col_indices, std::vector<double> values)
        : n_(n), row_offsets_(std::move(row_offsets)), col_indices_(std::move(col_indices)),
          values_(std::move(values)) {
        validate();
    }

    /// Builds from unordered entries; duplicates are summed. Both triangles
    /// must be supplied (see `from_lower_triplets` for one-triangle input).
    static SparseSpdMatrix from_triplets(std::size_t n, std::vector<Triplet> entries) {
        for (const auto &t : entries)
            detail::require(t.row < n && t.col < n, "SparseSpdMatrix: entry index out of range");
        std::sort(entries.begin(), entries.end(), [](const Triplet &a, const Triplet &b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        std::vector<std::size_t> offsets(n + 1, 0);
        std::vector<std::size_t> cols;
        std::vector<double> vals;
        cols.reserve(entries.size());
        vals.reserve(entries.size());
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const auto &t = entries[k];
            if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
                vals.back() += t.value;
                continue;
            }
            cols.push_back(t.col);
            vals.push_back(t.value);
            ++offsets[t.row + 1];
        }
        std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
        return SparseSpdMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
    }

    /// Entries with row >= col only; the upper triangle is mirrored.
    static SparseSpdMatrix from_lower_triplets(std::size_t n, const std::vector<Triplet> &lower) {
        std::vector<Triplet> full;
        full.reserve(2 * lower.size());
        for (const auto &t : lower) {
            detail::require(t.row >= t.col, "SparseSpdMatrix: expected lower-triangle entry");
            full.push_back(t);
            if (t.row != t.col) full.push_back({t.col, t.row, t.value});
        }
        return from_triplets(n, std::move(full));
    }

    static SparseSpdMatrix identity(std::size_t n) { return diagonal_matrix(Vector(n, 1.0)); }

    static SparseSpdMatrix diagonal_matrix(std::span<const double> d) {
        const std::size_t n = d.size();
        std::vector<std::size_t> offsets(n + 1), cols(n);
        std::iota(offsets.begin(), offsets.end(), std::size_t{0});
        std::iota(cols.begin(), cols.end(), std::size_t{0});
        return SparseSpdMatrix(n, std::move(offsets), std::move(cols), Vector(d.begin(), d.end()));
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
    std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
    std::span<const double> values() const noexcept { return values_; }

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y) const {
        detail::require(x.size() == n_ && y.size() == n_, "spmv: dimension mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0;
            for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
                s += values_[k] * x[col_indices_[k]];
            y[i] = s;
        }
    }

    Vector diagonal() const {
        Vector d(n_);
        for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
        return d;
    }

    /// Entry lookup by binary search; zero when not stored.
    double at(std::size_t i, std::size_t j) const {
        auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
        auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
        auto it = std::lower_bound(first, last, j);
        if (it == last || *it != j) return 0.0;
        return values_[static_cast<std::size_t>(it - col_indices_.begin())];
    }

    bool operator==(const SparseSpdMatrix &) const = default;

private:
    void validate() const {
        detail::require(row_offsets_.size() == n_ + 1, "SparseSpdMatrix: row_offsets must have n+1 entries");
        detail::require(row_offsets_.front() == 0, "SparseSpdMatrix: row_offsets must start at 0");
        detail::require(row_offsets_.back() == col_indices_.size() && col_indices_.size() == values_.size(),
                        "SparseSpdMatrix: inconsistent array lengths");
        for (std::size_t i = 0; i < n_; ++i) {
            detail::require(row_offsets_[i] <= row_offsets_[i + 1],
                            "SparseSpdMatrix: row_offsets must be nondecreasing");
            for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
                detail::require(col_indices_[k] < n_, "SparseSpdMatrix: column index out of range");
                if (k > row_offsets_[i])
                    detail::require(col_indices_[k - 1] < col_indices_[k],
                                    "SparseSpdMatrix: column indices must be sorted and unique");
            }
        }
        for (std::size_t i = 0; i < n_; ++i) {
            bool has_diag = false;
            for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
                const std::size_t j = col_indices_[k];
                if (j == i) {
                    has_diag = true;
                    if (!(values_[k] > 0))
                        throw ContractViolation("SparseSpdMatrix: diagonal entry " + std::to_string(i) +
                                                " is not strictly positive");
                } else if (at(j, i) != values_[k] || !has_entry(j, i)) {
                    throw ContractViolation("SparseSpdMatrix: entry (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") has no symmetric counterpart");
                }
            }
            if (!has_diag)
                throw ContractViolation("SparseSpdMatrix: missing diagonal entry " + std::to_string(i));
        }
    }

    bool has_entry(std::size_t i, std::size_t j) const {
        auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
        auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
        return std::binary_search(first, last, j);
    }

    std::size_t n_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

inline Vector spmv(const SparseSpdMatrix &a, std::span<const double> x) {
    detail::require(x.size() == a.n(), "spmv: dimension mismatch");
    Vector y(a.n());
    a.apply(x, y);
    return y;
}

} // namespace krecycle

#endif
