#ifndef KRECYCLE_RECYCLE_OVERLAP_HPP
#define KRECYCLE_RECYCLE_OVERLAP_HPP

/// \file krecycle/recycle/overlap.hpp
/// \brief How much two augmentation spaces share. Singular values of
///        [orth(U1), orth(U2)]: sqrt(2) for a shared direction, 1 for a
///        direction in only one space, 0 paired with each sqrt(2).

#include <cstddef>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/dense.hpp"
#include "krecycle/linalg/eigen.hpp"

namespace krecycle {

/// Orthonormal basis of range(U); columns with relative singular value at
/// most `rel_tol` are discarded.
inline DenseBlock orthonormalize(const DenseBlock &u, double rel_tol = 1e-12) {
    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < u.cols(); ++j)
        if (norm2(u.col(j)) > 0) nonzero.push_back(j);
    if (nonzero.empty()) return DenseBlock(u.rows(), 0);
    const DenseBlock x = nonzero.size() == u.cols() ? u : u.select_columns(nonzero);
    // Unit columns first so the rank cut is scale-free.
    DenseBlock xs = x;
    for (std::size_t j = 0; j < xs.cols(); ++j) scale(1.0 / norm2(xs.col(j)), xs.col(j));
    const ThinSvd svd = thin_svd(xs);
    std::vector<std::size_t> keep;
    const double top = svd.singular_values.empty() ? 0.0 : svd.singular_values[0];
    for (std::size_t j = 0; j < svd.singular_values.size(); ++j)
        if (svd.singular_values[j] > rel_tol * top) keep.push_back(j);
    return svd.left.select_columns(keep);
}

inline Vector subspace_overlap(const DenseBlock &u1, const DenseBlock &u2) {
    detail::require(u1.rows() == u2.rows() || u1.cols() == 0 || u2.cols() == 0,
                    "subspace_overlap: blocks must have the same row count");
    DenseBlock joined = orthonormalize(u1);
    const DenseBlock q2 = orthonormalize(u2);
    if (joined.cols() == 0) joined = DenseBlock(q2.rows(), 0);
    joined.append_block(q2);
    if (joined.cols() == 0) return {};
    return thin_svd(joined).singular_values;
}

} // namespace krecycle

#endif
