#ifndef KRECYCLE_RECYCLE_BASIS_HPP
#define KRECYCLE_RECYCLE_BASIS_HPP

/// \file krecycle/recycle/basis.hpp
/// \brief The augmentation basis carried from one system to the next and the
///        two ways of growing it.
///
/// Appended blocks are A^(k)-conjugate to the existing columns by
/// construction (directions and Ritz vectors both live in range(P)), so the
/// rank guard here only tests the new block against itself. The full basis
/// is guarded again when the next projector is built.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/dense.hpp"
#include "krecycle/linalg/sparse_matrix.hpp"
#include "krecycle/ritz/lanczos.hpp"
#include "krecycle/solver/apcg.hpp"
#include "krecycle/solver/deflation.hpp"

namespace krecycle {

enum class ColumnSource { initial, direction, ritz };

struct ColumnOrigin {
    ColumnSource source = ColumnSource::initial;
    std::size_t system = 0;  ///< system whose solve produced the column
    std::size_t index = 0;   ///< direction index j, or Ritz rank (descending)
    double ritz_value = 0;   ///< theta for Ritz columns
};

struct AugmentationState {
    DenseBlock basis;
    std::vector<ColumnOrigin> origin_tags;
    DenseBlock initial_basis;

    static AugmentationState from_initial(const DenseBlock &c0) {
        AugmentationState s;
        s.basis = c0;
        s.initial_basis = c0;
        s.origin_tags.resize(c0.cols());
        for (std::size_t j = 0; j < c0.cols(); ++j) s.origin_tags[j] = {ColumnSource::initial, 0, j, 0};
        return s;
    }

    std::size_t columns() const noexcept { return basis.cols(); }

    void restart() {
        basis = initial_basis;
        origin_tags.resize(initial_basis.cols());
        for (std::size_t j = 0; j < initial_basis.cols(); ++j) origin_tags[j] = {ColumnSource::initial, 0, j, 0};
    }

    /// Keeps only `kept` (ascending indices).
    void keep_columns(std::span<const std::size_t> kept) {
        std::vector<ColumnOrigin> tags;
        tags.reserve(kept.size());
        for (auto j : kept) tags.push_back(origin_tags[j]);
        basis = basis.select_columns(kept);
        origin_tags = std::move(tags);
    }
};

struct BasisUpdate {
    std::size_t appended = 0;
    std::vector<ColumnOrigin> dropped;
};

namespace detail {

/// Appends the columns of `block` that pass the pivot test on block^T A block.
inline BasisUpdate append_guarded(AugmentationState &state, const DenseBlock &block,
                                  const std::vector<ColumnOrigin> &tags, const SparseSpdMatrix &a,
                                  double rank_guard) {
    BasisUpdate log;
    if (block.cols() == 0) return log;
    if (state.basis.cols() == 0 && state.basis.rows() != block.rows()) state.basis = DenseBlock(block.rows(), 0);
    const GuardedDeflation g = build_deflation_guarded(a, block, rank_guard);
    for (auto j : g.dropped) log.dropped.push_back(tags[j]);
    for (auto j : g.kept) {
        state.basis.append_column(block.col(j));
        state.origin_tags.push_back(tags[j]);
    }
    log.appended = g.kept.size();
    return log;
}

} // namespace detail

/// Total reuse: every search direction of the solve, scaled to unit A-norm.
/// Requires a trace captured with `store_directions`.
inline BasisUpdate update_basis_trks(AugmentationState &state, const SolveTrace &trace, const SparseSpdMatrix &a,
                                     std::size_t system, double rank_guard = default_rank_guard) {
    const std::size_t m = trace.iterations;
    if (m == 0) return {};
    detail::require(trace.directions.cols() == m, "update_basis_trks: trace was captured without directions");
    DenseBlock block(trace.directions.rows(), m);
    std::vector<ColumnOrigin> tags(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = 1.0 / std::sqrt(trace.curvatures[j]);
        auto src = trace.directions.col(j);
        auto dst = block.col(j);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = s * src[i];
        tags[j] = {ColumnSource::direction, system, j, 0};
    }
    return detail::append_guarded(state, block, tags, a, rank_guard);
}

/// Selective reuse: flagged Ritz vectors, each scaled by 1/sqrt|theta| so the
/// appended coarse block is the identity.
inline BasisUpdate update_basis_srks(AugmentationState &state, const RitzSpectrum &spectrum,
                                     std::span<const std::size_t> selected, const SparseSpdMatrix &a,
                                     std::size_t system, double rank_guard = default_rank_guard) {
    if (selected.empty()) return {};
    DenseBlock block(spectrum.vectors.rows(), selected.size());
    std::vector<ColumnOrigin> tags(selected.size());
    for (std::size_t c = 0; c < selected.size(); ++c) {
        const std::size_t j = selected[c];
        detail::require(j < spectrum.size(), "update_basis_srks: selected index out of range");
        const double theta = spectrum.values[j];
        const double s = 1.0 / std::sqrt(std::abs(theta));
        auto src = spectrum.vectors.col(j);
        auto dst = block.col(c);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = s * src[i];
        tags[c] = {ColumnSource::ritz, system, j, theta};
    }
    return detail::append_guarded(state, block, tags, a, rank_guard);
}

/// Flagged entries of `spectrum.converged_mask`.
inline BasisUpdate update_basis_srks(AugmentationState &state, const RitzSpectrum &spectrum,
                                     const SparseSpdMatrix &a, std::size_t system,
                                     double rank_guard = default_rank_guard) {
    const auto idx = spectrum.converged_indices();
    return update_basis_srks(state, spectrum, idx, a, system, rank_guard);
}

} // namespace krecycle

#endif
