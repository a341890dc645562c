#ifndef KRECYCLE_RITZ_SELECTION_HPP
#define KRECYCLE_RITZ_SELECTION_HPP

/// \file krecycle/ritz/selection.hpp
/// \brief Picking converged Ritz values (stagnation between H_{m-1} and H_m)
///        and separating the external spectrum from the central cluster.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/ritz/lanczos.hpp"

namespace krecycle {

/// Ritz values closer than this (relative) count as one value.
inline constexpr double degenerate_ritz_gap = 1e-12;

/// Flags theta_m^j when it stagnated relative to H_{m-1}'s spectrum, from
/// above (same rank) or from below (rank shifted by one). Both spectra are
/// descending; `previous` has one entry fewer than `current.values`.
inline RitzSpectrum select_converged(RitzSpectrum current, std::span<const double> previous, double epsilon) {
    detail::require(epsilon > 0, "select_converged: epsilon must be positive");
    const std::size_t m = current.values.size();
    current.epsilon = epsilon;
    current.converged_mask.assign(m, false);
    if (m <= 1) return current;
    detail::require(previous.size() + 1 == m, "select_converged: previous spectrum must have m-1 values");

    const auto &theta = current.values;
    auto &mask = current.converged_mask;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        if (std::abs(theta[j] - previous[j]) <= epsilon * std::abs(theta[j])) mask[j] = true;
        if (std::abs(theta[j + 1] - previous[j]) <= epsilon * std::abs(theta[j + 1])) mask[j + 1] = true;
    }

    // A run of numerically equal values keeps at most its first member.
    std::size_t g = 0;
    while (g < m) {
        std::size_t end = g + 1;
        while (end < m && std::abs(theta[end - 1] - theta[end]) < degenerate_ritz_gap * std::abs(theta[end - 1]))
            ++end;
        bool any = false;
        for (std::size_t k = g; k < end; ++k) any = any || mask[k];
        for (std::size_t k = g; k < end; ++k) mask[k] = false;
        mask[g] = any;
        g = end;
    }
    return current;
}

/// Convenience: Ritz pairs of H_m with stagnation flags against H_{m-1}
/// obtained by truncating H_m.
inline RitzSpectrum converged_ritz_pairs(const LanczosView &view, double epsilon) {
    RitzSpectrum current = ritz_pairs(view);
    if (view.size() < 2) return select_converged(std::move(current), {}, epsilon);
    Vector previous = ritz_values(view.tridiag, view.size() - 1);
    return select_converged(std::move(current), previous, epsilon);
}

/// Segmentation of a sorted value list into (low externals | cluster | high
/// externals) by a least-squares piecewise-constant fit of the gaps.
struct ClusterSegmentation {
    std::size_t cluster_begin = 0;  ///< first value index inside the cluster
    std::size_t cluster_end = 0;    ///< one past the last value index inside
    double residual = 0;            ///< squared error of the gap fit
    bool found = false;
    std::vector<std::size_t> retained;  ///< indices outside the cluster
};

inline ClusterSegmentation cluster_segmentation(std::span<const double> values, std::size_t min_cluster) {
    detail::require(min_cluster >= 1, "cluster_filter: min_cluster must be at least 1");
    detail::require(std::is_sorted(values.begin(), values.end()) ||
                        std::is_sorted(values.rbegin(), values.rend()),
                    "cluster_filter: values must be sorted");
    const std::size_t n = values.size();
    ClusterSegmentation out;
    auto retain_all = [&] {
        out.retained.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.retained[i] = i;
        return out;
    };
    if (n < min_cluster || n == 0) return retain_all();
    if (n == 1) {
        out.found = true;
        out.cluster_end = 1;
        return out;
    }

    // Gap i sits between values i and i+1.
    const std::size_t gaps = n - 1;
    std::vector<double> g(gaps), prefix(gaps + 1, 0.0), prefix_sq(gaps + 1, 0.0);
    for (std::size_t i = 0; i < gaps; ++i) {
        g[i] = std::abs(values[i + 1] - values[i]);
        prefix[i + 1] = prefix[i] + g[i];
        prefix_sq[i + 1] = prefix_sq[i] + g[i] * g[i];
    }
    auto mean = [&](std::size_t a, std::size_t b) { return (prefix[b] - prefix[a]) / static_cast<double>(b - a); };
    auto sse = [&](std::size_t a, std::size_t b) {
        if (b <= a) return 0.0;
        const double s = prefix[b] - prefix[a];
        return std::max(0.0, prefix_sq[b] - prefix_sq[a] - s * s / static_cast<double>(b - a));
    };

    const double tie = 1e-12 * std::max(prefix_sq[gaps], std::numeric_limits<double>::min());
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_a = 0, best_b = 0;
    // The cluster owns gaps [a, b), i.e. values a..b.
    for (std::size_t a = 0; a < gaps; ++a) {
        for (std::size_t b = a + 1; b <= gaps; ++b) {
            if (b - a + 1 < min_cluster) continue;
            const double level = mean(a, b);
            if (a > 0 && mean(0, a) < level) continue;
            if (b < gaps && mean(b, gaps) < level) continue;
            const double err = sse(0, a) + sse(a, b) + sse(b, gaps);
            const bool better = err < best - tie;
            const bool tied_larger = std::abs(err - best) <= tie && (b - a) > (best_b - best_a);
            if (better || tied_larger) {
                best = err;
                best_a = a;
                best_b = b;
            }
        }
    }
    if (!std::isfinite(best)) return retain_all();
    out.found = true;
    out.cluster_begin = best_a;
    out.cluster_end = best_b + 1;
    out.residual = best;
    for (std::size_t i = 0; i < n; ++i)
        if (i < out.cluster_begin || i >= out.cluster_end) out.retained.push_back(i);
    return out;
}

/// Indices of `values` outside the central dense cluster.
inline std::vector<std::size_t> cluster_filter(std::span<const double> values, std::size_t min_cluster) {
    return cluster_segmentation(values, min_cluster).retained;
}

/// ceil(count / 5), at least 1.
inline std::size_t default_min_cluster(std::size_t preselected) {
    return std::max<std::size_t>(1, (preselected + 4) / 5);
}

} // namespace krecycle

#endif
