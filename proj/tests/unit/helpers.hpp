#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "krecycle/krecycle.hpp"

namespace testutil {

using namespace krecycle;

inline Vector random_vector(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = counter_normal(seed, 0x7e57, stream, i);
    return v;
}

inline DenseBlock random_block(std::size_t n, std::size_t k, std::uint64_t seed) {
    DenseBlock b(n, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) b(i, j) = counter_normal(seed, 0xb10c, j, i);
    return b;
}

/// Dense SPD matrix G^T G + shift I stored as a sparse matrix.
inline SparseSpdMatrix random_spd(std::size_t n, std::uint64_t seed, double shift = 1.0) {
    const DenseBlock g = random_block(n, n, seed);
    std::vector<Triplet> lower;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = dot(g.col(i), g.col(j)) / static_cast<double>(n);
            if (i == j) s += shift;
            lower.push_back({i, j, s});
        }
    return SparseSpdMatrix::from_lower_triplets(n, lower);
}

inline DenseBlock to_dense(const SparseSpdMatrix &a) {
    DenseBlock d(a.n(), a.n());
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) d(i, a.col_indices()[k]) = a.values()[k];
    return d;
}

inline SparseSpdMatrix from_dense(const DenseBlock &d) {
    std::vector<Triplet> lower;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (d(i, j) != 0) lower.push_back({i, j, d(i, j)});
    return SparseSpdMatrix::from_lower_triplets(d.rows(), lower);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline SolveConfig solve_config(double tol, std::size_t max_iters = 1000) {
    SolveConfig c;
    c.tol = tol;
    c.max_iters = max_iters;
    return c;
}

} // namespace testutil
