#ifndef KRECYCLE_PROBLEMS_SPECTRUM_HPP
#define KRECYCLE_PROBLEMS_SPECTRUM_HPP

/// \file krecycle/problems/spectrum.hpp
/// \brief Dense-pattern SPD operators A = Q diag(lambda) Q^T with a seeded
///        random orthogonal Q. Oracle problems for the convergence theory.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/dense.hpp"
#include "krecycle/linalg/sparse_matrix.hpp"
#include "krecycle/linalg/vector_ops.hpp"
#include "krecycle/problems/rng.hpp"

namespace krecycle {

inline constexpr std::size_t max_prescribed_dimension = 500;

struct SpectrumSpec {
    Vector eigenvalues;
    std::uint64_t seed = 1;
};

struct PrescribedOperator {
    SparseSpdMatrix a;
    DenseBlock eigenvectors;  ///< column j pairs with eigenvalues[j]
    Vector eigenvalues;
};

/// Seeded random orthogonal n x n matrix (Gram-Schmidt applied twice to a
/// Gaussian matrix).
inline DenseBlock random_orthogonal(std::size_t n, std::uint64_t seed) {
    DenseBlock q(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) q(i, j) = counter_normal(seed, 0x51ec7, j, i);
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) axpy(-dot(q.col(k), q.col(j)), q.col(k), q.col(j));
        const double nrm = norm2(q.col(j));
        detail::require(nrm > 0, "random_orthogonal: degenerate draw");
        scale(1.0 / nrm, q.col(j));
    }
    return q;
}

inline PrescribedOperator generate_prescribed_operator(const SpectrumSpec &spec) {
    const std::size_t n = spec.eigenvalues.size();
    detail::require(n >= 1, "generate_prescribed_spectrum: empty spectrum");
    detail::require(n <= max_prescribed_dimension, "generate_prescribed_spectrum: n exceeds dense-pattern limit");
    for (std::size_t i = 0; i < n; ++i)
        if (!(spec.eigenvalues[i] > 0))
            throw ContractViolation("generate_prescribed_spectrum: eigenvalue " + std::to_string(i) +
                                    " is not positive");

    PrescribedOperator out;
    out.eigenvalues = spec.eigenvalues;
    out.eigenvectors = random_orthogonal(n, spec.seed);
    const DenseBlock &q = out.eigenvectors;

    // Row-major copy of Q Lambda^{1/2}-free product: a_ij = sum_k q_ik lambda_k q_jk.
    std::vector<double> qt(n * n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) qt[i * n + k] = q(i, k);
    std::vector<Triplet> lower;
    lower.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0;
            const double *qi = &qt[i * n];
            const double *qj = &qt[j * n];
            for (std::size_t k = 0; k < n; ++k) s += qi[k] * spec.eigenvalues[k] * qj[k];
            lower.push_back({i, j, s});
        }
    out.a = SparseSpdMatrix::from_lower_triplets(n, lower);
    return out;
}

inline SparseSpdMatrix generate_prescribed_spectrum(const SpectrumSpec &spec) {
    return generate_prescribed_operator(spec).a;
}

} // namespace krecycle

#endif
