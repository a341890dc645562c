#ifndef KRECYCLE_LINALG_EIGEN_HPP
#define KRECYCLE_LINALG_EIGEN_HPP

/// \file krecycle/linalg/eigen.hpp
/// \brief Symmetric eigensolvers (implicit-shift QL for tridiagonal input,
///        cyclic Jacobi for dense input) and a one-sided Jacobi thin SVD.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/dense.hpp"
#include "krecycle/linalg/vector_ops.hpp"

namespace krecycle {

/// Symmetric tridiagonal matrix: diag[0..m), offdiag[0..m-1).
struct TridiagSym {
    Vector diag;
    Vector offdiag;

    std::size_t size() const noexcept { return diag.size(); }

    void validate() const {
        detail::require(!diag.empty() ? offdiag.size() + 1 == diag.size() : offdiag.empty(),
                        "TridiagSym: |offdiag| must equal |diag| - 1");
    }

    /// Leading k x k principal submatrix.
    TridiagSym leading(std::size_t k) const {
        detail::require(k <= size(), "TridiagSym::leading: k exceeds dimension");
        TridiagSym t;
        t.diag.assign(diag.begin(), diag.begin() + static_cast<std::ptrdiff_t>(k));
        if (k > 0) t.offdiag.assign(offdiag.begin(), offdiag.begin() + static_cast<std::ptrdiff_t>(k - 1));
        return t;
    }

    DenseBlock to_dense() const {
        const std::size_t m = size();
        DenseBlock h(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            h(i, i) = diag[i];
            if (i + 1 < m) {
                h(i, i + 1) = offdiag[i];
                h(i + 1, i) = offdiag[i];
            }
        }
        return h;
    }

    /// max |entry|, used as the scale for relative tolerances.
    double max_abs() const {
        double s = 0;
        for (double v : diag) s = std::max(s, std::abs(v));
        for (double v : offdiag) s = std::max(s, std::abs(v));
        return s;
    }
};

/// Eigenvalues sorted descending; `vectors` column j pairs with `values[j]`.
struct EigDecomposition {
    Vector values;
    DenseBlock vectors;
};

namespace detail {

inline void sort_descending(Vector &values, DenseBlock *vectors) {
    const std::size_t m = values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    Vector sorted(m);
    for (std::size_t j = 0; j < m; ++j) sorted[j] = values[order[j]];
    values = std::move(sorted);
    if (vectors) *vectors = vectors->select_columns(order);
}

/// Implicit QL on (d, e) where e[i] couples i and i+1; e has length m with a
/// trailing zero. Accumulates rotations into z when non-null.
inline void tql2(Vector &d, Vector &e, DenseBlock *z) {
    const std::size_t n = d.size();
    if (n == 0) return;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_sweeps = 60;
    double f = 0, tst1 = 0;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > max_sweeps)
                    throw NumericalFailure("tridiagonal QL did not converge for eigenvalue " + std::to_string(l), l);
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1, c2 = 1, c3 = 1;
                const double el1 = e[l + 1];
                double s = 0, s2 = 0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    if (z) {
                        for (std::size_t k = 0; k < n; ++k) {
                            h = (*z)(k, ii + 1);
                            (*z)(k, ii + 1) = s * (*z)(k, ii) + c * h;
                            (*z)(k, ii) = c * (*z)(k, ii) - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0;
    }
}

} // namespace detail

/// Full eigendecomposition of a symmetric tridiagonal matrix.
inline EigDecomposition tridiag_eig(const TridiagSym &t) {
    t.validate();
    const std::size_t m = t.size();
    EigDecomposition out;
    out.values = t.diag;
    Vector e(m, 0.0);
    std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
    out.vectors = DenseBlock::identity(m);
    detail::tql2(out.values, e, &out.vectors);
    detail::sort_descending(out.values, &out.vectors);
    return out;
}

/// Eigenvalues only (descending). Cheaper than `tridiag_eig` for the
/// stagnation and interlacing checks that never need vectors.
inline Vector tridiag_eigenvalues(const TridiagSym &t) {
    t.validate();
    Vector d = t.diag;
    Vector e(t.size(), 0.0);
    std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
    detail::tql2(d, e, nullptr);
    detail::sort_descending(d, nullptr);
    return d;
}

/// Cyclic Jacobi eigensolver for small dense symmetric matrices.
inline EigDecomposition dense_sym_eig(const DenseBlock &g) {
    detail::require_square_symmetric(g, "dense_sym_eig");
    const std::size_t n = g.rows();
    DenseBlock a = g;
    // Exact symmetry from here on.
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
    DenseBlock v = DenseBlock::identity(n);

    double frob = 0;
    for (double x : a.data()) frob += x * x;
    frob = std::sqrt(frob);

    constexpr int max_sweeps = 100;
    int sweep = 0;
    for (;; ++sweep) {
        double off = 0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = j + 1; i < n; ++i) off += a(i, j) * a(i, j);
        off = std::sqrt(2 * off);
        if (off <= 1e-15 * frob || off == 0) break;
        if (sweep >= max_sweeps)
            throw NumericalFailure("dense_sym_eig: Jacobi sweeps did not converge", 0);
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    EigDecomposition out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
    out.vectors = std::move(v);
    detail::sort_descending(out.values, &out.vectors);
    return out;
}

/// Thin SVD X = U diag(sigma) V^T of an n x k block, computed by one-sided
/// (Hestenes) Jacobi. Singular values descending; columns of `left` paired
/// with zero singular values are left as zero vectors.
struct ThinSvd {
    DenseBlock left;
    Vector singular_values;
    DenseBlock right;
};

inline ThinSvd thin_svd(const DenseBlock &x) {
    const std::size_t n = x.rows(), k = x.cols();
    DenseBlock u = x;
    DenseBlock v = DenseBlock::identity(k);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_sweeps = 80;
    for (int sweep = 0;; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                const double alpha = dot(u.col(p), u.col(p));
                const double beta = dot(u.col(q), u.col(q));
                const double gamma = dot(u.col(p), u.col(q));
                if (gamma == 0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2 * gamma);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                const double c = 1 / std::sqrt(1 + t * t);
                const double s = c * t;
                auto up = u.col(p), uq = u.col(q);
                for (std::size_t i = 0; i < n; ++i) {
                    const double a = up[i], b = uq[i];
                    up[i] = c * a - s * b;
                    uq[i] = s * a + c * b;
                }
                auto vp = v.col(p), vq = v.col(q);
                for (std::size_t i = 0; i < k; ++i) {
                    const double a = vp[i], b = vq[i];
                    vp[i] = c * a - s * b;
                    vq[i] = s * a + c * b;
                }
            }
        }
        if (!rotated) break;
        if (sweep >= max_sweeps) throw NumericalFailure("thin_svd: Jacobi sweeps did not converge", 0);
    }
    ThinSvd out;
    out.singular_values.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double s = norm2(u.col(j));
        out.singular_values[j] = s;
        if (s > 0) scale(1 / s, u.col(j));
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.singular_values[a] > out.singular_values[b];
    });
    Vector sorted(k);
    for (std::size_t j = 0; j < k; ++j) sorted[j] = out.singular_values[order[j]];
    out.singular_values = std::move(sorted);
    out.left = u.select_columns(order);
    out.right = v.select_columns(order);
    return out;
}

} // namespace krecycle

#endif
