#ifndef KRECYCLE_SOLVER_APCG_HPP
#define KRECYCLE_SOLVER_APCG_HPP

/// \file krecycle/solver/apcg.hpp
/// \brief Augmented preconditioned conjugate gradient.
///
/// Solves A x = b searching in K(P M^{-1} A, z_0) (+) range(C):
///
///     x_0 = C (C^T A C)^{-1} C^T b,  r_0 = b - A x_0 = P^T b
///     z_j = P M^{-1} r_j
///     w_0 = z_0,  w_j = z_j - sum_i (A w_i, z_j) / (w_i, A w_i) w_i
///     alpha_j = (r_j, w_j) / (w_j, A w_j)
///     x_{j+1} = x_j + alpha_j w_j,  r_{j+1} = r_j - alpha_j A w_j
///
/// Without reorthogonalization the direction update keeps only the i = j-1
/// term. With it, r_{j+1} is also projected so that C^T r = 0 and W^T r = 0. The trace keeps everything the Lanczos/Ritz recovery needs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/dense.hpp"
#include "krecycle/linalg/sparse_matrix.hpp"
#include "krecycle/linalg/vector_ops.hpp"
#include "krecycle/solver/deflation.hpp"
#include "krecycle/solver/preconditioner.hpp"
#include "krecycle/timer.hpp"

namespace krecycle {

/// What the convergence test divides the residual norm by.
enum class ResidualScale {
    rhs,           ///< ||b||
    projected_rhs  ///< ||P^T b|| = ||r_0||
};

inline std::string_view to_string(ResidualScale s) {
    return s == ResidualScale::rhs ? "rhs" : "projected_rhs";
}

struct SolveConfig {
    double tol = 1e-6;
    std::size_t max_iters = 1000;
    bool reorthogonalize = true;
    /// Keep z_0..z_{m-1} (needed for Ritz vectors).
    bool trace_capture = true;
    /// Keep the search directions w_0..w_{m-1} (needed for total reuse).
    bool store_directions = false;
    /// Keep r_0..r_{m-1}; diagnostics only.
    bool store_residuals = false;
    ResidualScale residual_scale = ResidualScale::rhs;
    /// Called with (j, x_j) for every iterate including x_0.
    std::function<void(std::size_t, std::span<const double>)> observer;

    void validate() const {
        detail::require(tol > 0 && tol < 1, "SolveConfig: tol must lie in (0, 1)");
        detail::require(max_iters >= 1, "SolveConfig: max_iters must be at least 1");
    }
};

struct SolveTrace {
    Vector alphas;          ///< alpha_0 .. alpha_{m-1}
    Vector betas;           ///< beta_1 .. beta_{m-1}, beta_j = (r_j, z_j) / (r_{j-1}, z_{j-1})
    Vector rz_inner;        ///< (r_j, z_j), j = 0 .. m-1
    Vector residual_norms;  ///< ||r_0|| .. ||r_m||
    Vector curvatures;      ///< (w_j, A w_j), j = 0 .. m-1
    DenseBlock z_history;   ///< z_0 .. z_{m-1} when trace_capture
    DenseBlock directions;  ///< w_0 .. w_{m-1} when store_directions
    DenseBlock residuals;   ///< r_0 .. r_{m-1} when store_residuals
    /// (r_m, z_m) / (r_{m-1}, z_{m-1}); the off-diagonal coupling to the next,
    /// never-built Lanczos vector. NaN when m = 0.
    double trailing_beta = std::numeric_limits<double>::quiet_NaN();
    double reference_norm = 0;  ///< denominator of the convergence test
    std::size_t iterations = 0;
    bool converged = false;
    double projection_seconds = 0;  ///< CPU time spent applying P and building x_0
};

struct SolveResult {
    Vector x;
    SolveTrace trace;
};

/// Runs APCG(A, M, C, b). On NumericalFailure (non-positive curvature or
/// (r, z) <= 0) the exception carries the failing iteration.
inline SolveResult apcg_solve(const SparseSpdMatrix &a, const Preconditioner &m, const DeflationOperator &d,
                              std::span<const double> b, const SolveConfig &cfg) {
    cfg.validate();
    const std::size_t n = a.n();
    detail::require(b.size() == n, "apcg_solve: right-hand side length must equal n");
    detail::require(d.n() == n || d.is_empty(), "apcg_solve: deflation operator built for another size");

    SolveResult out;
    SolveTrace &tr = out.trace;
    CpuStopwatch proj_clock;

    proj_clock.start();
    Vector x = d.is_empty() ? Vector(n, 0.0) : d.coarse_solution(b);
    proj_clock.stop();
    Vector r(n);
    a.apply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];

    const double b_norm = norm2(b);
    double r_norm = norm2(r);
    tr.residual_norms.push_back(r_norm);
    tr.reference_norm = cfg.residual_scale == ResidualScale::rhs ? b_norm : r_norm;
    if (cfg.observer) cfg.observer(0, x);

    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (b_norm == 0 || r_norm <= 4 * eps * static_cast<double>(n) * b_norm) {
        // The coarse space already holds the solution to rounding.
        tr.converged = true;
        out.x = std::move(x);
        tr.projection_seconds = proj_clock.seconds();
        return out;
    }

    auto precondition = [&](std::span<const double> res, std::span<double> z) {
        m.apply(res, z);
        proj_clock.start();
        d.project_in_place(z);
        proj_clock.stop();
    };

    Vector z(n), w(n), q(n);
    precondition(r, z);
    double rz = dot(r, z);
    double rz_prev = 0;

    // Directions and their images, kept for full reorthogonalization.
    DenseBlock w_store(n, 0), aw_store(n, 0);
    // x -= W x_pending, applied lazily
    Vector x_pending;
    auto flush_x = [&] {
        if (x_pending.empty()) return;
        w_store.subtract_times(x_pending, x);
        std::fill(x_pending.begin(), x_pending.end(), 0.0);
    };
    Vector prev_w, prev_aw;
    double prev_curv = 0;

    if (cfg.trace_capture) tr.z_history = DenseBlock(n, 0);
    if (cfg.store_directions) tr.directions = DenseBlock(n, 0);
    if (cfg.store_residuals) tr.residuals = DenseBlock(n, 0);

    std::size_t j = 0;
    for (;;) {
        if (r_norm <= cfg.tol * tr.reference_norm) {
            tr.converged = true;
            break;
        }
        if (j == cfg.max_iters) break;
        if (!(rz > 0))
            throw NumericalFailure("apcg_solve: (r, z) <= 0 at iteration " + std::to_string(j) +
                                       " (operator or preconditioner not SPD)",
                                   j);

        if (j == 0) {
            w = z;
        } else {
            tr.betas.push_back(rz / rz_prev);
            w = z;
            if (cfg.reorthogonalize) {
                // One modified Gram-Schmidt sweep in the A-inner product.
                for (std::size_t i = 0; i < w_store.cols(); ++i)
                    axpy(-dot(aw_store.col(i), w) / tr.curvatures[i], w_store.col(i), w);
            } else {
                axpy(-dot(prev_aw, z) / prev_curv, prev_w, w);
            }
        }
        if (cfg.trace_capture) tr.z_history.append_column(z);
        if (cfg.store_directions) tr.directions.append_column(w);
        if (cfg.store_residuals) tr.residuals.append_column(r);
        tr.rz_inner.push_back(rz);

        a.apply(w, q);
        const double curv = dot(w, q);
        if (!(curv > 0))
            throw NumericalFailure("apcg_solve: non-positive curvature (w, Aw) at iteration " + std::to_string(j), j);
        const double alpha = dot(r, w) / curv;
        tr.alphas.push_back(alpha);
        tr.curvatures.push_back(curv);

        axpy(alpha, w, x);
        axpy(-alpha, q, r);

        if (cfg.reorthogonalize) {
            w_store.append_column(w);
            aw_store.append_column(q);
            // Keep r orthogonal to C and to every stored direction; x absorbs
            // the same correction so r stays the residual of x.
            if (!d.is_empty()) {
                proj_clock.start();
                d.coarse_correct(r, x);
                proj_clock.stop();
            }
            Vector t = w_store.transpose_times(r);
            for (std::size_t i = 0; i < t.size(); ++i) t[i] /= tr.curvatures[i];
            aw_store.subtract_times(t, r);
            x_pending.resize(t.size(), 0.0);
            for (std::size_t i = 0; i < t.size(); ++i) x_pending[i] -= t[i];
        } else {
            prev_w = w;
            prev_aw = q;
            prev_curv = curv;
        }
        r_norm = norm2(r);
        tr.residual_norms.push_back(r_norm);

        ++j;
        if (cfg.observer) {
            flush_x();
            cfg.observer(j, x);
        }

        rz_prev = rz;
        precondition(r, z);
        rz = dot(r, z);
    }
    flush_x();
    tr.iterations = j;
    if (j > 0) tr.trailing_beta = rz / rz_prev;
    tr.projection_seconds = proj_clock.seconds();
    out.x = std::move(x);
    return out;
}

} // namespace krecycle

#endif
