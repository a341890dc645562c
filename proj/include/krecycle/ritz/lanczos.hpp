#ifndef KRECYCLE_RITZ_LANCZOS_HPP
#define KRECYCLE_RITZ_LANCZOS_HPP

/// \file krecycle/ritz/lanczos.hpp
/// \brief Lanczos tridiagonal and basis recovered from CG coefficients, and
///        the Ritz pairs they define.
///
/// With alpha_j, beta_j from the solve (beta_j forming w_j from w_{j-1}):
///
///     delta_0 = 1 / alpha_0
///     delta_j = 1 / alpha_j + beta_j / alpha_{j-1}
///     eta_j   = sqrt(beta_{j+1}) / alpha_j
///     V_m     = [ (-1)^j z_j / (r_j, z_j)^{1/2} ]
///
/// so that H_m = V_m^T A V_m and, without augmentation, V_m^T M V_m = I.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/dense.hpp"
#include "krecycle/linalg/eigen.hpp"
#include "krecycle/solver/apcg.hpp"

namespace krecycle {

struct LanczosView {
    TridiagSym tridiag;
    DenseBlock basis;

    std::size_t size() const noexcept { return tridiag.size(); }
};

/// Ritz values descending with matching Ritz vectors. `converged_mask` is
/// empty until `select_converged` fills it.
struct RitzSpectrum {
    Vector values;
    DenseBlock vectors;
    std::vector<bool> converged_mask;
    double epsilon = 0;

    std::size_t size() const noexcept { return values.size(); }

    std::vector<std::size_t> converged_indices() const {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < converged_mask.size(); ++j)
            if (converged_mask[j]) idx.push_back(j);
        return idx;
    }
};

/// H_m from the first m coefficients. `betas` needs at least m-1 entries.
inline TridiagSym tridiag_from_coefficients(std::span<const double> alphas, std::span<const double> betas,
                                            std::size_t m) {
    detail::require(m >= 1, "tridiag_from_coefficients: need at least one iteration");
    detail::require(alphas.size() >= m && betas.size() + 1 >= m,
                    "tridiag_from_coefficients: not enough coefficients");
    TridiagSym t;
    t.diag.resize(m);
    t.offdiag.resize(m - 1);
    for (std::size_t j = 0; j < m; ++j) {
        if (!(alphas[j] > 0))
            throw NumericalFailure("lanczos recovery: alpha_" + std::to_string(j) + " is not positive", j);
        t.diag[j] = 1.0 / alphas[j];
        if (j > 0) t.diag[j] += betas[j - 1] / alphas[j - 1];
        if (j + 1 < m) {
            if (betas[j] < 0)
                throw NumericalFailure("lanczos recovery: beta_" + std::to_string(j + 1) + " is negative", j + 1);
            t.offdiag[j] = std::sqrt(betas[j]) / alphas[j];
        }
    }
    return t;
}

inline LanczosView lanczos_from_trace(const SolveTrace &trace) {
    const std::size_t m = trace.iterations;
    detail::require(m >= 1, "lanczos_from_trace: trace has no iterations");
    detail::require(trace.z_history.cols() == m, "lanczos_from_trace: trace was captured without z history");
    LanczosView view;
    view.tridiag = tridiag_from_coefficients(trace.alphas, trace.betas, m);
    view.basis = DenseBlock(trace.z_history.rows(), m);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(trace.rz_inner[j]);
        auto src = trace.z_history.col(j);
        auto dst = view.basis.col(j);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = s * src[i];
    }
    return view;
}

/// Ritz values of the leading k x k block, descending.
inline Vector ritz_values(const TridiagSym &t, std::size_t k) { return tridiag_eigenvalues(t.leading(k)); }

inline RitzSpectrum ritz_pairs(const LanczosView &view) {
    detail::require(view.size() >= 1 && view.basis.cols() == view.size(),
                    "ritz_pairs: basis column count must equal the tridiagonal dimension");
    EigDecomposition eig = tridiag_eig(view.tridiag);
    RitzSpectrum out;
    out.values = std::move(eig.values);
    out.vectors = product(view.basis, eig.vectors);
    return out;
}

/// Ritz values only, straight from the coefficients (no vectors needed).
inline RitzSpectrum ritz_values_from_trace(const SolveTrace &trace) {
    RitzSpectrum out;
    if (trace.iterations == 0) return out;
    out.values = tridiag_eigenvalues(tridiag_from_coefficients(trace.alphas, trace.betas, trace.iterations));
    return out;
}

} // namespace krecycle

#endif
