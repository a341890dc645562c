#ifndef KRECYCLE_RITZ_PREDICTORS_HPP
#define KRECYCLE_RITZ_PREDICTORS_HPP

/// \file krecycle/ritz/predictors.hpp
/// \brief CG convergence predictors driven by a known spectrum. Diagnostics
///        only; nothing here feeds back into a solve.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "krecycle/errors.hpp"

namespace krecycle {

/// sigma = (sqrt(kappa) - 1) / (sqrt(kappa) + 1)
inline double asymptotic_rate(double kappa) {
    const double s = std::sqrt(kappa);
    return (s - 1) / (s + 1);
}

/// Rate of the sub-spectrum lambda_r .. lambda_s (one-based, ascending,
/// r <= s), kappa = lambda_s / lambda_r.
inline double asymptotic_rate(std::span<const double> ascending, std::size_t r, std::size_t s) {
    detail::require(r >= 1 && r <= s && s <= ascending.size(), "asymptotic_rate: bad index range");
    return asymptotic_rate(ascending[s - 1] / ascending[r - 1]);
}

struct RatePrediction {
    double n_eps_classical = 0;  ///< from the condition number of the whole spectrum
    double n_eps_isolated = 0;   ///< accounting for p isolated low/high pairs
    double sigma = 0;            ///< asymptotic rate of the whole spectrum
    double sigma_central = 0;    ///< rate of the central part lambda_{p+1} .. lambda_{n-p}
};

/// Iteration counts for an energy-norm reduction `eps_cg`.
///
///   classical: ceil( ln(eps/2) / ln sigma_{1,n} )
///   isolated : 2p + ceil( ln(eps/2) / ln sigma_{p+1,n-p}
///                         - sum_i ln( lambda_{n-p+i} / (4 lambda_i) (1 - lambda_i / lambda_{n-p+i}) )
///                           / ln sigma_{p+1,n-p} )
///
/// A single-point (sub)spectrum converges in one iteration.
inline RatePrediction predict_iterations(std::span<const double> ascending, double eps_cg, std::size_t p) {
    const std::size_t n = ascending.size();
    detail::require(n >= 1, "predict_iterations: empty spectrum");
    detail::require(eps_cg > 0 && eps_cg < 1, "predict_iterations: eps_cg must lie in (0, 1)");
    detail::require(2 * p < n, "predict_iterations: need 2p < n");
    for (std::size_t i = 0; i < n; ++i) {
        detail::require(ascending[i] > 0, "predict_iterations: eigenvalues must be positive");
        if (i > 0) detail::require(ascending[i - 1] <= ascending[i], "predict_iterations: spectrum must be ascending");
    }

    auto count = [&](double sigma, double extra_log) -> double {
        if (sigma <= 0) return 1.0;
        return std::max(1.0, std::ceil((std::log(eps_cg / 2) - extra_log) / std::log(sigma)));
    };

    RatePrediction out;
    out.sigma = asymptotic_rate(ascending, 1, n);
    out.n_eps_classical = count(out.sigma, 0.0);

    out.sigma_central = asymptotic_rate(ascending, p + 1, n - p);
    double extra = 0;
    for (std::size_t i = 1; i <= p; ++i) {
        const double lo = ascending[i - 1];
        const double hi = ascending[n - p + i - 1];
        extra += std::log(hi / (4 * lo) * (1 - lo / hi));
    }
    out.n_eps_isolated = static_cast<double>(2 * p) + count(out.sigma_central, extra);
    return out;
}

/// Per-iteration energy-norm contraction bound F_{i,l,r} * 2 * sigma_{l+1,n-r}
/// once the l smallest and r largest Ritz values approximate the extreme
/// eigenvalues.
///
/// `ascending` is the exact spectrum; `ritz_ascending` the Ritz values of
/// H_i. The j-th smallest Ritz value stands in for lambda_j and the j-th
/// largest for lambda_{n+1-j}. Returns +inf when a Ritz value coincides with
/// an eigenvalue used in a denominator.
inline double instantaneous_rate(std::span<const double> ascending, std::span<const double> ritz_ascending,
                                 std::size_t l, std::size_t r) {
    const std::size_t n = ascending.size();
    const std::size_t i = ritz_ascending.size();
    detail::require(l + r <= i, "instantaneous_rate: need l + r <= i");
    detail::require(l + r < n, "instantaneous_rate: deflated spectrum would be empty");
    const double inf = std::numeric_limits<double>::infinity();

    const std::size_t lo = l + 1, hi = n - r;  // remaining spectrum, one-based

    double j_max = 1.0;
    if (l > 0) {
        j_max = 0;
        for (std::size_t lp = lo; lp <= hi; ++lp) {
            const double lam = ascending[lp - 1];
            double prod = 1;
            for (std::size_t jj = 1; jj <= l; ++jj) {
                const double denom = std::abs(1 - lam / ritz_ascending[jj - 1]);
                if (denom == 0) return inf;
                prod *= std::abs(1 - lam / ascending[jj - 1]) / denom;
            }
            j_max = std::max(j_max, prod);
        }
    }
    double l_max = 1.0;
    if (r > 0) {
        l_max = 0;
        for (std::size_t idx = lo; idx <= hi; ++idx) {
            const double lam = ascending[idx - 1];
            double prod = 1;
            for (std::size_t jj = 1; jj <= r; ++jj) {
                const double denom = std::abs(1 - lam / ritz_ascending[i - jj]);
                if (denom == 0) return inf;
                prod *= std::abs(1 - lam / ascending[n - jj]) / denom;
            }
            l_max = std::max(l_max, prod);
        }
    }
    return j_max * l_max * 2 * asymptotic_rate(ascending, lo, hi);
}

} // namespace krecycle

#endif
