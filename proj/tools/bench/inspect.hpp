#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "krecycle/krecycle.hpp"

namespace krecycle::bench {

struct TraceDiagnostics {
    Vector ritz_values;             ///< descending
    std::vector<bool> stagnated;    ///< stagnation test against H_{m-1}
    std::vector<bool> small_residual;  ///< Lanczos residual bound <= epsilon |theta|
    ClusterSegmentation cluster;
};

/// Ritz analysis of recorded CG coefficients. `trailing_beta` may be NaN
/// (no residual bound then).
TraceDiagnostics analyze_coefficients(std::span<const double> alphas, std::span<const double> betas,
                                      double trailing_beta, double epsilon);

/// Number of isolated pairs: min(low externals, high externals) of the
/// cluster segmentation.
std::size_t isolated_pairs(std::span<const double> ascending);

/// Prints diagnostics for a trace, summary, report or output directory.
/// Returns the process exit status.
int inspect_artifact(const std::string &path, double epsilon, std::ostream &out, std::ostream &err);

} // namespace krecycle::bench
