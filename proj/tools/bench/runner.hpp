#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bench/config.hpp"

namespace krecycle::bench {

/// One cell of the experiment grid.
struct RunSpec {
    std::size_t index = 0;
    std::string name;
    RecycleStrategy strategy;
    PreconditionerKind preconditioner = PreconditionerKind::jacobi;
    double tol = 1e-6;
    std::uint64_t seed = 1;
};

struct RunResult {
    RunSpec spec;
    SequenceReport report;
    std::string error;  ///< set when the run died outside the solver
    double wall_seconds = 0;

    bool ok() const { return error.empty() && report.all_converged(); }
};

std::vector<RunSpec> expand_runs(const ExperimentConfig &cfg);

/// Runs every cell, `jobs` at a time. Results come back in grid order
/// whatever the scheduling.
std::vector<RunResult> run_experiment(const ExperimentConfig &cfg, std::size_t jobs = 1);

RunResult run_one(const ExperimentConfig &cfg, const RunSpec &spec);

} // namespace krecycle::bench
