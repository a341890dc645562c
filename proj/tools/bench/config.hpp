#pragma once

// Experiment description read from a YAML file. See configs/README.md for the
// format.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "krecycle/krecycle.hpp"

namespace krecycle::bench {

inline constexpr int config_version = 1;

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string &path, std::size_t line, const std::string &msg)
        : std::runtime_error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

enum class ProblemKind { diffusion, spectrum, files };

struct ProblemConfig {
    ProblemKind kind = ProblemKind::diffusion;
    std::size_t systems = 1;

    // diffusion; the seed comes from the run
    InclusionGridSpec grid;

    // spectrum: one fixed operator, right-hand side drawn per system
    Vector eigenvalues;

    // files
    std::vector<std::string> matrices;
    std::vector<std::string> rhs;  // one per matrix, or a single shared one
};

struct ExperimentConfig {
    std::string source_path;
    ProblemConfig problem;
    std::vector<RecycleStrategy> strategies;
    std::vector<PreconditionerKind> preconditioners{PreconditionerKind::jacobi};
    std::vector<double> tols;
    std::size_t max_iters = 1000;
    bool reorthogonalize = true;
    ResidualScale residual_scale = ResidualScale::rhs;
    std::vector<std::uint64_t> seeds{1};
    std::string output_dir = "out";
    bool write_traces = true;
};

ExperimentConfig load_config(const std::string &path);
ExperimentConfig parse_config(const std::string &text, const std::string &path = "<string>");

/// Problem section alone (the `gen` subcommand's input).
ProblemConfig load_problem(const std::string &path, std::uint64_t *seed_out = nullptr);

/// System k of the problem for a given seed. Fixed operators are built once
/// and shared by the returned source.
SystemSource make_source(const ProblemConfig &p, std::uint64_t seed);

/// Eigenvalues of the operator when the problem fixes them (ascending).
std::optional<Vector> known_spectrum(const ProblemConfig &p);

} // namespace krecycle::bench
