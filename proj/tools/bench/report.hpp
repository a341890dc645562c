#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bench/runner.hpp"

namespace krecycle::bench {

inline constexpr const char *csv_schema = "krecycle-report/1";
inline constexpr const char *trace_schema = "krecycle-trace/1";
inline constexpr const char *summary_schema = "krecycle-summary/1";

/// Column names, in order. The last `csv_timing_columns` are timings.
const std::vector<std::string> &csv_columns();
inline constexpr std::size_t csv_timing_columns = 3;

void write_csv(std::ostream &out, const std::vector<RunResult> &results);
void write_summary(std::ostream &out, const ExperimentConfig &cfg, const std::vector<RunResult> &results);

/// Pairs of Ritz-based runs that share preconditioner, tolerance and seed.
std::vector<std::pair<std::size_t, std::size_t>> overlap_pairs(const std::vector<RunResult> &results);

/// Writes report.csv, summary.json, the .dat curves and trace files into
/// `dir` (created if needed). Returns the files written.
std::vector<std::string> write_outputs(const std::string &dir, const ExperimentConfig &cfg,
                                       const std::vector<RunResult> &results);

} // namespace krecycle::bench
