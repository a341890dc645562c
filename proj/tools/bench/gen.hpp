#pragma once

#include <string>
#include <vector>

#include "bench/config.hpp"

namespace krecycle::bench {

/// Writes every system of the problem as A_<k>.mtx / b_<k>.mtx plus a
/// problem.yaml that reads them back as a `files` problem.
std::vector<std::string> generate_files(const ProblemConfig &problem, std::uint64_t seed, const std::string &out_dir);

} // namespace krecycle::bench
