#include "bench/gen.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace krecycle::bench {

std::vector<std::string> generate_files(const ProblemConfig &problem, std::uint64_t seed, const std::string &out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path root(out_dir);
    const SystemSource source = make_source(problem, seed);
    std::vector<std::string> written, mats, rhs;
    for (std::size_t k = 0; k < problem.systems; ++k) {
        char a_name[32], b_name[32];
        std::snprintf(a_name, sizeof a_name, "A_%03zu.mtx", k + 1);
        std::snprintf(b_name, sizeof b_name, "b_%03zu.mtx", k + 1);
        const LinearSystem sys = source(k);
        {
            std::ofstream out(root / a_name);
            write_matrix_market(out, sys.a);
        }
        {
            std::ofstream out(root / b_name);
            write_matrix_market_vector(out, sys.b);
        }
        mats.push_back(a_name);
        rhs.push_back(b_name);
        written.push_back((root / a_name).string());
        written.push_back((root / b_name).string());
    }
    const fs::path manifest = root / "problem.yaml";
    std::ofstream out(manifest);
    out << "type: files\nmatrices:\n";
    for (const auto &m : mats) out << "  - " << m << "\n";
    out << "rhs:\n";
    for (const auto &r : rhs) out << "  - " << r << "\n";
    written.push_back(manifest.string());
    return written;
}

} // namespace krecycle::bench
