#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bench/config.hpp"
#include "bench/gen.hpp"
#include "bench/inspect.hpp"
#include "bench/report.hpp"
#include "bench/runner.hpp"

using namespace krecycle;
namespace kb = krecycle::bench;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char *small_config = R"(version: 1
problem:
  type: diffusion
  systems: 4
  grid: [12, 12]
  inclusions:
    per_axis: [2, 2]
    size: 3
  inclusion_coeff: 1000.0
strategies:
  - none
  - trks
  - {kind: srks, epsilon: 1.0e-14}
  - {kind: srks_cluster, epsilon: 1.0e-10}
preconditioners: [jacobi]
tol: [1.0e-6]
max_iters: 500
seeds: [3]
)";

fs::path scratch(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("krecycle_bench_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Drops the trailing timing columns of every CSV line.
std::string strip_timing(const std::string &csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) {
            out += line + '\n';
            continue;
        }
        for (std::size_t c = 0; c < kb::csv_timing_columns; ++c) line.erase(line.rfind(','));
        out += line + '\n';
    }
    return out;
}

json strip_summary(json j) {
    for (auto &r : j["runs"])
        for (const char *k : {"avg_solve_seconds", "avg_augmentation_seconds", "avg_update_seconds", "wall_seconds"})
            r.erase(k);
    return j;
}

void check_golden(const std::string &name, const std::string &actual) {
    const fs::path golden = fs::path(KRECYCLE_SOURCE_DIR) / "tests" / "golden" / name;
    if (std::getenv("KRECYCLE_UPDATE_GOLDEN")) {
        std::ofstream(golden) << actual;
        GTEST_SKIP() << "golden file rewritten: " << golden;
    }
    ASSERT_TRUE(fs::exists(golden)) << golden;
    EXPECT_EQ(actual, slurp(golden)) << name;
}

kb::ConfigError config_error(const std::string &text) {
    try {
        kb::parse_config(text, "exp.yaml");
    } catch (const kb::ConfigError &e) {
        return e;
    }
    return kb::ConfigError("", 0, "no error");
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(KRECYCLE_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Config, ParsesSmallConfig) {
    const auto cfg = kb::parse_config(small_config);
    EXPECT_EQ(cfg.problem.systems, 4u);
    EXPECT_EQ(cfg.problem.grid.dims, (std::array<std::size_t, 3>{12, 12, 1}));
    EXPECT_EQ(cfg.problem.grid.inclusions.size(), 4u);
    EXPECT_EQ(cfg.problem.grid.inclusion_coeff_mean, 1000.0);
    ASSERT_EQ(cfg.strategies.size(), 4u);
    EXPECT_EQ(cfg.strategies[2].kind, RecycleKind::srks);
    EXPECT_EQ(cfg.strategies[3].epsilon, 1e-10);
    EXPECT_EQ(cfg.tols, (std::vector<double>{1e-6}));
    EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{3}));
    EXPECT_EQ(kb::expand_runs(cfg).size(), 4u);
}

TEST(Config, ErrorsCarryPathAndLine) {
    auto e = config_error("version: 1\nproblem: {type: diffusion}\nstrategies: [none]\ntol: [2.0]\n");
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("exp.yaml:4"), std::string::npos) << e.what();

    e = config_error("version: 1\nproblem:\n  type: diffusion\n  gird: [4, 4]\nstrategies: [none]\ntol: [1e-6]\n");
    EXPECT_EQ(e.line(), 4u) << e.what();

    e = config_error("version: 1\nproblem: {type: diffusion}\nstrategies:\n  - {kind: gmres}\ntol: [1e-6]\n");
    EXPECT_EQ(e.line(), 4u) << e.what();

    e = config_error("version: 1\nproblem: {type: diffusion}\nstrategies: []\ntol: [1e-6]\n");
    EXPECT_EQ(e.line(), 3u) << e.what();

    e = config_error("version: 2\nproblem: {type: diffusion}\nstrategies: [none]\ntol: [1e-6]\n");
    EXPECT_EQ(e.line(), 1u) << e.what();

    e = config_error("version: 1\nproblem: {type: diffusion\n");
    EXPECT_GT(e.line(), 0u) << e.what();

    EXPECT_THROW(kb::load_config("/nonexistent/exp.yaml"), kb::ConfigError);
}

TEST(Config, SpectrumGroups) {
    const auto cfg = kb::parse_config(R"(problem:
  type: spectrum
  systems: 2
  eigenvalue_groups:
    - {from: 0.001, count: 1}
    - {from: 1, to: 2, count: 5}
    - {from: 100, to: 1000, count: 2, spacing: geometric}
strategies: [none]
tol: [1.0e-8]
)");
    const auto spec = kb::known_spectrum(cfg.problem);
    ASSERT_TRUE(spec.has_value());
    ASSERT_EQ(spec->size(), 8u);
    EXPECT_DOUBLE_EQ((*spec)[0], 0.001);
    EXPECT_DOUBLE_EQ((*spec)[3], 1.5);
    EXPECT_DOUBLE_EQ((*spec)[7], 1000);
}

TEST(Run, SingleSystemGivesOneRow) {
    auto cfg = kb::parse_config(R"(problem: {type: diffusion, systems: 1, grid: [6, 6]}
strategies: [none]
tol: [1.0e-6]
)");
    const auto dir = scratch("one");
    cfg.output_dir = dir.string();
    const auto results = kb::run_experiment(cfg);
    kb::write_outputs(cfg.output_dir, cfg, results);
    std::ifstream in(dir / "report.csv");
    std::string line;
    std::size_t rows = 0;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("# krecycle-report/1", 0), 0u);
    std::getline(in, line);
    EXPECT_EQ(line.rfind("run,strategy,", 0), 0u);
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 1u);
    EXPECT_TRUE(results[0].ok());
    fs::remove_all(dir);
}

TEST(Run, DeterministicExceptTiming) {
    auto cfg = kb::parse_config(small_config);
    const auto d1 = scratch("det1"), d2 = scratch("det2");
    kb::write_outputs(d1.string(), cfg, kb::run_experiment(cfg, 1));
    kb::write_outputs(d2.string(), cfg, kb::run_experiment(cfg, 3));
    EXPECT_EQ(strip_timing(slurp(d1 / "report.csv")), strip_timing(slurp(d2 / "report.csv")));
    EXPECT_EQ(strip_summary(json::parse(slurp(d1 / "summary.json"))),
              strip_summary(json::parse(slurp(d2 / "summary.json"))));
    for (const char *f : {"iterations_", "nc_"})
        for (const auto &r : kb::expand_runs(cfg))
            EXPECT_EQ(slurp(d1 / (f + r.name + ".dat")), slurp(d2 / (f + r.name + ".dat")));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST(Run, OutputsAndOverlap) {
    auto cfg = kb::parse_config(small_config);
    const auto dir = scratch("outputs");
    const auto results = kb::run_experiment(cfg);
    const auto files = kb::write_outputs(dir.string(), cfg, results);
    const auto summary = json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(summary["schema"], kb::summary_schema);
    ASSERT_EQ(summary["runs"].size(), 4u);
    ASSERT_EQ(summary["overlap"].size(), 1u);
    EXPECT_FALSE(summary["overlap"][0]["singular_values"].empty());
    for (const auto &r : results) {
        EXPECT_TRUE(fs::exists(dir / ("iterations_" + r.spec.name + ".dat")));
        EXPECT_TRUE(fs::exists(dir / ("time_" + r.spec.name + ".dat")));
        EXPECT_TRUE(fs::exists(dir / ("trace_" + r.spec.name + ".json")));
    }
    const auto &runs = summary["runs"];
    EXPECT_LT(runs[1]["avg_iterations"].get<double>(), runs[0]["avg_iterations"].get<double>());
    fs::remove_all(dir);
}

TEST(Golden, ReportAndSummary) {
    auto cfg = kb::parse_config(small_config);
    const auto dir = scratch("golden");
    kb::write_outputs(dir.string(), cfg, kb::run_experiment(cfg));
    const std::string csv = strip_timing(slurp(dir / "report.csv"));
    const std::string summary = strip_summary(json::parse(slurp(dir / "summary.json"))).dump(2) + "\n";
    fs::remove_all(dir);
    check_golden("small_report.csv", csv);
    check_golden("small_summary.json", summary);
}

TEST(Inspect, FullyConvergedDiagonalTrace) {
    const auto a = SparseSpdMatrix::diagonal_matrix(Vector{1, 4});
    auto sc = SolveConfig{};
    sc.tol = 1e-14;
    const auto res = apcg_solve(a, Preconditioner::identity(), DeflationOperator::empty(2), Vector{1, 1}, sc);
    const auto d = kb::analyze_coefficients(res.trace.alphas, res.trace.betas, res.trace.trailing_beta, 1e-8);
    ASSERT_EQ(d.ritz_values.size(), 2u);
    EXPECT_NEAR(d.ritz_values[0], 4, 1e-12);
    EXPECT_TRUE(d.small_residual[0]);
    EXPECT_TRUE(d.small_residual[1]);
}

TEST(Inspect, SummaryWithoutSpectrum) {
    const auto dir = scratch("inspect_summary");
    std::ofstream(dir / "summary.json") << R"({"schema": "krecycle-summary/1", "systems": 1, "runs": []})";
    std::ostringstream out, err;
    EXPECT_EQ(kb::inspect_artifact((dir / "summary.json").string(), 1e-6, out, err), 0);
    EXPECT_NE(out.str().find("no spectrum data"), std::string::npos);
    EXPECT_EQ(kb::inspect_artifact(dir.string(), 1e-6, out, err), 0);
    fs::remove_all(dir);
}

TEST(Inspect, MissingArtifactFails) {
    std::ostringstream out, err;
    EXPECT_NE(kb::inspect_artifact("/nonexistent/trace.json", 1e-6, out, err), 0);
    EXPECT_NE(err.str().find("no such artifact"), std::string::npos);
}

TEST(Inspect, PrescribedSpectrumPredictions) {
    auto cfg = kb::parse_config(R"(problem:
  type: spectrum
  systems: 1
  eigenvalue_groups:
    - {from: 0.02, to: 0.06, count: 3}
    - {from: 1, to: 2, count: 150}
    - {from: 20, to: 60, count: 3}
strategies: [none]
preconditioners: [none]
tol: [1.0e-8]
max_iters: 1000
seeds: [2]
)");
    const auto dir = scratch("inspect_spectrum");
    cfg.output_dir = dir.string();
    const auto results = kb::run_experiment(cfg);
    kb::write_outputs(cfg.output_dir, cfg, results);
    const auto name = results[0].spec.name;
    std::ostringstream out, err;
    ASSERT_EQ(kb::inspect_artifact((dir / ("trace_" + name + ".json")).string(), 1e-8, out, err), 0) << err.str();
    EXPECT_NE(out.str().find("predicted iterations"), std::string::npos) << out.str();

    const auto spec = *kb::known_spectrum(cfg.problem);
    const std::size_t p = kb::isolated_pairs(spec);
    EXPECT_EQ(p, 3u);
    const auto pred = predict_iterations(spec, 1e-8, p);
    const double observed = static_cast<double>(results[0].report.records[0].iterations);
    EXPECT_LE(observed, pred.n_eps_classical);
    EXPECT_LE(observed, pred.n_eps_isolated + 3);
    fs::remove_all(dir);
}

TEST(Gen, RoundTripThroughFilesProblem) {
    const auto dir = scratch("gen");
    std::ofstream(dir / "spec.yaml") << "type: diffusion\nsystems: 3\ngrid: [7, 5]\nrel_std: 0.2\nseed: 4\n";
    std::uint64_t seed = 0;
    const auto problem = kb::load_problem((dir / "spec.yaml").string(), &seed);
    EXPECT_EQ(seed, 4u);
    const auto files = kb::generate_files(problem, seed, (dir / "mtx").string());
    EXPECT_EQ(files.size(), 7u);
    const auto back = kb::load_problem((dir / "mtx" / "problem.yaml").string());
    ASSERT_EQ(back.systems, 3u);
    const auto src = kb::make_source(problem, seed), src2 = kb::make_source(back, 0);
    for (std::size_t k = 0; k < 3; ++k) {
        const auto s1 = src(k), s2 = src2(k);
        EXPECT_TRUE(std::ranges::equal(s1.a.values(), s2.a.values()));
        EXPECT_EQ(s1.b, s2.b);
    }
    fs::remove_all(dir);
}

TEST(Cli, ExitStatuses) {
    const auto dir = scratch("cli");
    std::ofstream(dir / "ok.yaml") << "problem: {type: diffusion, systems: 2, grid: [6, 6]}\nstrategies: [none, trks]\n"
                                      "tol: [1.0e-6]\n";
    std::ofstream(dir / "short.yaml") << "problem: {type: diffusion, systems: 2, grid: [6, 6]}\nstrategies: [none]\n"
                                         "tol: [1.0e-10]\nmax_iters: 2\n";
    std::ofstream(dir / "bad.yaml") << "problem: {type: diffusion}\nstrategies: [none]\n";
    EXPECT_EQ(run_cli("run --config " + (dir / "ok.yaml").string() + " --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "report.csv"));
    EXPECT_EQ(run_cli("inspect " + (dir / "out").string()), 0);
    EXPECT_EQ(run_cli("run --config " + (dir / "short.yaml").string() + " --out " + (dir / "out2").string()), 1);
    EXPECT_NE(run_cli("run --config " + (dir / "bad.yaml").string()), 0);
    EXPECT_NE(run_cli("inspect " + (dir / "missing.json").string()), 0);
    EXPECT_NE(run_cli("frobnicate"), 0);
    fs::remove_all(dir);
}
