#include "bench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>

namespace krecycle::bench {

namespace {

std::string run_name(const RunSpec &s) {
    std::string name(to_string(s.strategy.kind));
    char buf[64];
    if (s.strategy.uses_ritz()) {
        std::snprintf(buf, sizeof buf, "-e%g", s.strategy.epsilon);
        name += buf;
    }
    if (s.strategy.nc_limit > 0) name += "-lim" + std::to_string(s.strategy.nc_limit);
    if (s.strategy.min_cluster > 0) name += "-mc" + std::to_string(s.strategy.min_cluster);
    std::snprintf(buf, sizeof buf, "_%s_tol%g_s%llu", std::string(to_string(s.preconditioner)).c_str(), s.tol,
                  static_cast<unsigned long long>(s.seed));
    name += buf;
    return name;
}

} // namespace

std::vector<RunSpec> expand_runs(const ExperimentConfig &cfg) {
    std::vector<RunSpec> runs;
    for (double tol : cfg.tols)
        for (auto pre : cfg.preconditioners)
            for (const auto &st : cfg.strategies)
                for (auto seed : cfg.seeds) {
                    RunSpec r;
                    r.index = runs.size();
                    r.strategy = st;
                    r.preconditioner = pre;
                    r.tol = tol;
                    r.seed = seed;
                    r.name = run_name(r);
                    runs.push_back(r);
                }
    return runs;
}

RunResult run_one(const ExperimentConfig &cfg, const RunSpec &spec) {
    RunResult out;
    out.spec = spec;
    const double t0 = wall_seconds();
    try {
        SolveConfig sc;
        sc.tol = spec.tol;
        sc.max_iters = cfg.max_iters;
        sc.reorthogonalize = cfg.reorthogonalize;
        sc.residual_scale = cfg.residual_scale;
        SequenceOptions opts;
        opts.keep_final_basis = spec.strategy.uses_ritz();
        const SystemSource source = make_source(cfg.problem, spec.seed);
        out.report = run_sequence(source, cfg.problem.systems, fixed_preconditioner(spec.preconditioner),
                                  spec.strategy, sc, DenseBlock(), opts);
    } catch (const std::exception &e) {
        out.error = e.what();
    }
    out.wall_seconds = wall_seconds() - t0;
    return out;
}

std::vector<RunResult> run_experiment(const ExperimentConfig &cfg, std::size_t jobs) {
    const auto runs = expand_runs(cfg);
    std::vector<RunResult> results(runs.size());
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, runs.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) results[i] = run_one(cfg, runs[i]);
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }
    return results;
}

} // namespace krecycle::bench
