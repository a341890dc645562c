#include "bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

namespace krecycle::bench {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Averages {
    double iterations = 0;      // systems 2..N
    double iterations_all = 0;  // every system
    double nc = 0;
    std::size_t max_nc = 0;
    double selected = 0;
    double solve = 0, aug = 0, update = 0;
};

Averages averages(const SequenceReport &r) {
    Averages a;
    const auto &rec = r.records;
    if (rec.empty()) return a;
    std::size_t tail = 0;
    for (const auto &s : rec) {
        a.iterations_all += static_cast<double>(s.iterations);
        if (s.k >= 1) {
            a.iterations += static_cast<double>(s.iterations);
            ++tail;
        }
        a.nc += static_cast<double>(s.nc_before);
        a.max_nc = std::max(a.max_nc, s.nc_before);
        a.selected += static_cast<double>(s.selected);
        a.solve += s.solve_seconds;
        a.aug += s.augmentation_seconds;
        a.update += s.update_seconds;
    }
    const double n = static_cast<double>(rec.size());
    a.iterations = tail ? a.iterations / static_cast<double>(tail) : a.iterations_all;
    a.iterations_all /= n;
    a.nc /= n;
    a.selected /= n;
    a.solve /= n;
    a.aug /= n;
    a.update /= n;
    return a;
}

void write_dat(const std::filesystem::path &p, const std::string &comment,
               const std::vector<std::pair<double, double>> &rows, const char *yfmt) {
    std::ofstream out(p);
    out << "# " << comment << '\n';
    for (const auto &[x, y] : rows) out << fmt("%g", x) << ' ' << fmt(yfmt, y) << '\n';
}

} // namespace

const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> cols{
        "run",        "strategy",   "epsilon",      "nc_limit",      "preconditioner", "tol",
        "seed",       "k",          "iterations",   "n_c_before",    "n_c_selected",   "n_c_dropped",
        "restarted",  "converged",  "final_residual", "solve_seconds", "augmentation_seconds",
        "update_seconds"};
    return cols;
}

void write_csv(std::ostream &out, const std::vector<RunResult> &results) {
    out << "# " << csv_schema << " rng=" << rng_name << '\n';
    const auto &cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto &r : results) {
        const auto &s = r.spec;
        for (const auto &rec : r.report.records) {
            out << r.spec.name << ',' << to_string(s.strategy.kind) << ','
                << (s.strategy.uses_ritz() ? fmt("%g", s.strategy.epsilon) : std::string()) << ','
                << s.strategy.nc_limit << ',' << to_string(s.preconditioner) << ',' << fmt("%g", s.tol) << ','
                << s.seed << ',' << rec.k + 1 << ',' << rec.iterations << ',' << rec.nc_before << ','
                << rec.selected << ',' << rec.dropped << ',' << (rec.restarted ? 1 : 0) << ','
                << (rec.converged ? 1 : 0) << ',' << fmt("%.6e", rec.final_residual) << ','
                << fmt("%.6f", rec.solve_seconds) << ',' << fmt("%.6f", rec.augmentation_seconds) << ','
                << fmt("%.6f", rec.update_seconds) << '\n';
        }
    }
}

std::vector<std::pair<std::size_t, std::size_t>> overlap_pairs(const std::vector<RunResult> &results) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < results.size(); ++i)
        for (std::size_t j = i + 1; j < results.size(); ++j) {
            const auto &a = results[i].spec, &b = results[j].spec;
            if (!a.strategy.uses_ritz() || !b.strategy.uses_ritz()) continue;
            if (a.preconditioner != b.preconditioner || a.tol != b.tol || a.seed != b.seed) continue;
            out.emplace_back(i, j);
        }
    return out;
}

namespace {

json summary_json(const ExperimentConfig &cfg, const std::vector<RunResult> &results,
                  const std::vector<std::pair<std::size_t, std::size_t>> &pairs,
                  const std::vector<Vector> &overlaps) {
    json root;
    root["schema"] = summary_schema;
    root["rng"] = rng_name;
    root["systems"] = cfg.problem.systems;
    root["all_converged"] = std::all_of(results.begin(), results.end(), [](const RunResult &r) { return r.ok(); });
    json runs = json::array();
    for (const auto &r : results) {
        const auto a = averages(r.report);
        json j;
        j["run"] = r.spec.name;
        j["strategy"] = to_string(r.spec.strategy.kind);
        j["epsilon"] = r.spec.strategy.uses_ritz() ? json(r.spec.strategy.epsilon) : json(nullptr);
        j["nc_limit"] = r.spec.strategy.nc_limit;
        j["preconditioner"] = to_string(r.spec.preconditioner);
        j["tol"] = r.spec.tol;
        j["seed"] = r.spec.seed;
        j["systems_solved"] = r.report.records.size();
        j["converged"] = r.ok();
        j["aborted"] = r.report.aborted || !r.error.empty();
        j["error"] = r.error.empty() ? r.report.abort_message : r.error;
        j["avg_iterations"] = a.iterations;
        j["avg_iterations_all"] = a.iterations_all;
        j["avg_nc"] = a.nc;
        j["max_nc"] = a.max_nc;
        j["avg_selected"] = a.selected;
        j["avg_solve_seconds"] = a.solve;
        j["avg_augmentation_seconds"] = a.aug;
        j["avg_update_seconds"] = a.update;
        j["wall_seconds"] = r.wall_seconds;
        json ev = json::array();
        for (const auto &e : r.report.events) ev.push_back({{"k", e.k + 1}, {"kind", e.kind}, {"detail", e.detail}});
        j["events"] = std::move(ev);
        runs.push_back(std::move(j));
    }
    root["runs"] = std::move(runs);
    json ov = json::array();
    for (std::size_t p = 0; p < pairs.size(); ++p)
        ov.push_back({{"first", results[pairs[p].first].spec.name},
                      {"second", results[pairs[p].second].spec.name},
                      {"singular_values", overlaps[p]}});
    root["overlap"] = std::move(ov);
    return root;
}

std::vector<Vector> compute_overlaps(const std::vector<RunResult> &results,
                                     const std::vector<std::pair<std::size_t, std::size_t>> &pairs) {
    std::vector<Vector> out;
    for (const auto &[i, j] : pairs)
        out.push_back(subspace_overlap(results[i].report.final_basis, results[j].report.final_basis));
    return out;
}

} // namespace

void write_summary(std::ostream &out, const ExperimentConfig &cfg, const std::vector<RunResult> &results) {
    const auto pairs = overlap_pairs(results);
    out << summary_json(cfg, results, pairs, compute_overlaps(results, pairs)).dump(2) << '\n';
}

std::vector<std::string> write_outputs(const std::string &dir, const ExperimentConfig &cfg,
                                       const std::vector<RunResult> &results) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path root(dir);
    std::vector<std::string> written;
    auto track = [&](const fs::path &p) { written.push_back(p.string()); };

    {
        std::ofstream out(root / "report.csv");
        write_csv(out, results);
        track(root / "report.csv");
    }
    const auto pairs = overlap_pairs(results);
    const auto overlaps = compute_overlaps(results, pairs);
    {
        std::ofstream out(root / "summary.json");
        out << summary_json(cfg, results, pairs, overlaps).dump(2) << '\n';
        track(root / "summary.json");
    }
    for (const auto &r : results) {
        std::vector<std::pair<double, double>> it, nc, tm;
        for (const auto &rec : r.report.records) {
            const double k = static_cast<double>(rec.k + 1);
            it.emplace_back(k, static_cast<double>(rec.iterations));
            nc.emplace_back(k, static_cast<double>(rec.nc_before));
            tm.emplace_back(k, rec.solve_seconds + rec.update_seconds);
        }
        const std::string &name = r.spec.name;
        write_dat(root / ("iterations_" + name + ".dat"), "system iterations", it, "%g");
        write_dat(root / ("nc_" + name + ".dat"), "system n_c", nc, "%g");
        write_dat(root / ("time_" + name + ".dat"), "system cpu_seconds", tm, "%.6f");
        track(root / ("iterations_" + name + ".dat"));
        track(root / ("nc_" + name + ".dat"));
        track(root / ("time_" + name + ".dat"));

        if (cfg.write_traces && !r.report.records.empty()) {
            const auto &t = r.report.last_trace;
            json j;
            j["schema"] = trace_schema;
            j["run"] = name;
            j["system"] = r.report.records.back().k + 1;
            j["tol"] = r.spec.tol;
            j["preconditioner"] = to_string(r.spec.preconditioner);
            j["n_c"] = r.report.records.back().nc_before;
            j["iterations"] = t.iterations;
            j["converged"] = t.converged;
            j["alphas"] = t.alphas;
            j["betas"] = t.betas;
            j["trailing_beta"] = number_or_null(t.trailing_beta);
            j["residual_norms"] = t.residual_norms;
            const auto spectrum = known_spectrum(cfg.problem);
            if (spectrum && r.spec.preconditioner == PreconditionerKind::identity &&
                r.report.records.back().nc_before == 0)
                j["eigenvalues"] = *spectrum;
            const fs::path p = root / ("trace_" + name + ".json");
            std::ofstream out(p);
            out << j.dump(1) << '\n';
            track(p);
        }
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        std::vector<std::pair<double, double>> rows;
        for (std::size_t i = 0; i < overlaps[p].size(); ++i)
            rows.emplace_back(static_cast<double>(i + 1), overlaps[p][i]);
        const fs::path f =
            root / ("overlap_" + results[pairs[p].first].spec.name + "__" + results[pairs[p].second].spec.name + ".dat");
        write_dat(f, "index singular_value", rows, "%.12g");
        track(f);
    }
    return written;
}

} // namespace krecycle::bench
