#include "bench/inspect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bench/report.hpp"

namespace krecycle::bench {

namespace {

using json = nlohmann::json;

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string mark(bool b) { return b ? "yes" : "-"; }

void print_trace(const json &j, double epsilon, std::ostream &out) {
    const auto alphas = j.at("alphas").get<Vector>();
    const auto betas = j.at("betas").get<Vector>();
    const double trailing = j.contains("trailing_beta") && j["trailing_beta"].is_number()
                                ? j["trailing_beta"].get<double>()
                                : std::nan("");
    const std::size_t m = alphas.size();
    out << "trace " << j.value("run", std::string("?")) << ": system " << j.value("system", 0) << ", "
        << m << " iterations, converged " << (j.value("converged", false) ? "yes" : "no") << ", n_c "
        << j.value("n_c", 0) << "\n";
    if (m == 0) {
        out << "no iterations; no Ritz spectrum\n";
        return;
    }
    const auto d = analyze_coefficients(alphas, betas, trailing, epsilon);
    out << "ritz spectrum (epsilon " << fmt("%g", epsilon) << "):\n";
    out << "  rank  theta                  stagnated  residual  converged  cluster\n";
    for (std::size_t i = 0; i < m; ++i) {
        const bool in_cluster = d.cluster.found && i >= d.cluster.cluster_begin && i < d.cluster.cluster_end;
        const bool conv = d.stagnated[i] || d.small_residual[i];
        char line[160];
        std::snprintf(line, sizeof line, "  %4zu  %-21.15g  %-9s  %-8s  %-9s  %s\n", i + 1, d.ritz_values[i],
                      mark(d.stagnated[i]).c_str(), mark(d.small_residual[i]).c_str(), mark(conv).c_str(),
                      in_cluster ? "in" : "out");
        out << line;
    }
    std::size_t nconv = 0;
    for (std::size_t i = 0; i < m; ++i) nconv += (d.stagnated[i] || d.small_residual[i]) ? 1 : 0;
    out << "converged ritz values: " << nconv << " of " << m << "\n";
    if (d.cluster.found)
        out << "cluster: ranks " << d.cluster.cluster_begin + 1 << ".." << d.cluster.cluster_end << " ("
            << d.cluster.cluster_end - d.cluster.cluster_begin << " values), " << d.cluster.retained.size()
            << " external\n";
    else
        out << "cluster: none\n";

    if (j.contains("eigenvalues")) {
        auto eig = j["eigenvalues"].get<Vector>();
        std::sort(eig.begin(), eig.end());
        const double tol = j.value("tol", 1e-6);
        const std::size_t p = isolated_pairs(eig);
        const auto pred = predict_iterations(eig, tol, p);
        out << "spectrum: n " << eig.size() << ", kappa " << fmt("%.6g", eig.back() / eig.front())
            << ", isolated pairs " << p << "\n";
        out << "predicted iterations (eps " << fmt("%g", tol) << "): classical " << fmt("%g", pred.n_eps_classical)
            << ", isolated-extremes " << fmt("%g", pred.n_eps_isolated) << "\n";
        out << "observed iterations: " << m << "\n";
    }
}

void print_summary(const json &j, std::ostream &out) {
    out << "summary (" << j.value("schema", std::string("?")) << "), " << j.value("systems", 0) << " systems\n";
    out << "  run                                         avg_it    avg_nc   max_nc  converged\n";
    for (const auto &r : j.at("runs")) {
        char line[200];
        std::snprintf(line, sizeof line, "  %-42s %8.2f  %8.2f  %7lld  %s\n", r.value("run", std::string()).c_str(),
                      r.value("avg_iterations", 0.0), r.value("avg_nc", 0.0),
                      static_cast<long long>(r.value("max_nc", 0)), r.value("converged", false) ? "yes" : "no");
        out << line;
    }
    for (const auto &o : j.value("overlap", json::array())) {
        const auto sv = o.at("singular_values").get<Vector>();
        std::size_t shared = 0, single = 0, zero = 0;
        for (double s : sv) {
            if (s > 1.3) ++shared;
            else if (s > 0.3) ++single;
            else ++zero;
        }
        out << "overlap " << o.value("first", std::string()) << " vs " << o.value("second", std::string()) << ": "
            << shared << " near sqrt2, " << single << " near 1, " << zero << " near 0\n";
    }
    out << "no spectrum data in summary\n";
}

int print_csv(const std::string &path, std::ostream &out, std::ostream &err) {
    std::ifstream in(path);
    std::string line;
    std::map<std::string, std::pair<double, std::size_t>> per_run;
    std::vector<std::string> order;
    std::size_t rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        std::stringstream ss(line);
        std::vector<std::string> f;
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() < 9) {
            err << path << ": malformed row " << rows + 1 << "\n";
            return 2;
        }
        if (!per_run.count(f[0])) order.push_back(f[0]);
        auto &acc = per_run[f[0]];
        acc.first += std::stod(f[8]);
        acc.second += 1;
        ++rows;
    }
    out << "report " << path << ": " << rows << " rows, " << order.size() << " runs\n";
    for (const auto &name : order) {
        const auto &[sum, cnt] = per_run[name];
        out << "  " << name << ": avg iterations " << fmt("%.2f", sum / static_cast<double>(cnt)) << " over " << cnt
            << " systems\n";
    }
    out << "no spectrum data in report\n";
    return 0;
}

} // namespace

TraceDiagnostics analyze_coefficients(std::span<const double> alphas, std::span<const double> betas,
                                      double trailing_beta, double epsilon) {
    TraceDiagnostics d;
    const std::size_t m = alphas.size();
    if (m == 0) return d;
    const TridiagSym h = tridiag_from_coefficients(alphas, betas, m);
    const EigDecomposition eig = tridiag_eig(h);
    d.ritz_values = eig.values;
    RitzSpectrum cur;
    cur.values = eig.values;
    const Vector prev = m >= 2 ? ritz_values(h, m - 1) : Vector{};
    d.stagnated = select_converged(cur, prev, epsilon).converged_mask;
    d.small_residual.assign(m, false);
    if (std::isfinite(trailing_beta) && trailing_beta >= 0) {
        // ||A y - theta y|| in the M^{-1} norm is eta_m |q_m(last)|.
        const double eta = std::sqrt(trailing_beta) / alphas[m - 1];
        for (std::size_t i = 0; i < m; ++i)
            d.small_residual[i] = eta * std::abs(eig.vectors(m - 1, i)) <= epsilon * std::abs(eig.values[i]);
    }
    d.cluster = cluster_segmentation(d.ritz_values, default_min_cluster(m));
    return d;
}

std::size_t isolated_pairs(std::span<const double> ascending) {
    const auto seg = cluster_segmentation(ascending, default_min_cluster(ascending.size()));
    if (!seg.found) return 0;
    const std::size_t low = seg.cluster_begin;
    const std::size_t high = ascending.size() - seg.cluster_end;
    std::size_t p = std::min(low, high);
    while (2 * p >= ascending.size() && p > 0) --p;
    return p;
}

int inspect_artifact(const std::string &path, double epsilon, std::ostream &out, std::ostream &err) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::exists(path, ec)) {
        err << "inspect: no such artifact: " << path << "\n";
        return 2;
    }
    fs::path p(path);
    if (fs::is_directory(p)) {
        if (fs::exists(p / "summary.json")) return inspect_artifact((p / "summary.json").string(), epsilon, out, err);
        if (fs::exists(p / "report.csv")) return inspect_artifact((p / "report.csv").string(), epsilon, out, err);
        err << "inspect: directory holds no summary.json or report.csv: " << path << "\n";
        return 2;
    }
    if (p.extension() == ".csv") return print_csv(path, out, err);
    std::ifstream in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        err << "inspect: " << path << ": not a JSON artifact: " << e.what() << "\n";
        return 2;
    }
    try {
        const std::string schema = j.value("schema", std::string());
        if (schema == trace_schema) {
            print_trace(j, epsilon, out);
            return 0;
        }
        if (schema == summary_schema) {
            print_summary(j, out);
            return 0;
        }
    } catch (const std::exception &e) {
        err << "inspect: " << path << ": " << e.what() << "\n";
        return 2;
    }
    err << "inspect: " << path << ": unknown artifact schema\n";
    return 2;
}

} // namespace krecycle::bench
