#include "bench/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace krecycle::bench {

namespace {

struct Ctx {
    std::string path;

    [[noreturn]] void fail(const YAML::Node &n, const std::string &msg) const {
        const auto mark = n.Mark();
        throw ConfigError(path, mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0, msg);
    }

    template <class T>
    T as(const YAML::Node &n, const char *what) const {
        try {
            return n.as<T>();
        } catch (const YAML::Exception &) {
            fail(n, std::string("bad value for '") + what + "'");
        }
    }

    void check_keys(const YAML::Node &map, std::initializer_list<const char *> allowed, const char *section) const {
        if (!map.IsMap()) fail(map, std::string("'") + section + "' must be a mapping");
        for (const auto &kv : map) {
            const auto key = kv.first.as<std::string>();
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; }))
                fail(kv.first, "unknown key '" + key + "' in " + section);
        }
    }

    std::size_t count(const YAML::Node &n, const char *what) const {
        const auto v = as<long long>(n, what);
        if (v < 0) fail(n, std::string("'") + what + "' must be nonnegative");
        return static_cast<std::size_t>(v);
    }

    std::array<std::size_t, 3> dims3(const YAML::Node &n, const char *what) const {
        if (!n.IsSequence() || n.size() < 2 || n.size() > 3) fail(n, std::string("'") + what + "' needs 2 or 3 entries");
        std::array<std::size_t, 3> d{1, 1, 1};
        for (std::size_t i = 0; i < n.size(); ++i) d[i] = count(n[i], what);
        return d;
    }

    std::vector<double> doubles(const YAML::Node &n, const char *what) const {
        std::vector<double> out;
        if (n.IsSequence())
            for (const auto &e : n) out.push_back(as<double>(e, what));
        else
            out.push_back(as<double>(n, what));
        return out;
    }

    std::vector<std::string> strings(const YAML::Node &n, const char *what) const {
        std::vector<std::string> out;
        if (n.IsSequence())
            for (const auto &e : n) out.push_back(as<std::string>(e, what));
        else
            out.push_back(as<std::string>(n, what));
        return out;
    }
};

std::string resolve(const std::string &base, const std::string &rel) {
    if (rel.empty() || rel[0] == '/') return rel;
    const auto slash = base.find_last_of('/');
    if (slash == std::string::npos) return rel;
    return base.substr(0, slash + 1) + rel;
}

ProblemConfig parse_problem(const Ctx &cx, const YAML::Node &n) {
    cx.check_keys(n,
                  {"type", "systems", "grid", "inclusions", "matrix_coeff", "inclusion_coeff", "rel_std",
                   "eigenvalues", "eigenvalue_groups", "matrices", "rhs"},
                  "problem");
    ProblemConfig p;
    const std::string type = n["type"] ? cx.as<std::string>(n["type"], "type") : "diffusion";
    if (n["systems"]) p.systems = cx.count(n["systems"], "systems");
    if (p.systems == 0) cx.fail(n["systems"], "'systems' must be at least 1");

    if (type == "diffusion") {
        p.kind = ProblemKind::diffusion;
        if (n["grid"]) p.grid.dims = cx.dims3(n["grid"], "grid");
        if (n["matrix_coeff"]) p.grid.matrix_coeff_mean = cx.as<double>(n["matrix_coeff"], "matrix_coeff");
        if (n["inclusion_coeff"]) p.grid.inclusion_coeff_mean = cx.as<double>(n["inclusion_coeff"], "inclusion_coeff");
        if (n["rel_std"]) p.grid.rel_std = cx.as<double>(n["rel_std"], "rel_std");
        if (const auto inc = n["inclusions"]) {
            if (inc.IsMap()) {
                cx.check_keys(inc, {"per_axis", "size"}, "inclusions");
                if (!inc["per_axis"] || !inc["size"]) cx.fail(inc, "inclusions need 'per_axis' and 'size'");
                auto per = cx.dims3(inc["per_axis"], "per_axis");
                for (auto &v : per)
                    if (v == 0) cx.fail(inc["per_axis"], "'per_axis' entries must be positive");
                p.grid.inclusions = InclusionGridSpec::regular_layout(p.grid.dims, per, cx.count(inc["size"], "size"));
            } else if (inc.IsSequence()) {
                for (const auto &b : inc) {
                    cx.check_keys(b, {"lo", "hi"}, "inclusion block");
                    CellBlock blk;
                    blk.lo = cx.dims3(b["lo"], "lo");
                    blk.hi = cx.dims3(b["hi"], "hi");
                    if (b["lo"].size() == 2) blk.lo[2] = 0;
                    p.grid.inclusions.push_back(blk);
                }
            } else {
                cx.fail(inc, "'inclusions' must be a mapping or a list of blocks");
            }
        }
        try {
            p.grid.validate();
        } catch (const ContractViolation &e) {
            cx.fail(n, e.what());
        }
    } else if (type == "spectrum") {
        p.kind = ProblemKind::spectrum;
        if (n["eigenvalues"]) p.eigenvalues = cx.doubles(n["eigenvalues"], "eigenvalues");
        if (const auto groups = n["eigenvalue_groups"]) {
            if (!groups.IsSequence()) cx.fail(groups, "'eigenvalue_groups' must be a list");
            for (const auto &g : groups) {
                cx.check_keys(g, {"from", "to", "count", "spacing"}, "eigenvalue group");
                const double from = cx.as<double>(g["from"], "from");
                const double to = g["to"] ? cx.as<double>(g["to"], "to") : from;
                const std::size_t cnt = cx.count(g["count"], "count");
                const std::string spacing = g["spacing"] ? cx.as<std::string>(g["spacing"], "spacing") : "linear";
                if (spacing != "linear" && spacing != "geometric") cx.fail(g["spacing"], "spacing must be linear or geometric");
                if (!(from > 0 && to > 0)) cx.fail(g, "eigenvalues must be positive");
                for (std::size_t i = 0; i < cnt; ++i) {
                    const double t = cnt == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(cnt - 1);
                    p.eigenvalues.push_back(spacing == "linear" ? from + t * (to - from)
                                                                : from * std::pow(to / from, t));
                }
            }
        }
        if (p.eigenvalues.empty()) cx.fail(n, "spectrum problem needs 'eigenvalues' or 'eigenvalue_groups'");
        if (p.eigenvalues.size() > max_prescribed_dimension) cx.fail(n, "spectrum problem larger than 500");
        for (double v : p.eigenvalues)
            if (!(v > 0)) cx.fail(n, "eigenvalues must be positive");
    } else if (type == "files") {
        p.kind = ProblemKind::files;
        if (!n["matrices"]) cx.fail(n, "files problem needs 'matrices'");
        p.matrices = cx.strings(n["matrices"], "matrices");
        if (n["rhs"]) p.rhs = cx.strings(n["rhs"], "rhs");
        for (auto &m : p.matrices) m = resolve(cx.path, m);
        for (auto &r : p.rhs) r = resolve(cx.path, r);
        if (!p.rhs.empty() && p.rhs.size() != 1 && p.rhs.size() != p.matrices.size())
            cx.fail(n["rhs"], "'rhs' needs one entry or one per matrix");
        p.systems = p.matrices.size();
    } else {
        cx.fail(n["type"], "unknown problem type '" + type + "'");
    }
    return p;
}

RecycleStrategy parse_strategy(const Ctx &cx, const YAML::Node &n) {
    RecycleStrategy s;
    if (n.IsScalar()) {
        try {
            s.kind = recycle_kind_from_string(n.as<std::string>());
        } catch (const ContractViolation &e) {
            cx.fail(n, e.what());
        }
        return s;
    }
    cx.check_keys(n, {"kind", "epsilon", "nc_limit", "min_cluster"}, "strategy");
    if (!n["kind"]) cx.fail(n, "strategy needs 'kind'");
    try {
        s.kind = recycle_kind_from_string(cx.as<std::string>(n["kind"], "kind"));
    } catch (const ContractViolation &e) {
        cx.fail(n["kind"], e.what());
    }
    if (n["epsilon"]) s.epsilon = cx.as<double>(n["epsilon"], "epsilon");
    if (n["nc_limit"]) s.nc_limit = cx.count(n["nc_limit"], "nc_limit");
    if (n["min_cluster"]) s.min_cluster = cx.count(n["min_cluster"], "min_cluster");
    if (s.uses_ritz() && !(s.epsilon > 0)) cx.fail(n["epsilon"], "epsilon must be positive");
    return s;
}

YAML::Node load_yaml(const std::string &text, const std::string &path) {
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException &e) {
        throw ConfigError(path, static_cast<std::size_t>(e.mark.line) + 1, e.msg);
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ExperimentConfig parse_config(const std::string &text, const std::string &path) {
    Ctx cx{path};
    const YAML::Node root = load_yaml(text, path);
    if (!root.IsMap()) throw ConfigError(path, 1, "top level must be a mapping");
    cx.check_keys(root,
                  {"version", "problem", "strategies", "preconditioners", "tol", "max_iters", "reorthogonalize",
                   "residual_scale", "seeds", "output_dir", "write_traces"},
                  "config");
    ExperimentConfig c;
    c.source_path = path;
    if (root["version"] && cx.as<int>(root["version"], "version") != config_version)
        cx.fail(root["version"], "unsupported config version");
    if (!root["problem"]) cx.fail(root, "missing 'problem' section");
    c.problem = parse_problem(cx, root["problem"]);

    if (!root["strategies"]) cx.fail(root, "missing 'strategies'");
    const auto strategies = root["strategies"];
    if (!strategies.IsSequence() || strategies.size() == 0) cx.fail(strategies, "'strategies' must be a nonempty list");
    for (const auto &s : strategies) c.strategies.push_back(parse_strategy(cx, s));

    if (const auto pre = root["preconditioners"]) {
        c.preconditioners.clear();
        for (const auto &name : cx.strings(pre, "preconditioners")) {
            if (name == "user_diagonal") cx.fail(pre, "user_diagonal needs a library caller; use none or jacobi");
            try {
                c.preconditioners.push_back(preconditioner_kind_from_string(name));
            } catch (const ContractViolation &e) {
                cx.fail(pre, e.what());
            }
        }
        if (c.preconditioners.empty()) cx.fail(pre, "'preconditioners' must be nonempty");
    }

    if (!root["tol"]) cx.fail(root, "missing 'tol'");
    c.tols = cx.doubles(root["tol"], "tol");
    if (c.tols.empty()) cx.fail(root["tol"], "'tol' must be nonempty");
    for (double t : c.tols)
        if (!(t > 0 && t < 1)) cx.fail(root["tol"], "tolerances must lie in (0, 1)");

    if (root["max_iters"]) {
        c.max_iters = cx.count(root["max_iters"], "max_iters");
        if (c.max_iters == 0) cx.fail(root["max_iters"], "'max_iters' must be at least 1");
    }
    if (root["reorthogonalize"]) c.reorthogonalize = cx.as<bool>(root["reorthogonalize"], "reorthogonalize");
    if (const auto rs = root["residual_scale"]) {
        const auto v = cx.as<std::string>(rs, "residual_scale");
        if (v == "rhs")
            c.residual_scale = ResidualScale::rhs;
        else if (v == "projected_rhs")
            c.residual_scale = ResidualScale::projected_rhs;
        else
            cx.fail(rs, "residual_scale must be rhs or projected_rhs");
    }
    if (const auto seeds = root["seeds"]) {
        c.seeds.clear();
        if (seeds.IsSequence())
            for (const auto &s : seeds) c.seeds.push_back(cx.as<std::uint64_t>(s, "seeds"));
        else
            c.seeds.push_back(cx.as<std::uint64_t>(seeds, "seeds"));
        if (c.seeds.empty()) cx.fail(seeds, "'seeds' must be nonempty");
    }
    if (root["output_dir"]) c.output_dir = resolve(path, cx.as<std::string>(root["output_dir"], "output_dir"));
    if (root["write_traces"]) c.write_traces = cx.as<bool>(root["write_traces"], "write_traces");
    return c;
}

ExperimentConfig load_config(const std::string &path) { return parse_config(read_file(path), path); }

ProblemConfig load_problem(const std::string &path, std::uint64_t *seed_out) {
    Ctx cx{path};
    const YAML::Node root = load_yaml(read_file(path), path);
    if (!root.IsMap()) throw ConfigError(path, 1, "top level must be a mapping");
    // Either a full experiment config or a bare problem section plus a seed.
    YAML::Node problem = root["problem"] ? root["problem"] : root;
    if (seed_out) {
        *seed_out = 1;
        if (root["seed"]) *seed_out = cx.as<std::uint64_t>(root["seed"], "seed");
        else if (root["seeds"] && root["seeds"].IsSequence() && root["seeds"].size() > 0)
            *seed_out = cx.as<std::uint64_t>(root["seeds"][0], "seeds");
    }
    if (!root["problem"]) {
        YAML::Node copy = YAML::Clone(root);
        copy.remove("seed");
        problem = copy;
    }
    return parse_problem(cx, problem);
}

SystemSource make_source(const ProblemConfig &p, std::uint64_t seed) {
    switch (p.kind) {
    case ProblemKind::diffusion: {
        InclusionGridSpec spec = p.grid;
        spec.seed = seed;
        return [spec](std::size_t k) { return generate_diffusion_system(spec, k); };
    }
    case ProblemKind::spectrum: {
        auto a = std::make_shared<SparseSpdMatrix>(generate_prescribed_spectrum({p.eigenvalues, seed}));
        return [a, seed](std::size_t k) {
            Vector b(a->n());
            for (std::size_t i = 0; i < b.size(); ++i) b[i] = counter_normal(seed, 0xb0b, k, i);
            return LinearSystem{*a, std::move(b)};
        };
    }
    case ProblemKind::files: {
        const auto mats = p.matrices;
        const auto rhs = p.rhs;
        return [mats, rhs](std::size_t k) {
            LinearSystem s{read_matrix_market(mats.at(k)), {}};
            if (rhs.empty())
                s.b = Vector(s.a.n(), 1.0);
            else
                s.b = read_matrix_market_vector(rhs.size() == 1 ? rhs[0] : rhs.at(k));
            detail::require(s.b.size() == s.a.n(), "right-hand side length does not match the matrix");
            return s;
        };
    }
    }
    throw ContractViolation("unknown problem kind");
}

std::optional<Vector> known_spectrum(const ProblemConfig &p) {
    if (p.kind != ProblemKind::spectrum) return std::nullopt;
    Vector v = p.eigenvalues;
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace krecycle::bench
