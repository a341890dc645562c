#ifndef KRECYCLE_RECYCLE_SEQUENCE_HPP
#define KRECYCLE_RECYCLE_SEQUENCE_HPP

/// \file krecycle/recycle/sequence.hpp
/// \brief Solving A^(k) x^(k) = b^(k), k = 0, 1, ..., while carrying an
///        augmentation basis from one system to the next.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/dense.hpp"
#include "krecycle/linalg/sparse_matrix.hpp"
#include "krecycle/problems/diffusion.hpp"
#include "krecycle/recycle/basis.hpp"
#include "krecycle/recycle/strategy.hpp"
#include "krecycle/ritz/lanczos.hpp"
#include "krecycle/ritz/selection.hpp"
#include "krecycle/solver/apcg.hpp"
#include "krecycle/solver/deflation.hpp"
#include "krecycle/solver/preconditioner.hpp"
#include "krecycle/timer.hpp"

namespace krecycle {

struct SystemRecord {
    std::size_t k = 0;
    std::size_t iterations = 0;
    std::size_t nc_before = 0;  ///< columns used by this solve (after the rank guard)
    std::size_t selected = 0;   ///< columns appended after the solve
    std::size_t dropped = 0;    ///< columns removed by the rank guard (build + append)
    bool restarted = false;     ///< basis reset to C0 after this system
    bool converged = false;
    double final_residual = 0;  ///< ||b - A x|| / ||b||
    double solve_seconds = 0;   ///< CPU time inside the solver
    double augmentation_seconds = 0;  ///< projector build + projections
    double update_seconds = 0;        ///< Ritz extraction and basis update
};

struct SequenceEvent {
    std::size_t k = 0;
    std::string kind;  ///< "drop", "restart", "abort"
    std::string detail;
};

struct SequenceReport {
    std::vector<SystemRecord> records;
    std::vector<SequenceEvent> events;
    bool aborted = false;
    std::string abort_message;
    /// Coefficients of the last completed solve (vectors cleared).
    SolveTrace last_trace;
    /// Basis after the last update, when `keep_final_basis` was requested.
    DenseBlock final_basis;

    bool all_converged() const {
        if (aborted) return false;
        for (const auto &r : records)
            if (!r.converged) return false;
        return true;
    }
};

using SystemSource = std::function<LinearSystem(std::size_t)>;
using PreconditionerFactory = std::function<Preconditioner(const SparseSpdMatrix &, std::size_t)>;

struct SequenceOptions {
    bool keep_final_basis = false;
    double rank_guard = default_rank_guard;
    /// Called after each solve with the system index and its result.
    std::function<void(std::size_t, const SolveResult &)> on_solve;
};

namespace detail {

inline std::string describe(const ColumnOrigin &o) {
    switch (o.source) {
    case ColumnSource::initial: return "initial column " + std::to_string(o.index);
    case ColumnSource::direction:
        return "direction " + std::to_string(o.index) + " of system " + std::to_string(o.system);
    case ColumnSource::ritz: {
        char buf[64];
        std::snprintf(buf, sizeof buf, " (theta %.6g)", o.ritz_value);
        return "ritz vector " + std::to_string(o.index) + " of system " + std::to_string(o.system) + buf;
    }
    }
    return "?";
}

} // namespace detail

/// Indices of the Ritz pairs the strategy keeps, in descending-value order.
inline std::vector<std::size_t> select_ritz_columns(const RitzSpectrum &spectrum, const RecycleStrategy &strategy) {
    std::vector<std::size_t> idx = spectrum.converged_indices();
    if (strategy.kind != RecycleKind::srks_cluster || idx.empty()) return idx;
    Vector vals(idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c) vals[c] = spectrum.values[idx[c]];
    const std::size_t mc = strategy.min_cluster > 0 ? strategy.min_cluster : default_min_cluster(idx.size());
    std::vector<std::size_t> out;
    for (auto c : cluster_filter(vals, mc)) out.push_back(idx[c]);
    return out;
}

inline SequenceReport run_sequence(const SystemSource &systems, std::size_t count,
                                   const PreconditionerFactory &make_preconditioner, const RecycleStrategy &strategy,
                                   SolveConfig cfg, const DenseBlock &c0, const SequenceOptions &opts = {}) {
    strategy.validate();
    cfg.validate();
    cfg.store_directions = strategy.kind == RecycleKind::trks;
    cfg.trace_capture = strategy.uses_ritz();

    SequenceReport report;
    AugmentationState state = AugmentationState::from_initial(c0);
    std::size_t n = 0;

    for (std::size_t k = 0; k < count; ++k) {
        SystemRecord rec;
        rec.k = k;
        try {
            const LinearSystem sys = systems(k);
            if (k == 0) {
                n = sys.a.n();
                detail::require(c0.cols() == 0 || c0.rows() == n, "run_sequence: C0 row count must equal n");
                if (state.basis.rows() != n) state.basis = DenseBlock(n, 0);
                if (state.initial_basis.rows() != n) state.initial_basis = DenseBlock(n, 0);
            }
            detail::require(sys.a.n() == n, "run_sequence: all systems must share one dimension");
            const Preconditioner m = make_preconditioner(sys.a, k);

            CpuStopwatch build_clock;
            build_clock.start();
            GuardedDeflation g = build_deflation_guarded(sys.a, state.basis, opts.rank_guard);
            build_clock.stop();
            if (!g.dropped.empty()) {
                for (auto j : g.dropped)
                    report.events.push_back({k, "drop", detail::describe(state.origin_tags[j]) + ": rank guard"});
                rec.dropped += g.dropped.size();
                state.keep_columns(g.kept);
            }
            rec.nc_before = state.columns();

            CpuStopwatch solve_clock;
            solve_clock.start();
            SolveResult res = apcg_solve(sys.a, m, g.op, sys.b, cfg);
            solve_clock.stop();

            rec.iterations = res.trace.iterations;
            rec.converged = res.trace.converged;
            rec.solve_seconds = solve_clock.seconds();
            rec.augmentation_seconds = build_clock.seconds() + res.trace.projection_seconds;
            {
                Vector ax = spmv(sys.a, res.x);
                for (std::size_t i = 0; i < n; ++i) ax[i] = sys.b[i] - ax[i];
                const double bn = norm2(sys.b);
                rec.final_residual = bn > 0 ? norm2(ax) / bn : norm2(ax);
            }
            if (opts.on_solve) opts.on_solve(k, res);

            CpuStopwatch update_clock;
            update_clock.start();
            BasisUpdate upd;
            if (res.trace.converged && strategy.kind == RecycleKind::trks) {
                upd = update_basis_trks(state, res.trace, sys.a, k, opts.rank_guard);
            } else if (res.trace.converged && strategy.uses_ritz() && res.trace.iterations >= 2) {
                const LanczosView view = lanczos_from_trace(res.trace);
                const RitzSpectrum spec = converged_ritz_pairs(view, strategy.epsilon);
                const auto keep = select_ritz_columns(spec, strategy);
                upd = update_basis_srks(state, spec, keep, sys.a, k, opts.rank_guard);
            }
            update_clock.stop();
            rec.update_seconds = update_clock.seconds();
            rec.selected = upd.appended;
            rec.dropped += upd.dropped.size();
            for (const auto &o : upd.dropped)
                report.events.push_back({k, "drop", detail::describe(o) + ": rank guard"});

            if (strategy.nc_limit > 0 && state.columns() >= strategy.nc_limit) {
                report.events.push_back({k, "restart",
                                         "dim " + std::to_string(state.columns()) + " >= " +
                                             std::to_string(strategy.nc_limit)});
                state.restart();
                rec.restarted = true;
            }

            res.trace.z_history = DenseBlock();
            res.trace.directions = DenseBlock();
            res.trace.residuals = DenseBlock();
            report.last_trace = std::move(res.trace);
            report.records.push_back(rec);
        } catch (const NumericalFailure &e) {
            report.aborted = true;
            report.abort_message = e.what();
            report.events.push_back({k, "abort", e.what()});
            break;
        }
    }
    if (opts.keep_final_basis) report.final_basis = state.basis;
    return report;
}

inline SequenceReport run_sequence(std::span<const LinearSystem> systems,
                                   const PreconditionerFactory &make_preconditioner, const RecycleStrategy &strategy,
                                   const SolveConfig &cfg, const DenseBlock &c0, const SequenceOptions &opts = {}) {
    return run_sequence([&](std::size_t k) { return systems[k]; }, systems.size(), make_preconditioner, strategy, cfg,
                        c0, opts);
}

/// Preconditioner rule that applies the same kind to every system.
inline PreconditionerFactory fixed_preconditioner(PreconditionerKind kind) {
    return [kind](const SparseSpdMatrix &a, std::size_t) { return Preconditioner::make(kind, a); };
}

} // namespace krecycle

#endif
