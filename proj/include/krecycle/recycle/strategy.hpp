#ifndef KRECYCLE_RECYCLE_STRATEGY_HPP
#define KRECYCLE_RECYCLE_STRATEGY_HPP

#include <cstddef>
#include <cstdio>
#include <string>
#include <string_view>

#include "krecycle/errors.hpp"

namespace krecycle {

enum class RecycleKind {
    none,         ///< plain (A)PCG with the fixed initial basis
    trks,         ///< append every search direction
    srks,         ///< append stagnated Ritz vectors
    srks_cluster  ///< srks, minus Ritz values inside the central cluster
};

inline std::string_view to_string(RecycleKind k) {
    switch (k) {
    case RecycleKind::none: return "none";
    case RecycleKind::trks: return "trks";
    case RecycleKind::srks: return "srks";
    case RecycleKind::srks_cluster: return "srks_cluster";
    }
    return "?";
}

inline RecycleKind recycle_kind_from_string(std::string_view s) {
    if (s == "none" || s == "cg") return RecycleKind::none;
    if (s == "trks") return RecycleKind::trks;
    if (s == "srks") return RecycleKind::srks;
    if (s == "srks_cluster" || s == "cluster") return RecycleKind::srks_cluster;
    throw ContractViolation("unknown recycling strategy '" + std::string(s) + "'");
}

struct RecycleStrategy {
    RecycleKind kind = RecycleKind::none;
    double epsilon = 1e-14;      ///< stagnation threshold (srks kinds)
    std::size_t nc_limit = 0;    ///< restart when dim C >= nc_limit; 0 disables
    std::size_t min_cluster = 0; ///< 0: ceil(selected / 5)

    bool uses_ritz() const noexcept { return kind == RecycleKind::srks || kind == RecycleKind::srks_cluster; }

    void validate() const {
        if (uses_ritz()) detail::require(epsilon > 0, "RecycleStrategy: epsilon must be positive");
    }

    /// Short label, e.g. "srks(1e-14)".
    std::string label() const {
        std::string out(to_string(kind));
        if (uses_ritz()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "(%g)", epsilon);
            out += buf;
        }
        if (nc_limit > 0) out += "[nc<" + std::to_string(nc_limit) + "]";
        return out;
    }
};

} // namespace krecycle

#endif
