#ifndef KRECYCLE_SOLVER_PRECONDITIONER_HPP
#define KRECYCLE_SOLVER_PRECONDITIONER_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/sparse_matrix.hpp"
#include "krecycle/linalg/vector_ops.hpp"

namespace krecycle {

enum class PreconditionerKind { identity, jacobi, user_diagonal };

inline std::string_view to_string(PreconditionerKind k) {
    switch (k) {
    case PreconditionerKind::identity: return "identity";
    case PreconditionerKind::jacobi: return "jacobi";
    case PreconditionerKind::user_diagonal: return "user_diagonal";
    }
    return "?";
}

inline PreconditionerKind preconditioner_kind_from_string(std::string_view s) {
    if (s == "identity" || s == "none") return PreconditionerKind::identity;
    if (s == "jacobi") return PreconditionerKind::jacobi;
    if (s == "user_diagonal") return PreconditionerKind::user_diagonal;
    throw ContractViolation("unknown preconditioner kind '" + std::string(s) + "'");
}

/// Diagonal SPD preconditioner M. `inverse_diagonal()` holds the entries of
/// M^{-1}; empty for the identity.
class Preconditioner {
public:
    Preconditioner() = default;

    static Preconditioner identity() { return {}; }

    static Preconditioner jacobi(const SparseSpdMatrix &a) {
        Vector inv = a.diagonal();
        for (auto &d : inv) d = 1.0 / d;
        return Preconditioner(PreconditionerKind::jacobi, std::move(inv));
    }

    /// `diagonal` holds the entries of M itself (not its inverse).
    static Preconditioner user_diagonal(std::span<const double> diagonal) {
        Vector inv(diagonal.begin(), diagonal.end());
        for (std::size_t i = 0; i < inv.size(); ++i) {
            if (!(inv[i] > 0) || !std::isfinite(inv[i]))
                throw ContractViolation("user diagonal preconditioner entry " + std::to_string(i) +
                                        " is not strictly positive");
            inv[i] = 1.0 / inv[i];
        }
        return Preconditioner(PreconditionerKind::user_diagonal, std::move(inv));
    }

    static Preconditioner make(PreconditionerKind kind, const SparseSpdMatrix &a) {
        switch (kind) {
        case PreconditionerKind::identity: return identity();
        case PreconditionerKind::jacobi: return jacobi(a);
        case PreconditionerKind::user_diagonal: break;
        }
        throw ContractViolation("user_diagonal preconditioners need explicit data");
    }

    PreconditionerKind kind() const noexcept { return kind_; }
    std::span<const double> inverse_diagonal() const noexcept { return inv_; }

    /// z = M^{-1} r
    void apply(std::span<const double> r, std::span<double> z) const {
        detail::require(r.size() == z.size(), "Preconditioner::apply: dimension mismatch");
        if (inv_.empty()) {
            std::copy(r.begin(), r.end(), z.begin());
            return;
        }
        detail::require(r.size() == inv_.size(), "Preconditioner::apply: dimension mismatch");
        for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv_[i] * r[i];
    }

    /// Entry i of M (1 for the identity).
    double diagonal_entry(std::size_t i) const { return inv_.empty() ? 1.0 : 1.0 / inv_[i]; }

private:
    Preconditioner(PreconditionerKind kind, Vector inv) : kind_(kind), inv_(std::move(inv)) {}

    PreconditionerKind kind_ = PreconditionerKind::identity;
    Vector inv_;
};

} // namespace krecycle

#endif
