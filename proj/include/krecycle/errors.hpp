#ifndef KRECYCLE_ERRORS_HPP
#define KRECYCLE_ERRORS_HPP

/// \file krecycle/errors.hpp
/// \brief Exception types shared by every module.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace krecycle {

/// A caller broke a documented precondition (dimension mismatch, invalid
/// structure, missing trace data, ...).
class ContractViolation : public std::invalid_argument {
public:
    explicit ContractViolation(const std::string &what)
        : std::invalid_argument(what) {}
};

/// A Cholesky pivot fell below the acceptance threshold. `column()` is the
/// zero-based index of the first column found to depend on its predecessors.
class RankDeficient : public std::runtime_error {
public:
    RankDeficient(const std::string &what, std::size_t column)
        : std::runtime_error(what), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// Arithmetic went somewhere the SPD contract forbids (non-positive curvature,
/// negative beta) or an iterative kernel did not converge. `index()` names the
/// offending iteration or eigenvalue.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string &what, std::size_t index)
        : std::runtime_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Malformed input file. `line()` is one-based; 0 when not line-specific.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline void require(bool cond, const char *msg) {
    if (!cond) throw ContractViolation(msg);
}

} // namespace detail
} // namespace krecycle

#endif
