#ifndef KRECYCLE_PROBLEMS_MATRIX_MARKET_HPP
#define KRECYCLE_PROBLEMS_MATRIX_MARKET_HPP

/// \file krecycle/problems/matrix_market.hpp
/// \brief Matrix Market (.mtx) reader and writer for real symmetric matrices
///        (coordinate or array) and dense vectors (array).

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/sparse_matrix.hpp"
#include "krecycle/linalg/vector_ops.hpp"

namespace krecycle {

namespace detail {

struct MmHeader {
    std::string format;    // coordinate | array
    std::string field;     // real | integer
    std::string symmetry;  // general | symmetric | ...
};

inline std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

class MmLines {
public:
    explicit MmLines(std::istream &in) : in_(in) {}

    bool next(std::string &line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '%') continue;
            return true;
        }
        return false;
    }
    bool raw(std::string &line) {
        if (!std::getline(in_, line)) return false;
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    std::size_t line() const noexcept { return line_no_; }

private:
    std::istream &in_;
    std::size_t line_no_ = 0;
};

inline MmHeader read_mm_header(MmLines &lines) {
    std::string first;
    if (!lines.raw(first)) throw ParseError("matrix market: empty input", 1);
    std::istringstream hs(first);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw ParseError("matrix market: missing %%MatrixMarket banner", lines.line());
    if (lowercase(object) != "matrix") throw ParseError("matrix market: object must be 'matrix'", lines.line());
    MmHeader h{lowercase(format), lowercase(field), lowercase(symmetry)};
    if (h.format != "coordinate" && h.format != "array")
        throw ParseError("matrix market: format must be coordinate or array", lines.line());
    if (h.field != "real" && h.field != "integer" && h.field != "double")
        throw ParseError("matrix market: field must be real or integer", lines.line());
    if (h.symmetry != "general" && h.symmetry != "symmetric")
        throw ParseError("matrix market: unsupported symmetry '" + symmetry + "'", lines.line());
    return h;
}

inline double parse_mm_value(const std::string &tok, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw ParseError("matrix market: bad number '" + tok + "'", line);
        return v;
    } catch (const std::logic_error &) {
        throw ParseError("matrix market: bad number '" + tok + "'", line);
    }
}

inline std::vector<std::string> split_ws(const std::string &line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

inline std::size_t parse_mm_index(const std::string &tok, std::size_t line) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::logic_error &) {
        throw ParseError("matrix market: bad integer '" + tok + "'", line);
    }
    if (used != tok.size() || v < 0) throw ParseError("matrix market: bad integer '" + tok + "'", line);
    return static_cast<std::size_t>(v);
}

} // namespace detail

/// Reads a symmetric matrix. Only the lower triangle may be present in the
/// file; it is expanded to the full pattern.
inline SparseSpdMatrix read_matrix_market(std::istream &in) {
    detail::MmLines lines(in);
    const auto h = detail::read_mm_header(lines);
    if (h.symmetry != "symmetric")
        throw ParseError("matrix market: operator must be of symmetric kind, found '" + h.symmetry + "'", 1);

    std::string line;
    if (!lines.next(line)) throw ParseError("matrix market: missing size line", lines.line() + 1);
    const auto size_tok = detail::split_ws(line);
    const std::size_t size_line = lines.line();
    std::vector<Triplet> lower;
    std::size_t n = 0;

    if (h.format == "coordinate") {
        if (size_tok.size() != 3) throw ParseError("matrix market: size line needs rows cols entries", size_line);
        const std::size_t rows = detail::parse_mm_index(size_tok[0], size_line);
        const std::size_t cols = detail::parse_mm_index(size_tok[1], size_line);
        const std::size_t nnz = detail::parse_mm_index(size_tok[2], size_line);
        if (rows != cols || rows == 0) throw ParseError("matrix market: matrix must be square and nonempty", size_line);
        n = rows;
        lower.reserve(nnz);
        for (std::size_t e = 0; e < nnz; ++e) {
            if (!lines.next(line))
                throw ParseError("matrix market: expected " + std::to_string(nnz) + " entries, found " +
                                     std::to_string(e),
                                 lines.line() + 1);
            const auto tok = detail::split_ws(line);
            if (tok.size() != 3) throw ParseError("matrix market: entry needs row col value", lines.line());
            const std::size_t i = detail::parse_mm_index(tok[0], lines.line());
            const std::size_t j = detail::parse_mm_index(tok[1], lines.line());
            if (i < 1 || j < 1 || i > n || j > n) throw ParseError("matrix market: index out of range", lines.line());
            if (j > i) throw ParseError("matrix market: symmetric storage must hold the lower triangle", lines.line());
            lower.push_back({i - 1, j - 1, detail::parse_mm_value(tok[2], lines.line())});
        }
    } else {
        if (size_tok.size() != 2) throw ParseError("matrix market: size line needs rows cols", size_line);
        const std::size_t rows = detail::parse_mm_index(size_tok[0], size_line);
        const std::size_t cols = detail::parse_mm_index(size_tok[1], size_line);
        if (rows != cols || rows == 0) throw ParseError("matrix market: matrix must be square and nonempty", size_line);
        n = rows;
        // Column-major lower triangle.
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = j; i < n; ++i) {
                if (!lines.next(line)) throw ParseError("matrix market: truncated array data", lines.line() + 1);
                const auto tok = detail::split_ws(line);
                if (tok.size() != 1) throw ParseError("matrix market: array entry needs one value", lines.line());
                const double v = detail::parse_mm_value(tok[0], lines.line());
                if (v != 0 || i == j) lower.push_back({i, j, v});
            }
    }
    if (lines.next(line)) throw ParseError("matrix market: trailing data", lines.line());

    std::vector<double> diag(n, 0.0);
    for (const auto &t : lower)
        if (t.row == t.col) diag[t.row] += t.value;
    for (std::size_t i = 0; i < n; ++i)
        if (!(diag[i] > 0))
            throw ParseError("matrix market: diagonal entry " + std::to_string(i + 1) + " is not positive",
                             size_line);
    return SparseSpdMatrix::from_lower_triplets(n, lower);
}

/// Reads an n x 1 array (general) as a vector.
inline Vector read_matrix_market_vector(std::istream &in) {
    detail::MmLines lines(in);
    const auto h = detail::read_mm_header(lines);
    if (h.format != "array") throw ParseError("matrix market: vectors must use array format", 1);
    std::string line;
    if (!lines.next(line)) throw ParseError("matrix market: missing size line", lines.line() + 1);
    const auto size_tok = detail::split_ws(line);
    const std::size_t size_line = lines.line();
    if (size_tok.size() != 2) throw ParseError("matrix market: size line needs rows cols", size_line);
    const std::size_t rows = detail::parse_mm_index(size_tok[0], size_line);
    const std::size_t cols = detail::parse_mm_index(size_tok[1], size_line);
    if (cols != 1) throw ParseError("matrix market: vector must have one column", size_line);
    Vector v(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!lines.next(line)) throw ParseError("matrix market: truncated array data", lines.line() + 1);
        const auto tok = detail::split_ws(line);
        if (tok.size() != 1) throw ParseError("matrix market: array entry needs one value", lines.line());
        v[i] = detail::parse_mm_value(tok[0], lines.line());
    }
    if (lines.next(line)) throw ParseError("matrix market: trailing data", lines.line());
    return v;
}

namespace detail {
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
inline std::ifstream open_for_read(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return in;
}
} // namespace detail

/// Writes the lower triangle in coordinate symmetric format. %.17g keeps the
/// round trip exact.
inline void write_matrix_market(std::ostream &out, const SparseSpdMatrix &a) {
    const auto offsets = a.row_offsets();
    const auto cols = a.col_indices();
    const auto vals = a.values();
    std::size_t lower = 0;
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p)
            if (cols[p] <= i) ++lower;
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << a.n() << ' ' << a.n() << ' ' << lower << '\n';
    // Column-major order of the lower triangle equals row-major order of the
    // upper one, which the symmetric CSR provides directly.
    for (std::size_t j = 0; j < a.n(); ++j)
        for (std::size_t p = offsets[j]; p < offsets[j + 1]; ++p)
            if (cols[p] >= j) out << cols[p] + 1 << ' ' << j + 1 << ' ' << detail::format_g17(vals[p]) << '\n';
}

inline void write_matrix_market_vector(std::ostream &out, std::span<const double> v) {
    out << "%%MatrixMarket matrix array real general\n";
    out << v.size() << " 1\n";
    for (double x : v) out << detail::format_g17(x) << '\n';
}

inline SparseSpdMatrix read_matrix_market(const std::string &path) {
    auto in = detail::open_for_read(path);
    return read_matrix_market(in);
}

inline Vector read_matrix_market_vector(const std::string &path) {
    auto in = detail::open_for_read(path);
    return read_matrix_market_vector(in);
}

} // namespace krecycle

#endif
