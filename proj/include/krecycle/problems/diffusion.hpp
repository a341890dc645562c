#ifndef KRECYCLE_PROBLEMS_DIFFUSION_HPP
#define KRECYCLE_PROBLEMS_DIFFUSION_HPP

/// \file krecycle/problems/diffusion.hpp
/// \brief Sequences of heterogeneous diffusion systems on a cell-centred
///        lattice with stiff block inclusions and randomly drawn
///        coefficients.
///
/// Discretization: unit cells, two-point fluxes with harmonic-mean face
/// coefficients (5-point stencil in 2D, 7-point in 3D). The x = 0 face is
/// held at zero (transmissibility 2k); every other face is insulated. The
/// load is a unit source in the centre cell plus a unit inflow through each
/// boundary cell face on x = max and y = max.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "krecycle/errors.hpp"
#include "krecycle/linalg/sparse_matrix.hpp"
#include "krecycle/linalg/vector_ops.hpp"
#include "krecycle/problems/rng.hpp"

namespace krecycle {

/// Axis-aligned block of cells [lo, hi) per axis.
struct CellBlock {
    std::array<std::size_t, 3> lo{0, 0, 0};
    std::array<std::size_t, 3> hi{1, 1, 1};

    bool contains(std::size_t i, std::size_t j, std::size_t k) const {
        return i >= lo[0] && i < hi[0] && j >= lo[1] && j < hi[1] && k >= lo[2] && k < hi[2];
    }
};

struct InclusionGridSpec {
    std::array<std::size_t, 3> dims{8, 8, 1};  ///< cells per axis; dims[2] == 1 means 2D
    std::vector<CellBlock> inclusions;
    double matrix_coeff_mean = 1.0;
    double inclusion_coeff_mean = 100.0;
    double rel_std = 0.10;
    std::uint64_t seed = 1;

    bool is_3d() const noexcept { return dims[2] > 1; }
    std::size_t cells() const noexcept { return dims[0] * dims[1] * dims[2]; }

    void validate() const {
        detail::require(dims[0] >= 1 && dims[1] >= 1 && dims[2] >= 1, "InclusionGridSpec: grid dims must be positive");
        detail::require(cells() >= 1, "InclusionGridSpec: empty grid");
        detail::require(matrix_coeff_mean > 0 && inclusion_coeff_mean > 0,
                        "InclusionGridSpec: mean coefficients must be positive");
        detail::require(rel_std >= 0, "InclusionGridSpec: rel_std must be nonnegative");
        for (const auto &b : inclusions)
            for (int a = 0; a < 3; ++a)
                detail::require(b.lo[a] < b.hi[a] && b.hi[a] <= dims[a],
                                "InclusionGridSpec: inclusion block outside the grid");
    }

    /// `per_axis` inclusions of edge `size` cells, centred in equal tiles.
    static std::vector<CellBlock> regular_layout(std::array<std::size_t, 3> dims,
                                                 std::array<std::size_t, 3> per_axis, std::size_t size) {
        std::vector<CellBlock> out;
        for (std::size_t c = 0; c < per_axis[2]; ++c)
            for (std::size_t b = 0; b < per_axis[1]; ++b)
                for (std::size_t a = 0; a < per_axis[0]; ++a) {
                    CellBlock blk;
                    const std::array<std::size_t, 3> idx{a, b, c};
                    for (int ax = 0; ax < 3; ++ax) {
                        if (dims[ax] == 1) {
                            blk.lo[ax] = 0;
                            blk.hi[ax] = 1;
                            continue;
                        }
                        const std::size_t tile = dims[ax] / per_axis[ax];
                        const std::size_t edge = std::min(size, tile);
                        const std::size_t start = idx[ax] * tile + (tile - edge) / 2;
                        blk.lo[ax] = start;
                        blk.hi[ax] = start + edge;
                    }
                    out.push_back(blk);
                }
        return out;
    }
};

struct LinearSystem {
    SparseSpdMatrix a;
    Vector b;
};

/// Coefficients of system k: entry 0 is the background, entry t the t-th
/// inclusion. Normal draws with standard deviation rel_std * mean; draws
/// below 1e-6 * mean are redrawn.
inline std::vector<double> draw_coefficients(const InclusionGridSpec &spec, std::size_t k) {
    std::vector<double> c(spec.inclusions.size() + 1);
    for (std::size_t t = 0; t < c.size(); ++t) {
        const double mean = t == 0 ? spec.matrix_coeff_mean : spec.inclusion_coeff_mean;
        double v = mean;
        for (std::uint64_t attempt = 0;; ++attempt) {
            v = mean * (1.0 + spec.rel_std * counter_normal(spec.seed, k, t, attempt));
            if (v >= 1e-6 * mean) break;
        }
        c[t] = v;
    }
    return c;
}

/// Per-cell coefficient field of system k.
inline std::vector<double> coefficient_field(const InclusionGridSpec &spec, std::size_t k) {
    const auto coeff = draw_coefficients(spec, k);
    const auto [nx, ny, nz] = spec.dims;
    std::vector<double> field(spec.cells(), coeff[0]);
    for (std::size_t kk = 0; kk < nz; ++kk)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i)
                for (std::size_t t = 0; t < spec.inclusions.size(); ++t)
                    if (spec.inclusions[t].contains(i, j, kk)) {
                        field[(kk * ny + j) * nx + i] = coeff[t + 1];
                        break;
                    }
    return field;
}

inline SparseSpdMatrix assemble_diffusion(const InclusionGridSpec &spec, const std::vector<double> &field) {
    const auto [nx, ny, nz] = spec.dims;
    auto id = [&](std::size_t i, std::size_t j, std::size_t k) { return (k * ny + j) * nx + i; };
    auto harmonic = [](double a, double b) { return 2 * a * b / (a + b); };
    std::vector<Triplet> lower;
    lower.reserve(spec.cells() * 4);
    for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t c = id(i, j, k);
                double diag = 0;
                auto couple = [&](std::size_t other) {
                    const double t = harmonic(field[c], field[other]);
                    diag += t;
                    if (other < c) lower.push_back({c, other, -t});
                };
                if (i > 0) couple(id(i - 1, j, k));
                if (i + 1 < nx) couple(id(i + 1, j, k));
                if (j > 0) couple(id(i, j - 1, k));
                if (j + 1 < ny) couple(id(i, j + 1, k));
                if (k > 0) couple(id(i, j, k - 1));
                if (k + 1 < nz) couple(id(i, j, k + 1));
                if (i == 0) diag += 2 * field[c];
                lower.push_back({c, c, diag});
            }
    return SparseSpdMatrix::from_lower_triplets(spec.cells(), lower);
}

/// Load shared by every system of a sequence.
inline Vector diffusion_rhs(const InclusionGridSpec &spec) {
    const auto [nx, ny, nz] = spec.dims;
    auto id = [&](std::size_t i, std::size_t j, std::size_t k) { return (k * ny + j) * nx + i; };
    Vector b(spec.cells(), 0.0);
    b[id(nx / 2, ny / 2, nz / 2)] += 1.0;
    for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t j = 0; j < ny; ++j) b[id(nx - 1, j, k)] += 1.0;
    for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t i = 0; i < nx; ++i) b[id(i, ny - 1, k)] += 1.0;
    return b;
}

inline LinearSystem generate_diffusion_system(const InclusionGridSpec &spec, std::size_t k) {
    spec.validate();
    return {assemble_diffusion(spec, coefficient_field(spec, k)), diffusion_rhs(spec)};
}

inline std::vector<LinearSystem> generate_diffusion_sequence(const InclusionGridSpec &spec, std::size_t count) {
    spec.validate();
    std::vector<LinearSystem> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(generate_diffusion_system(spec, k));
    return out;
}

} // namespace krecycle

#endif
