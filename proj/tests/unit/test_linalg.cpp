#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace krecycle;
using testutil::random_block;
using testutil::random_spd;
using testutil::random_vector;

namespace {

SparseSpdMatrix laplacian_1d(std::size_t n) {
    std::vector<Triplet> lower;
    for (std::size_t i = 0; i < n; ++i) {
        lower.push_back({i, i, 2.0});
        if (i > 0) lower.push_back({i, i - 1, -1.0});
    }
    return SparseSpdMatrix::from_lower_triplets(n, lower);
}

TridiagSym laplacian_tridiag(std::size_t m) {
    TridiagSym t;
    t.diag.assign(m, 2.0);
    t.offdiag.assign(m - 1, -1.0);
    return t;
}

double cofactor_det(const std::vector<std::vector<double>> &a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    double det = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<double>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<double> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(a[r][k]);
            minor.push_back(row);
        }
        det += (c % 2 ? -1.0 : 1.0) * a[0][c] * cofactor_det(minor);
    }
    return det;
}

void expect_eig_contract(const DenseBlock &g, const EigDecomposition &e) {
    const std::size_t m = g.rows();
    double gnorm = 0;
    for (double v : g.data()) gnorm = std::max(gnorm, std::abs(v));
    const DenseBlock vtv = transpose_product(e.vectors, e.vectors);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            EXPECT_NEAR(vtv(i, j), i == j ? 1.0 : 0.0, 1e-12 * static_cast<double>(std::max<std::size_t>(m, 1)));
    const DenseBlock gq = product(g, e.vectors);
    for (std::size_t j = 0; j < m; ++j) {
        double r = 0;
        for (std::size_t i = 0; i < m; ++i) r += std::pow(gq(i, j) - e.values[j] * e.vectors(i, j), 2);
        EXPECT_LE(std::sqrt(r), 1e-10 * std::max(gnorm, 1.0));
        if (j > 0) EXPECT_GE(e.values[j - 1], e.values[j]);
    }
}

} // namespace

TEST(Spmv, IdentityReturnsInput) {
    const Vector y = spmv(SparseSpdMatrix::identity(3), Vector{1, 2, 3});
    EXPECT_EQ(y, (Vector{1, 2, 3}));
}

TEST(Spmv, Diagonal) {
    const Vector d{2, 3};
    EXPECT_EQ(spmv(SparseSpdMatrix::diagonal_matrix(d), Vector{1, 1}), (Vector{2, 3}));
}

TEST(Spmv, LaplacianStencil) {
    EXPECT_EQ(spmv(laplacian_1d(4), Vector{1, 0, 0, 0}), (Vector{2, -1, 0, 0}));
}

TEST(Spmv, MatchesDenseProduct) {
    const auto a = random_spd(37, 5);
    const auto x = random_vector(37, 9);
    const auto d = testutil::to_dense(a);
    const Vector y = spmv(a, x);
    for (std::size_t i = 0; i < 37; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < 37; ++j) s += d(i, j) * x[j];
        EXPECT_NEAR(y[i], s, 1e-12 * (1 + std::abs(s)));
    }
}

TEST(Spmv, DimensionMismatchThrows) {
    EXPECT_THROW(spmv(SparseSpdMatrix::identity(3), Vector{1, 2}), ContractViolation);
}

TEST(SparseSpdMatrix, RejectsUnsymmetricValues) {
    std::vector<Triplet> t{{0, 0, 2}, {1, 1, 2}, {0, 1, 1}, {1, 0, 0.5}};
    EXPECT_THROW(SparseSpdMatrix::from_triplets(2, t), ContractViolation);
}

TEST(SparseSpdMatrix, RejectsMissingCounterpart) {
    std::vector<Triplet> t{{0, 0, 2}, {1, 1, 2}, {1, 0, 1}};
    EXPECT_THROW(SparseSpdMatrix::from_triplets(2, t), ContractViolation);
}

TEST(SparseSpdMatrix, RejectsNonpositiveDiagonal) {
    EXPECT_THROW(SparseSpdMatrix::diagonal_matrix(Vector{1, 0}), ContractViolation);
    EXPECT_THROW(SparseSpdMatrix::from_triplets(2, {{0, 0, 1}}), ContractViolation);
}

TEST(SparseSpdMatrix, RejectsUnsortedColumns) {
    EXPECT_THROW(SparseSpdMatrix(2, {0, 2, 3}, {1, 0, 1}, {1, 1, 1}), ContractViolation);
}

TEST(SparseSpdMatrix, DuplicateTripletsAreSummed) {
    const auto a = SparseSpdMatrix::from_triplets(1, {{0, 0, 1}, {0, 0, 2}});
    EXPECT_EQ(a.at(0, 0), 3.0);
    EXPECT_EQ(a.nnz(), 1u);
}

TEST(DenseBlock, ProductsMatchLoops) {
    const auto x = random_block(20, 4, 1), y = random_block(20, 3, 2);
    const auto g = transpose_product(x, y);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(g(i, j), dot(x.col(i), y.col(j)), 1e-12);
    const Vector c{1, -2, 0.5};
    const Vector yc = y.times(c);
    for (std::size_t r = 0; r < 20; ++r)
        EXPECT_NEAR(yc[r], y(r, 0) - 2 * y(r, 1) + 0.5 * y(r, 2), 1e-12);
}

TEST(DenseBlock, ColumnEditing) {
    DenseBlock b = DenseBlock::from_rows({{1, 2, 3}, {4, 5, 6}});
    b.erase_column(1);
    EXPECT_EQ(b.cols(), 2u);
    EXPECT_EQ(b(1, 1), 6.0);
    b.append_column(Vector{7, 8});
    const std::vector<std::size_t> keep{2, 0};
    const auto s = b.select_columns(keep);
    EXPECT_EQ(s(0, 0), 7.0);
    EXPECT_EQ(s(1, 1), 4.0);
}

TEST(DenseCholesky, Identity) {
    const auto f = dense_cholesky(DenseBlock::identity(2));
    EXPECT_EQ(f.entry(0, 0), 1.0);
    EXPECT_EQ(f.entry(1, 0), 0.0);
    EXPECT_EQ(f.entry(1, 1), 1.0);
}

TEST(DenseCholesky, TwoByTwo) {
    const auto f = dense_cholesky(DenseBlock::from_rows({{4, 2}, {2, 2}}));
    EXPECT_DOUBLE_EQ(f.entry(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(f.entry(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(f.entry(1, 1), 1.0);
    EXPECT_EQ(f.entry(0, 1), 0.0);
}

TEST(DenseCholesky, SingularThrowsRankDeficient) {
    try {
        dense_cholesky(DenseBlock::from_rows({{1, 1}, {1, 1}}));
        FAIL() << "expected RankDeficient";
    } catch (const RankDeficient &e) {
        EXPECT_EQ(e.column(), 1u);
    }
}

TEST(DenseCholesky, NonSymmetricIsContractViolation) {
    EXPECT_THROW(dense_cholesky(DenseBlock::from_rows({{2, 1}, {0, 2}})), ContractViolation);
}

TEST(DenseCholesky, RandomReassembly) {
    for (std::size_t n : {1u, 5u, 23u, 50u}) {
        const auto g = testutil::to_dense(random_spd(n, 100 + n, 0.5));
        const auto l = dense_cholesky(g).lower();
        const auto llt = product(l, transpose(l));
        double err = 0, scale = 0;
        for (std::size_t i = 0; i < g.data().size(); ++i) {
            err = std::max(err, std::abs(llt.data()[i] - g.data()[i]));
            scale = std::max(scale, std::abs(g.data()[i]));
        }
        EXPECT_LE(err, 1e-10 * scale) << "n=" << n;
    }
}

TEST(DenseCholesky, SolveRoundTrip) {
    const auto g = testutil::to_dense(random_spd(15, 3));
    const auto f = dense_cholesky(g);
    const auto x = random_vector(15, 4);
    const Vector b = g.times(x);
    EXPECT_LE(testutil::max_abs_diff(f.solve(b), x), 1e-10);
}

TEST(TridiagEig, OneByOne) {
    TridiagSym t{{5.0}, {}};
    const auto e = tridiag_eig(t);
    ASSERT_EQ(e.values.size(), 1u);
    EXPECT_EQ(e.values[0], 5.0);
    EXPECT_EQ(std::abs(e.vectors(0, 0)), 1.0);
}

TEST(TridiagEig, TwoByTwo) {
    TridiagSym t{{2, 2}, {1}};
    const auto e = tridiag_eig(t);
    EXPECT_NEAR(e.values[0], 3.0, 1e-14);
    EXPECT_NEAR(e.values[1], 1.0, 1e-14);
    expect_eig_contract(t.to_dense(), e);
}

TEST(TridiagEig, LaplacianClosedForm) {
    const auto t = laplacian_tridiag(4);
    const auto e = tridiag_eig(t);
    for (std::size_t k = 1; k <= 4; ++k)
        EXPECT_NEAR(e.values[4 - k], 2 - 2 * std::cos(static_cast<double>(k) * std::numbers::pi / 5), 1e-13);
    const auto d = dense_sym_eig(t.to_dense());
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(e.values[j], d.values[j], 1e-13);
    expect_eig_contract(t.to_dense(), e);
}

TEST(TridiagEig, BadLengthsThrow) {
    TridiagSym t{{1, 2}, {}};
    EXPECT_THROW(tridiag_eig(t), ContractViolation);
}

TEST(TridiagEig, AgreesWithDenseJacobiOnRandomInput) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const std::size_t m = 10 + 7 * seed;
        TridiagSym t;
        t.diag = random_vector(m, seed, 1);
        t.offdiag = random_vector(m - 1, seed, 2);
        const auto a = tridiag_eig(t);
        const auto b = dense_sym_eig(t.to_dense());
        expect_eig_contract(t.to_dense(), a);
        for (std::size_t j = 0; j < m; ++j)
            EXPECT_NEAR(a.values[j], b.values[j], 1e-9 * std::max(1.0, std::abs(b.values[j])));
    }
}

TEST(TridiagEig, ValuesOnlyMatchFullDecomposition) {
    TridiagSym t;
    t.diag = random_vector(30, 8, 1);
    t.offdiag = random_vector(29, 8, 2);
    const auto full = tridiag_eig(t);
    const auto vals = tridiag_eigenvalues(t);
    for (std::size_t j = 0; j < 30; ++j) EXPECT_NEAR(vals[j], full.values[j], 1e-12);
}

TEST(DenseSymEig, Identity) {
    const auto e = dense_sym_eig(DenseBlock::identity(3));
    for (double v : e.values) EXPECT_EQ(v, 1.0);
}

TEST(DenseSymEig, TwoByTwo) {
    const auto g = DenseBlock::from_rows({{2, 1}, {1, 2}});
    const auto e = dense_sym_eig(g);
    EXPECT_NEAR(e.values[0], 3.0, 1e-14);
    EXPECT_NEAR(e.values[1], 1.0, 1e-14);
    expect_eig_contract(g, e);
}

TEST(DenseSymEig, DiagonalGivesAxes) {
    const auto g = DenseBlock::from_rows({{9, 0, 0}, {0, 4, 0}, {0, 0, 1}});
    const auto e = dense_sym_eig(g);
    EXPECT_EQ(e.values, (Vector{9, 4, 1}));
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(std::abs(e.vectors(j, j)), 1.0);
}

TEST(DenseSymEig, TraceAndDeterminantOracle) {
    for (std::size_t n = 2; n <= 8; ++n) {
        const auto g = testutil::to_dense(random_spd(n, 40 + n, 0.3));
        const auto e = dense_sym_eig(g);
        expect_eig_contract(g, e);
        std::vector<std::vector<double>> rows(n, std::vector<double>(n));
        double trace = 0, sum = 0, prod = 1;
        for (std::size_t i = 0; i < n; ++i) {
            trace += g(i, i);
            for (std::size_t j = 0; j < n; ++j) rows[i][j] = g(i, j);
        }
        for (double v : e.values) {
            sum += v;
            prod *= v;
        }
        const double det = cofactor_det(rows);
        EXPECT_NEAR(sum, trace, 1e-8 * std::abs(trace));
        EXPECT_NEAR(prod, det, 1e-8 * std::abs(det));
    }
}

TEST(DenseSymEig, MatchesEigenSelfAdjointSolver) {
    const std::size_t n = 40;
    const auto g = testutil::to_dense(random_spd(n, 77));
    const auto e = dense_sym_eig(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(g.eigen());
    for (std::size_t j = 0; j < n; ++j)
        EXPECT_NEAR(e.values[j], ref.eigenvalues()[static_cast<Eigen::Index>(n - 1 - j)], 1e-9 * e.values[0]);
}

TEST(ThinSvd, ReconstructsInput) {
    const auto x = random_block(25, 6, 3);
    const auto s = thin_svd(x);
    DenseBlock us = s.left;
    for (std::size_t j = 0; j < 6; ++j) scale(s.singular_values[j], us.col(j));
    const auto back = product(us, transpose(s.right));
    EXPECT_LE(testutil::max_abs_diff(back.data(), x.data()), 1e-12);
    Eigen::JacobiSVD<Eigen::MatrixXd> ref(x.eigen());
    for (std::size_t j = 0; j < 6; ++j)
        EXPECT_NEAR(s.singular_values[j], ref.singularValues()[static_cast<Eigen::Index>(j)], 1e-12);
}
