#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qjsd/linalg.hpp"

using namespace qjsd;

namespace {

Matrix pauli_x()
{
    return Matrix(2, {0.0, 1.0, 1.0, 0.0});
}

Matrix pauli_z()
{
    return Matrix(2, {1.0, 0.0, 0.0, -1.0});
}

Matrix random_hermitian(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = Complex(g(rng), g(rng));
            a(j, i) = std::conj(a(i, j));
        }
    }
    return a;
}

double max_unitarity_error(const Matrix& v)
{
    return max_abs_diff(v.adjoint() * v, Matrix::identity(v.dim()));
}

} // namespace

TEST(Eigh, IdentityHasUnitEigenvalues)
{
    const auto e = eigh(HermitianMatrix(Matrix::identity(2)));
    EXPECT_DOUBLE_EQ(e.values[0], 1.0);
    EXPECT_DOUBLE_EQ(e.values[1], 1.0);
    EXPECT_LT(max_unitarity_error(e.vectors), 1e-12);
}

TEST(Eigh, DiagonalInputKeepsItsEntriesAscending)
{
    const std::vector<double> d{0.75, 0.25};
    const auto e = eigh(HermitianMatrix(Matrix::diagonal(d)));
    EXPECT_DOUBLE_EQ(e.values[0], 0.25);
    EXPECT_DOUBLE_EQ(e.values[1], 0.75);
}

TEST(Eigh, PauliX)
{
    const auto e = eigh(HermitianMatrix(pauli_x()));
    EXPECT_NEAR(e.values[0], -1.0, 1e-14);
    EXPECT_NEAR(e.values[1], 1.0, 1e-14);
    EXPECT_LT(max_abs_diff(e.reconstruct(), pauli_x()), 1e-12);
}

TEST(Eigh, MatchesIndependentSolverOnRandomMatrices)
{
    std::mt19937_64 rng(2024);
    for (std::size_t n = 2; n <= 8; ++n) {
        for (int rep = 0; rep < 100; ++rep) {
            const Matrix a = random_hermitian(n, rng);
            const auto e = eigh(HermitianMatrix(a));
            const auto ref = oracle::eigenvalues(a);
            ASSERT_EQ(e.values.size(), n);
            EXPECT_TRUE(std::is_sorted(e.values.begin(), e.values.end()));
            for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(e.values[k], ref[k], 1e-11) << "n=" << n;
            EXPECT_LT(max_abs_diff(e.reconstruct(), a), 1e-10);
            EXPECT_LT(max_unitarity_error(e.vectors), 1e-10);
        }
    }
}

TEST(Eigh, DegenerateSpectrum)
{
    // U diag(1, 1, 2) U^dagger for a fixed non-trivial unitary
    std::mt19937_64 rng(5);
    const auto q = qr_decompose(random_hermitian(3, rng)).q;
    const std::vector<double> d{1.0, 1.0, 2.0};
    const Matrix a = q * Matrix::diagonal(d) * q.adjoint();
    const auto e = eigh(HermitianMatrix(a));
    EXPECT_NEAR(e.values[0], 1.0, 1e-12);
    EXPECT_NEAR(e.values[1], 1.0, 1e-12);
    EXPECT_NEAR(e.values[2], 2.0, 1e-12);
    EXPECT_LT(max_abs_diff(e.reconstruct(), a), 1e-10);
}

TEST(HermitianMatrix, RejectsNonHermitianInput)
{
    Matrix a(2);
    a(0, 1) = 1.0;
    EXPECT_THROW(HermitianMatrix{a}, NotHermitian);
}

TEST(HermitianMatrix, SymmetrisesWithinTolerance)
{
    Matrix a = pauli_x();
    a(0, 1) += 1e-14;
    const HermitianMatrix h(a);
    EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
}

TEST(MatrixSqrt, Identity)
{
    const auto s = matrix_sqrt(HermitianMatrix(Matrix::identity(3)));
    EXPECT_LT(max_abs_diff(s.matrix(), Matrix::identity(3)), 1e-14);
}

TEST(MatrixSqrt, Diagonal)
{
    const std::vector<double> d{4.0, 9.0};
    const std::vector<double> r{2.0, 3.0};
    const auto s = matrix_sqrt(HermitianMatrix(Matrix::diagonal(d)));
    EXPECT_LT(max_abs_diff(s.matrix(), Matrix::diagonal(r)), 1e-14);
}

TEST(MatrixSqrt, ProjectorIsItsOwnRoot)
{
    const std::vector<Complex> plus{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const Matrix p = Matrix::outer(plus);
    const auto s = matrix_sqrt(HermitianMatrix(p));
    EXPECT_LT(max_abs_diff(s.matrix(), p), 1e-12);
}

TEST(MatrixSqrt, SquaresBackOnRandomPsdMatrices)
{
    std::mt19937_64 rng(17);
    for (std::size_t n = 2; n <= 6; ++n) {
        const Matrix b = random_hermitian(n, rng);
        const Matrix a = b * b;
        const auto s = matrix_sqrt(HermitianMatrix(a));
        EXPECT_LT(max_abs_diff(s.matrix() * s.matrix(), a), 1e-9);
    }
}

TEST(MatrixSqrt, RejectsClearlyNegativeInput)
{
    EXPECT_THROW(matrix_sqrt(HermitianMatrix(pauli_z())), NotPositive);
}

TEST(HsInner, IdentityWithItself)
{
    EXPECT_EQ(hs_inner(Matrix::identity(2), Matrix::identity(2)), Complex(2.0));
}

TEST(HsInner, PauliXAndZAreOrthogonal)
{
    EXPECT_EQ(hs_inner(pauli_x(), pauli_z()), Complex(0.0));
}

TEST(HsInner, SelfProductIsRealNonNegative)
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Matrix a(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) = Complex(g(rng), g(rng));
    const Complex v = hs_inner(a, a);
    EXPECT_GE(v.real(), 0.0);
    EXPECT_NEAR(v.imag(), 0.0, 1e-14);
    EXPECT_NEAR(v.real(), a.frobenius_norm() * a.frobenius_norm(), 1e-12);
}

TEST(HsInner, DimensionMismatch)
{
    EXPECT_THROW(hs_inner(Matrix::identity(2), Matrix::identity(3)), DimMismatch);
}

TEST(Qr, ReproducesInputWithUnitaryFactor)
{
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (std::size_t n = 1; n <= 6; ++n) {
        Matrix a(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
        const auto qr = qr_decompose(a);
        EXPECT_TRUE(is_unitary(qr.q));
        EXPECT_LT(max_abs_diff(qr.q * qr.r, a), 1e-12);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) EXPECT_LT(std::abs(qr.r(i, j)), 1e-12);
    }
}

TEST(SingularValues, MatchIndependentSvd)
{
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    for (std::size_t n = 2; n <= 6; ++n) {
        Matrix a(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
        const auto sv = singular_values(a);
        Eigen::JacobiSVD<oracle::CMat> svd(oracle::to_eigen(a));
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(sv[k], svd.singularValues()(k), 1e-11);
    }
}
