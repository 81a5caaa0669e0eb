#include <cmath>

#include <gtest/gtest.h>

#include "qjsd/purification_metric.hpp"

using namespace qjsd;

TEST(Generator, ZeroGivesIdentity)
{
    const std::vector<double> p(9, 0.0);
    EXPECT_LT(max_abs_diff(unitary_from_generator(p, 3), Matrix::identity(3)), 1e-15);
}

TEST(Generator, AlwaysUnitary)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 3.0);
    for (std::size_t n = 2; n <= 4; ++n) {
        std::vector<double> p(n * n);
        for (auto& v : p) v = g(rng);
        EXPECT_TRUE(is_unitary(unitary_from_generator(p, n)));
    }
    EXPECT_THROW(unitary_from_generator(std::vector<double>(3), 2), DimMismatch);
}

TEST(Generator, DiagonalGeneratorGivesPhases)
{
    const std::vector<double> p{0.3, -1.2, 0.0, 0.0};
    const auto u = unitary_from_generator(p, 2);
    EXPECT_NEAR(std::abs(u(0, 0) - std::polar(1.0, 0.3)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(u(1, 1) - std::polar(1.0, -1.2)), 0.0, 1e-14);
}

TEST(PurificationProblem, CanonicalizeKeepsTheUnitary)
{
    const auto rho = DensityMatrix::maximally_mixed(2);
    PurificationProblem problem(rho, rho);
    std::vector<double> p{7.0, -9.5, 4.0, -3.0};
    const auto before = unitary_from_generator(p, 2);
    problem.canonicalize(p);
    EXPECT_LT(max_abs_diff(unitary_from_generator(p, 2), before), 1e-12);
    double norm = 0.0;
    for (double v : p) norm += v * v;
    EXPECT_LE(std::sqrt(norm), 2.0 * std::numbers::pi);
}

TEST(SqrtEntropyOfPair, Extremes)
{
    const auto a = PureState::basis(2, 0);
    EXPECT_NEAR(sqrt_entropy_of_pair(a, a), 0.0, 1e-12);
    EXPECT_NEAR(sqrt_entropy_of_pair(a, PureState::basis(2, 1)), 1.0, 1e-12);
    EXPECT_NEAR(sqrt_entropy_of_pair(a, PureState::normalized({1.0, 1.0})), std::sqrt(phi_pure(1 / std::sqrt(2.0))),
                1e-12);
}

TEST(DhOptimization, EqualStatesGiveZero)
{
    StateSampler s(2, 3);
    const auto rho = sample_state(s);
    EXPECT_NEAR(d_h_by_optimization(rho, rho, 2), 0.0, 1e-6);
}

TEST(DhOptimization, MixedVersusPureQubit)
{
    const auto mixed = DensityMatrix::maximally_mixed(2);
    const auto zero = density_from_pure(PureState::basis(2, 0));
    EXPECT_NEAR(d_h_by_optimization(mixed, zero, 3), d_h_closed_form(mixed, zero), 1e-4);
}

TEST(DhOptimization, NeverBeatsClosedForm)
{
    StateSampler s(2, 9);
    for (int k = 0; k < 20; ++k) {
        const auto rho = sample_state(s);
        const auto sigma = sample_state(s);
        const double found = d_h_by_optimization(rho, sigma, 2, std::uint64_t(k));
        EXPECT_GE(found, d_h_closed_form(rho, sigma) - 1e-6);
    }
}

TEST(DhOptimization, Deterministic)
{
    StateSampler s(3, 10);
    const auto rho = sample_state(s);
    const auto sigma = sample_state(s);
    EXPECT_EQ(d_h_by_optimization(rho, sigma, 1, 5), d_h_by_optimization(rho, sigma, 1, 5));
}
