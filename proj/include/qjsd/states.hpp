#pragma once

// Quantum states, POVMs, purifications, and random states drawn from the
// product measure (Haar unitary) x (uniform simplex).

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qjsd/error.hpp"
#include "qjsd/linalg.hpp"
#include "qjsd/probability.hpp"
#include "qjsd/rng.hpp"

namespace qjsd {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kNormTol = 1e-12;

/// Unit-norm state vector.
class PureState {
public:
    PureState() = default;
    explicit PureState(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes))
    {
        if (amps_.empty()) throw InvalidState("empty state vector");
        double n2 = 0.0;
        for (const auto& z : amps_) n2 += std::norm(z);
        if (std::abs(std::sqrt(n2) - 1.0) > kNormTol) {
            throw InvalidState("norm " + std::to_string(std::sqrt(n2)) + " is not 1");
        }
    }

    static PureState normalized(std::vector<Complex> v)
    {
        double n2 = 0.0;
        for (const auto& z : v) n2 += std::norm(z);
        if (!(n2 > 0.0)) throw InvalidState("zero vector");
        const double s = 1.0 / std::sqrt(n2);
        for (auto& z : v) z *= s;
        return PureState(std::move(v));
    }

    static PureState basis(std::size_t dim, std::size_t k)
    {
        std::vector<Complex> v(dim);
        v.at(k) = 1.0;
        return PureState(std::move(v));
    }

    std::size_t dim() const noexcept { return amps_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

private:
    std::vector<Complex> amps_;
};

/// |<a|b>|
inline double overlap(const PureState& a, const PureState& b)
{
    if (a.dim() != b.dim()) throw DimMismatch("overlap of states in dims " + std::to_string(a.dim()) +
                                              " and " + std::to_string(b.dim()));
    return std::abs(inner(a.amplitudes(), b.amplitudes()));
}

/// Unit-trace positive semidefinite Hermitian matrix.
///
/// The eigendecomposition is computed once at construction (it is needed for
/// validation anyway) and never mutated, so instances are freely shareable.
class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(HermitianMatrix m) : inner_(std::move(m))
    {
        check_trace();
        eigen_ = eigh(inner_);
        clamp_nonnegative(eigen_.values);
    }

    /// Builds U diag(values) U^dagger from a trusted spectrum (values on the
    /// simplex, U unitary); the supplied decomposition becomes the cached one.
    static DensityMatrix from_spectrum(std::span<const double> values, const Matrix& unitary)
    {
        const std::size_t n = values.size();
        if (unitary.dim() != n) throw DimMismatch("spectrum and eigenbasis sizes differ");
        EigenDecomposition e{std::vector<double>(values.begin(), values.end()), unitary};
        // ascending order is part of the EigenDecomposition contract
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        EigenDecomposition sorted{std::vector<double>(n), Matrix(n)};
        for (std::size_t k = 0; k < n; ++k) {
            sorted.values[k] = e.values[order[k]];
            for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, k) = e.vectors(i, order[k]);
        }
        clamp_nonnegative(sorted.values);
        DensityMatrix rho;
        rho.inner_ = HermitianMatrix(sorted.reconstruct());
        rho.check_trace();
        rho.eigen_ = std::move(sorted);
        return rho;
    }

    static DensityMatrix maximally_mixed(std::size_t dim)
    {
        return DensityMatrix(HermitianMatrix(Matrix::identity(dim) * Complex(1.0 / double(dim))));
    }

    std::size_t dim() const noexcept { return inner_.dim(); }
    const HermitianMatrix& hermitian() const noexcept { return inner_; }
    const Matrix& matrix() const noexcept { return inner_.matrix(); }
    const EigenDecomposition& eigen() const noexcept { return eigen_; }

    double purity() const
    {
        double s = 0.0;
        for (double x : eigen_.values) s += x * x;
        return s;
    }
    double linear_entropy() const { return 1.0 - purity(); }

    friend bool operator==(const DensityMatrix& a, const DensityMatrix& b) { return a.matrix() == b.matrix(); }

private:
    void check_trace() const
    {
        const double t = inner_.trace();
        if (std::abs(t - 1.0) > kTraceTol) throw InvalidState("trace " + std::to_string(t) + " is not 1");
    }

    HermitianMatrix inner_;
    EigenDecomposition eigen_;
};

inline DensityMatrix density_from_pure(const PureState& psi)
{
    return DensityMatrix(HermitianMatrix(Matrix::outer(psi.amplitudes())));
}

/// Positive operator-valued measure: PSD elements summing to the identity.
class Povm {
public:
    explicit Povm(std::vector<HermitianMatrix> elements) : elements_(std::move(elements))
    {
        if (elements_.empty()) throw InvalidState("POVM needs at least one element");
        const std::size_t n = elements_.front().dim();
        Matrix sum(n);
        for (const auto& e : elements_) {
            if (e.dim() != n) throw DimMismatch("POVM elements of different dims");
            auto values = eigh(e).values;
            clamp_nonnegative(values);
            sum += e.matrix();
        }
        if (max_abs_diff(sum, Matrix::identity(n)) > kTraceTol) {
            throw InvalidState("POVM elements do not sum to the identity");
        }
    }

    /// Rank-1 projective measurement onto the columns of a unitary.
    static Povm projective(const Matrix& basis)
    {
        if (!is_unitary(basis)) throw NotUnitary("measurement basis is not orthonormal");
        std::vector<HermitianMatrix> elems;
        elems.reserve(basis.dim());
        for (std::size_t k = 0; k < basis.dim(); ++k) {
            elems.emplace_back(Matrix::outer(basis.column(k)));
        }
        return Povm(std::move(elems));
    }

    std::size_t dim() const noexcept { return elements_.front().dim(); }
    std::size_t outcomes() const noexcept { return elements_.size(); }
    const std::vector<HermitianMatrix>& elements() const noexcept { return elements_; }

    /// Outcome distribution Tr(E_i rho).
    ProbabilityVector outcome_distribution(const DensityMatrix& rho) const
    {
        if (rho.dim() != dim()) throw DimMismatch("POVM and state dims differ");
        std::vector<double> p;
        p.reserve(elements_.size());
        for (const auto& e : elements_) p.push_back(hs_inner(e.matrix(), rho.matrix()).real());
        return ProbabilityVector::normalized(std::move(p));
    }

private:
    std::vector<HermitianMatrix> elements_;
};

inline constexpr std::uint64_t kRejectionBudget = 1'000'000;

/// Seeded source of random states under the measure Haar x uniform simplex.
///
/// A value type: copying a sampler forks an identical stream.
class StateSampler {
public:
    StateSampler(std::size_t dim, std::uint64_t seed, std::optional<double> mixedness_floor = std::nullopt)
        : dim_(dim), seed_(seed), floor_(mixedness_floor), engine_(seed)
    {
        if (dim_ == 0) throw InvalidConfig("dimension must be positive");
        if (floor_ && !(*floor_ >= 0.0 && *floor_ < 1.0)) {
            throw InvalidConfig("mixedness floor must lie in [0, 1)");
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::optional<double> mixedness_floor() const noexcept { return floor_; }

    Complex complex_gaussian()
    {
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return Complex(re, im) / std::numbers::sqrt2;
    }
    double exponential() { return exponential_(engine_); }
    double uniform() { return uniform_(engine_); }
    Engine& engine() noexcept { return engine_; }

private:
    std::size_t dim_;
    std::uint64_t seed_;
    std::optional<double> floor_;
    Engine engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::exponential_distribution<double> exponential_{1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) moved into Q (plain QR is not Haar).
inline Matrix sample_haar_unitary(StateSampler& sampler)
{
    const std::size_t n = sampler.dim();
    Matrix g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = sampler.complex_gaussian();
    auto [q, r] = qr_decompose(g);
    for (std::size_t k = 0; k < n; ++k) {
        const double mag = std::abs(r(k, k));
        const Complex phase = mag > 0.0 ? r(k, k) / mag : Complex(1.0);
        for (std::size_t i = 0; i < n; ++i) q(i, k) *= phase;
    }
    return q;
}

/// Uniform point on the probability simplex (normalised i.i.d. exponentials).
inline ProbabilityVector sample_simplex(StateSampler& sampler)
{
    const std::size_t n = sampler.dim();
    std::vector<double> e(n);
    double sum = 0.0;
    for (auto& x : e) {
        x = sampler.exponential();
        sum += x;
    }
    for (auto& x : e) x /= sum;
    return ProbabilityVector::normalized(std::move(e));
}

/// rho = U diag(lambda) U^dagger with U Haar and lambda uniform on the simplex,
/// rejecting draws below the sampler's mixedness floor (linear entropy).
inline DensityMatrix sample_state(StateSampler& sampler)
{
    for (std::uint64_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
        Matrix u = sample_haar_unitary(sampler);
        ProbabilityVector lambda = sample_simplex(sampler);
        if (const auto floor = sampler.mixedness_floor(); floor && *floor > 0.0) {
            double purity = 0.0;
            for (double x : lambda.values()) purity += x * x;
            if (1.0 - purity < *floor) continue;
        }
        return DensityMatrix::from_spectrum(lambda.values(), u);
    }
    throw RejectionBudgetExceeded("mixedness floor rejected " + std::to_string(kRejectionBudget) +
                                  " consecutive draws");
}

/// Purification sum_i sqrt(r_i) |r_i> (x) v|i> in dimension N^2, with the
/// eigenvalues r_i taken in descending order (so a pure state with v = I gives
/// psi (x) |0>). Amplitude index is a * N + b for |a> (x) |b>.
inline PureState purifications(const DensityMatrix& rho, const Matrix& v)
{
    const std::size_t n = rho.dim();
    if (v.dim() != n) throw DimMismatch("purification unitary must be " + std::to_string(n) + "x" +
                                        std::to_string(n));
    if (!is_unitary(v)) throw NotUnitary("purification freedom must be unitary");
    const auto& e = rho.eigen();
    const double floor = roundoff_floor(e);
    std::vector<Complex> psi(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = n - 1 - i;  // eigen order is ascending
        if (e.values[k] < floor) continue;
        const double w = std::sqrt(e.values[k]);
        for (std::size_t a = 0; a < n; ++a) {
            const Complex ra = w * e.vectors(a, k);
            for (std::size_t b = 0; b < n; ++b) psi[a * n + b] += ra * v(b, i);
        }
    }
    return PureState::normalized(std::move(psi));
}

/// Reduced state on the first factor of a bipartite pure state.
inline DensityMatrix partial_trace_second(const PureState& psi, std::size_t dim_a)
{
    if (dim_a == 0 || psi.dim() % dim_a != 0) {
        throw DimMismatch("state dim " + std::to_string(psi.dim()) + " is not a multiple of " +
                          std::to_string(dim_a));
    }
    const std::size_t dim_b = psi.dim() / dim_a;
    Matrix r(dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t j = 0; j < dim_a; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < dim_b; ++k) s += psi[i * dim_b + k] * std::conj(psi[j * dim_b + k]);
            r(i, j) = s;
        }
    return DensityMatrix(HermitianMatrix(r));
}

} // namespace qjsd
