#pragma once

// Classical and quantum divergences. All entropies are in bits.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qjsd/error.hpp"
#include "qjsd/linalg.hpp"
#include "qjsd/probability.hpp"
#include "qjsd/states.hpp"

namespace qjsd {

/// Eigenvalues below this are outside the support of an operator.
inline constexpr double kSupportCutoff = 1e-12;
/// Weight a state may put on the null space of a reference before it counts
/// as a support violation.
inline constexpr double kSupportLeakTol = 1e-10;

/// -sum x log2 x over the entries, with 0 log 0 = 0.
inline double entropy_bits(std::span<const double> values)
{
    double h = 0.0;
    for (double x : values)
        if (x > 0.0) h -= x * std::log2(x);
    return h;
}

// ---------------------------------------------------------------------------
// classical

inline double shannon_entropy(const ProbabilityVector& p)
{
    return entropy_bits(p.values());
}

inline void check_same_length(const ProbabilityVector& p, const ProbabilityVector& q)
{
    if (p.size() != q.size()) {
        throw DimMismatch("distributions of length " + std::to_string(p.size()) + " and " +
                          std::to_string(q.size()));
    }
}

inline double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& q)
{
    check_same_length(p, q);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) throw Undefined("p has mass where q vanishes (index " + std::to_string(i) + ")");
        s += p[i] * std::log2(p[i] / q[i]);
    }
    return std::max(0.0, s);
}

/// Jensen-Shannon divergence, evaluated as
/// 1/2 [sum p log(2p/(p+q)) + sum q log(2q/(p+q))], which is exactly zero for p == q.
inline double classical_jsd(const ProbabilityVector& p, const ProbabilityVector& q)
{
    check_same_length(p, q);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = p[i] + q[i];
        const double tp = p[i] > 0.0 ? p[i] * std::log2(2.0 * p[i] / m) : 0.0;
        const double tq = q[i] > 0.0 ? q[i] * std::log2(2.0 * q[i] / m) : 0.0;
        s += tp + tq;  // one addition per term keeps D(p,q) == D(q,p) bitwise
    }
    return std::clamp(0.5 * s, 0.0, 1.0);
}

/// (p, r, q) with r the pivot.
using DistributionTriplet = std::array<ProbabilityVector, 3>;

/// Smallest sqrt(D(p,r)) + sqrt(D(r,q)) - sqrt(D(p,q)) over the triplets;
/// +infinity for an empty list.
inline double classical_jsd_sqrt_is_metric_check(std::span<const DistributionTriplet> triplets)
{
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [p, r, q] : triplets) {
        const double d = std::sqrt(classical_jsd(p, r)) + std::sqrt(classical_jsd(r, q)) -
                         std::sqrt(classical_jsd(p, q));
        worst = std::min(worst, d);
    }
    return worst;
}

/// Zero-sum real coefficients paired with distributions of a common length.
class SchoenbergSample {
public:
    SchoenbergSample(std::vector<double> coefficients, std::vector<ProbabilityVector> distributions)
        : coeffs_(std::move(coefficients)), dists_(std::move(distributions))
    {
        if (coeffs_.size() < 2) throw InvalidConfig("need at least two terms");
        if (coeffs_.size() != dists_.size()) throw DimMismatch("one coefficient per distribution");
        double sum = 0.0;
        for (double c : coeffs_) sum += c;
        if (std::abs(sum) > kProbabilitySumTol) {
            throw InvalidConfig("coefficients sum to " + std::to_string(sum) + ", not 0");
        }
        for (const auto& d : dists_) check_same_length(dists_.front(), d);
    }

    std::span<const double> coefficients() const noexcept { return coeffs_; }
    std::span<const ProbabilityVector> distributions() const noexcept { return dists_; }

private:
    std::vector<double> coeffs_;
    std::vector<ProbabilityVector> dists_;
};

/// sum_ij c_i c_j D_JS(P_i, P_j); nonpositive for a negative definite kernel.
inline double schoenberg_check(const SchoenbergSample& s)
{
    const auto c = s.coefficients();
    const auto p = s.distributions();
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) total += 2.0 * c[i] * c[j] * classical_jsd(p[i], p[j]);
    return total;
}

// ---------------------------------------------------------------------------
// quantum

inline void check_same_dim(const DensityMatrix& a, const DensityMatrix& b)
{
    if (a.dim() != b.dim()) {
        throw DimMismatch("states of dim " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    }
}

inline double von_neumann_entropy(const DensityMatrix& rho)
{
    return entropy_bits(rho.eigen().values);
}

namespace detail {

/// <v|m|v> for column k of `basis`.
inline double expectation(const Matrix& m, const Matrix& basis, std::size_t k)
{
    const std::size_t n = m.dim();
    Complex s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Complex row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += m(i, j) * basis(j, k);
        s += std::conj(basis(i, k)) * row;
    }
    return s.real();
}

inline DensityMatrix midpoint(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    return DensityMatrix(HermitianMatrix((rho.matrix() + sigma.matrix()) * Complex(0.5)));
}

} // namespace detail

/// Tr[rho (log rho - log sigma)]; requires supp(rho) within supp(sigma).
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    check_same_dim(rho, sigma);
    const auto& es = sigma.eigen();
    double cross = 0.0;
    for (std::size_t k = 0; k < es.dim(); ++k) {
        const double weight = detail::expectation(rho.matrix(), es.vectors, k);
        if (es.values[k] < kSupportCutoff) {
            if (weight > kSupportLeakTol) {
                throw SupportViolation("rho has weight " + std::to_string(weight) +
                                       " outside the support of sigma");
            }
            continue;
        }
        cross += weight * std::log2(es.values[k]);
    }
    return std::max(0.0, -von_neumann_entropy(rho) - cross);
}

/// Quantum Jensen-Shannon divergence H((rho+sigma)/2) - H(rho)/2 - H(sigma)/2.
inline double qjsd(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    check_same_dim(rho, sigma);
    if (rho == sigma) return 0.0;
    const double h_mid = von_neumann_entropy(detail::midpoint(rho, sigma));
    const double d = h_mid - 0.5 * von_neumann_entropy(rho) - 0.5 * von_neumann_entropy(sigma);
    return std::clamp(d, 0.0, 1.0);
}

/// The same divergence as 1/2 [S(rho, M) + S(sigma, M)], M the midpoint.
inline double qjsd_relative_form(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    check_same_dim(rho, sigma);
    const DensityMatrix mid = detail::midpoint(rho, sigma);
    return 0.5 * (relative_entropy(rho, mid) + relative_entropy(sigma, mid));
}

/// The same divergence from the spectra of rho, sigma and rho + sigma:
///
///   1/2 [ sum_{k,i} |<t_k|r_i>|^2 r_i log(2 r_i / tau_k)
///       + sum_{k,j} |<t_k|s_j>|^2 s_j log(2 s_j / tau_k) ]
///
/// with tau_k = sum_i r_i |<t_k|r_i>|^2 + sum_j s_j |<t_k|s_j>|^2 and |t_k>
/// the eigenvectors of the unnormalised sum rho + sigma.
inline double qjsd_spectral(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    check_same_dim(rho, sigma);
    const std::size_t n = rho.dim();
    const auto& er = rho.eigen();
    const auto& es = sigma.eigen();
    const auto et = eigh(HermitianMatrix(rho.matrix() + sigma.matrix()));

    auto overlaps = [&](const Matrix& basis) {
        // w[k][i] = |<t_k|basis_i>|^2
        std::vector<double> w(n * n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) {
                Complex s = 0.0;
                for (std::size_t a = 0; a < n; ++a) s += std::conj(et.vectors(a, k)) * basis(a, i);
                w[k * n + i] = std::norm(s);
            }
        return w;
    };
    const auto wr = overlaps(er.vectors);
    const auto ws = overlaps(es.vectors);

    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double tau = 0.0;
        for (std::size_t i = 0; i < n; ++i) tau += er.values[i] * wr[k * n + i] + es.values[i] * ws[k * n + i];
        if (!(tau > 0.0)) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = er.values[i], wri = wr[k * n + i];
            if (r > 0.0 && wri > 0.0) total += wri * r * std::log2(2.0 * r / tau);
            const double s = es.values[i], wsi = ws[k * n + i];
            if (s > 0.0 && wsi > 0.0) total += wsi * s * std::log2(2.0 * s / tau);
        }
    }
    return std::clamp(0.5 * total, 0.0, 1.0);
}

inline double qjsd_sqrt(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    return std::sqrt(qjsd(rho, sigma));
}

/// Angle arccos|<phi|psi>| between pure states.
inline double wootters_distance(const PureState& psi, const PureState& phi)
{
    return std::acos(std::min(1.0, overlap(psi, phi)));
}

inline double hilbert_schmidt_distance(const HermitianMatrix& a, const HermitianMatrix& b)
{
    if (a.dim() != b.dim()) throw DimMismatch("hilbert_schmidt_distance");
    const Matrix d = a.matrix() - b.matrix();
    return std::sqrt(std::max(0.0, hs_inner(d, d).real()));
}

inline double hilbert_schmidt_distance(const DensityMatrix& a, const DensityMatrix& b)
{
    return hilbert_schmidt_distance(a.hermitian(), b.hermitian());
}

/// Classical JSD of the outcome statistics Tr(E_i rho), Tr(E_i sigma).
inline double measured_jsd(const DensityMatrix& rho, const DensityMatrix& sigma, const Povm& povm)
{
    check_same_dim(rho, sigma);
    if (povm.dim() != rho.dim()) throw DimMismatch("POVM acts on dim " + std::to_string(povm.dim()));
    return classical_jsd(povm.outcome_distribution(rho), povm.outcome_distribution(sigma));
}

/// Lower bound on the supremum of measured_jsd over all POVMs, from a fixed set
/// of candidate projective measurements (eigenbases of rho - sigma, rho, sigma
/// and the midpoint) plus `restarts` Haar-random bases drawn from `seed`.
inline double djs1_lower_bound(const DensityMatrix& rho, const DensityMatrix& sigma, int restarts,
                               std::uint64_t seed = 0)
{
    check_same_dim(rho, sigma);
    if (restarts < 1) throw InvalidConfig("restarts must be >= 1");
    if (rho == sigma) return 0.0;
    std::vector<Matrix> bases{
        eigh(HermitianMatrix(rho.matrix() - sigma.matrix())).vectors,
        rho.eigen().vectors,
        sigma.eigen().vectors,
        detail::midpoint(rho, sigma).eigen().vectors,
    };
    StateSampler sampler(rho.dim(), seed);
    for (int r = 0; r < restarts; ++r) bases.push_back(sample_haar_unitary(sampler));

    double best = 0.0;
    for (const auto& b : bases) best = std::max(best, measured_jsd(rho, sigma, Povm::projective(b)));
    return best;
}

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), evaluated as the
/// nuclear norm of sqrt(sigma) sqrt(rho).
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    check_same_dim(rho, sigma);
    if (rho == sigma) return 1.0;
    const Matrix product = sqrt_from_eigen(sigma.eigen()) * sqrt_from_eigen(rho.eigen());
    double f = 0.0;
    for (double s : singular_values(product)) f += s;
    return std::clamp(f, 0.0, 1.0);
}

} // namespace qjsd
