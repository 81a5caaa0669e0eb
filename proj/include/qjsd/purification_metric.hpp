#pragma once

// Purification metric d_H: the smallest sqrt(H((|psi><psi| + |phi><phi|)/2))
// over purifications psi of rho and phi of sigma, found by annealing over the
// unitary freedom of sigma's purification.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "qjsd/anneal.hpp"
#include "qjsd/divergences.hpp"
#include "qjsd/pure_states.hpp"
#include "qjsd/states.hpp"

namespace qjsd {

namespace detail {

// The N^2 real parameters are the diagonal followed by (re, im) of each upper
// off-diagonal entry.
inline HermitianMatrix generator_matrix(std::span<const double> params, std::size_t dim)
{
    if (params.size() != dim * dim) throw DimMismatch("generator needs N^2 parameters");
    Matrix h(dim);
    std::size_t k = 0;
    for (std::size_t i = 0; i < dim; ++i) h(i, i) = params[k++];
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) {
            h(i, j) = Complex(params[k], params[k + 1]);
            h(j, i) = std::conj(h(i, j));
            k += 2;
        }
    return HermitianMatrix(h);
}

inline void store_generator(const Matrix& h, std::span<double> params)
{
    const std::size_t dim = h.dim();
    std::size_t k = 0;
    for (std::size_t i = 0; i < dim; ++i) params[k++] = h(i, i).real();
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) {
            params[k++] = h(i, j).real();
            params[k++] = h(i, j).imag();
        }
}

} // namespace detail

/// exp(iH) for the Hermitian H whose N^2 real parameters are the diagonal
/// followed by (re, im) of each upper off-diagonal entry.
inline Matrix unitary_from_generator(std::span<const double> params, std::size_t dim)
{
    const auto e = eigh(detail::generator_matrix(params, dim));
    Matrix u(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            Complex s = 0.0;
            for (std::size_t m = 0; m < dim; ++m)
                s += e.vectors(i, m) * std::polar(1.0, e.values[m]) * std::conj(e.vectors(j, m));
            u(i, j) = s;
        }
    return u;
}

/// sqrt of the von Neumann entropy of (|psi><psi| + |phi><phi|)/2. The mixture
/// has the spectrum of its Gram matrix, (1 +- |<psi|phi>|)/2.
inline double sqrt_entropy_of_pair(const PureState& psi, const PureState& phi)
{
    const double c = std::min(1.0, std::abs(inner(psi.amplitudes(), phi.amplitudes())));
    const std::array<double, 2> values{0.5 * (1.0 - c), 0.5 * (1.0 + c)};
    return std::sqrt(entropy_bits(values));
}

/// Annealing problem over sigma's purification unitary; rho's purification is
/// the canonical one (v = I).
class PurificationProblem {
public:
    PurificationProblem(const DensityMatrix& rho, const DensityMatrix& sigma)
        : sigma_(sigma), psi_(purifications(rho, Matrix::identity(rho.dim())))
    {
        check_same_dim(rho, sigma);
    }

    std::size_t param_count() const { return sigma_.dim() * sigma_.dim(); }
    std::size_t block_size() const { return param_count(); }

    /// Restart 0 starts from v = I; later restarts from a random generator.
    std::vector<double> initial(Engine& rng, std::size_t restart) const
    {
        std::vector<double> p(param_count(), 0.0);
        if (restart == 0) return p;
        std::normal_distribution<double> normal(0.0, 1.0);
        for (auto& v : p) v = normal(rng);
        return p;
    }

    double evaluate(std::span<const double> params) const
    {
        const PureState phi = purifications(sigma_, unitary_from_generator(params, sigma_.dim()));
        return sqrt_entropy_of_pair(psi_, phi);
    }

    double reset(std::span<const double> params) { return evaluate(params); }
    double trial(std::span<const double> params, std::size_t) { return evaluate(params); }
    void commit() {}

    /// Wraps the generator's eigenvalues into [-pi, pi]. exp(iH) is unchanged,
    /// but the parameters stay bounded instead of drifting to where the map is
    /// needlessly rugged.
    void canonicalize(std::span<double> params) const
    {
        const std::size_t dim = sigma_.dim();
        auto e = eigh(detail::generator_matrix(params, dim));
        bool changed = false;
        for (auto& v : e.values) {
            const double w = std::remainder(v, 2.0 * std::numbers::pi);
            if (w != v) changed = true;
            v = w;
        }
        if (changed) detail::store_generator(e.reconstruct(), params);
    }

private:
    DensityMatrix sigma_;
    PureState psi_;
};

/// Schedule used by d_h_by_optimization. The minimum is smooth (quadratic), so
/// steps of size T alone freeze the chain long before it settles; a large
/// proposal ratio keeps it mobile down to the cold end.
inline AnnealSchedule purification_schedule(std::size_t n_params)
{
    AnnealSchedule s;
    s.t_initial = 1.0;
    s.t_final = 1e-9;
    s.cooling_ratio = 0.9;
    s.steps_per_temperature = 20 * n_params;
    s.proposal_scale_ratio = 100.0;
    return s;
}

inline double d_h_by_optimization(const DensityMatrix& rho, const DensityMatrix& sigma, int restarts,
                                  std::uint64_t seed = 0)
{
    check_same_dim(rho, sigma);
    const auto schedule = purification_schedule(rho.dim() * rho.dim());
    const auto chains =
        anneal_restarts([&] { return PurificationProblem(rho, sigma); }, schedule, seed, restarts, 1);
    return chains[best_chain(chains)].best;
}

} // namespace qjsd
