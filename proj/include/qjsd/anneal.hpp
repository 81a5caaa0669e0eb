#pragma once

// Simulated annealing over unconstrained real parameters, plus the triplet
// problem that searches for the smallest triangle defect of sqrt(QJSD).

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qjsd/divergences.hpp"
#include "qjsd/error.hpp"
#include "qjsd/rng.hpp"
#include "qjsd/state_io.hpp"
#include "qjsd/states.hpp"

namespace qjsd {

struct AnnealSchedule {
    double t_initial = 1.0;
    double t_final = 1e-6;
    double cooling_ratio = 0.95;
    std::size_t steps_per_temperature = 0;
    /// Proposal standard deviation is this ratio times the temperature.
    double proposal_scale_ratio = 1.0;

    /// The default schedule for a problem with `n_params` parameters.
    static AnnealSchedule standard(std::size_t n_params)
    {
        AnnealSchedule s;
        s.steps_per_temperature = 200 * n_params;
        return s;
    }

    void validate() const
    {
        if (!(t_final > 0.0 && t_initial > t_final)) throw InvalidConfig("need t_initial > t_final > 0");
        if (!(cooling_ratio > 0.0 && cooling_ratio < 1.0)) throw InvalidConfig("cooling_ratio must lie in (0, 1)");
        if (steps_per_temperature < 1) throw InvalidConfig("steps_per_temperature must be >= 1");
        if (!(proposal_scale_ratio > 0.0)) throw InvalidConfig("proposal_scale_ratio must be > 0");
    }

    std::size_t temperature_count() const
    {
        std::size_t n = 0;
        for (double t = t_initial; t >= t_final * (1.0 - 1e-12); t *= cooling_ratio) ++n;
        return n;
    }
};

/// What the annealing engine needs from a problem.
///
/// Proposals perturb one block of `block_size()` consecutive parameters;
/// `trial` evaluates the perturbed vector knowing only that block changed, and
/// `commit` makes the last trial the current point. A problem may also offer
/// `canonicalize(std::span<double> block)`, applied to each proposal before it
/// is evaluated, mapping the block to an equivalent representative.
template <class P>
concept AnnealProblem = requires(P p, std::span<const double> params, std::size_t block, Engine& rng,
                                 std::size_t restart) {
    { p.param_count() } -> std::convertible_to<std::size_t>;
    { p.block_size() } -> std::convertible_to<std::size_t>;
    { p.initial(rng, restart) } -> std::convertible_to<std::vector<double>>;
    { p.reset(params) } -> std::convertible_to<double>;
    { p.trial(params, block) } -> std::convertible_to<double>;
    p.commit();
};

struct ChainResult {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    /// Best-ever objective at the end of each temperature.
    std::vector<double> trace;
};

/// One Metropolis chain with Gaussian block proposals and geometric cooling.
template <AnnealProblem Problem>
ChainResult anneal_chain(Problem& problem, const AnnealSchedule& schedule, Engine& rng, std::size_t restart)
{
    std::vector<double> params = problem.initial(rng, restart);
    const std::size_t block_size = problem.block_size();
    const std::size_t blocks = params.size() / block_size;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, blocks - 1);

    ChainResult out;
    double current = problem.reset(params);
    out.best = current;
    out.best_params = params;
    std::vector<double> saved(block_size);

    for (double t = schedule.t_initial; t >= schedule.t_final * (1.0 - 1e-12); t *= schedule.cooling_ratio) {
        const double scale = schedule.proposal_scale_ratio * t;
        for (std::size_t step = 0; step < schedule.steps_per_temperature; ++step) {
            const std::size_t block = blocks == 1 ? 0 : pick(rng);
            double* first = params.data() + block * block_size;
            std::copy(first, first + block_size, saved.begin());
            for (std::size_t k = 0; k < block_size; ++k) first[k] += scale * normal(rng);
            if constexpr (requires { problem.canonicalize(std::span<double>(first, block_size)); }) {
                problem.canonicalize(std::span<double>(first, block_size));
            }

            double candidate = std::numeric_limits<double>::infinity();
            try {
                candidate = problem.trial(params, block);
            } catch (const DegenerateBlock&) {
                // unreachable point of the parametrisation; reject
            }
            const double u = uniform(rng);
            const bool accept = candidate <= current || (std::isfinite(candidate) && u < std::exp(-(candidate - current) / t));
            if (accept) {
                problem.commit();
                current = candidate;
                if (current < out.best) {
                    out.best = current;
                    out.best_params = params;
                }
            } else {
                std::copy(saved.begin(), saved.end(), first);
            }
        }
        out.trace.push_back(out.best);
    }
    return out;
}

/// Runs `restarts` independent chains (restart r uses stream derive_seed(seed, r))
/// on up to `workers` threads. `make_problem()` builds a fresh problem per chain.
template <class MakeProblem>
std::vector<ChainResult> anneal_restarts(MakeProblem&& make_problem, const AnnealSchedule& schedule,
                                         std::uint64_t seed, int restarts, unsigned workers)
{
    schedule.validate();
    if (restarts < 1) throw InvalidConfig("restarts must be >= 1");
    if (workers < 1) throw InvalidConfig("workers must be >= 1");
    std::vector<ChainResult> results(static_cast<std::size_t>(restarts));
    std::vector<std::exception_ptr> errors(results.size());

    auto run = [&](std::size_t r) {
        try {
            auto problem = make_problem();
            Engine rng(derive_seed(seed, r));
            results[r] = anneal_chain(problem, schedule, rng, r);
        } catch (...) {
            errors[r] = std::current_exception();
        }
    };

    const std::size_t n_threads = std::min<std::size_t>(workers, results.size());
    if (n_threads <= 1) {
        for (std::size_t r = 0; r < results.size(); ++r) run(r);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t r = w; r < results.size(); r += n_threads) run(r);
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

/// Index of the best chain; ties go to the lowest restart index.
inline std::size_t best_chain(const std::vector<ChainResult>& results)
{
    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r)
        if (results[r].best < results[best].best) best = r;
    return best;
}

// ---------------------------------------------------------------------------
// triplet objectives

inline constexpr double kDegenerateTrace = 1e-30;

/// rho = A A^dagger / Tr(A A^dagger) for the complex matrix A whose entries are
/// the (re, im) pairs of `block` in row-major order.
inline DensityMatrix decode_state(std::span<const double> block, std::size_t dim)
{
    if (block.size() != 2 * dim * dim) {
        throw DimMismatch("block of " + std::to_string(block.size()) + " reals for dim " + std::to_string(dim));
    }
    for (double v : block)
        if (!std::isfinite(v)) throw DegenerateBlock("non-finite parameter");
    Matrix a(dim);
    for (std::size_t k = 0; k < dim * dim; ++k) a(k / dim, k % dim) = Complex(block[2 * k], block[2 * k + 1]);
    Matrix aa = a * a.adjoint();
    const double tr = aa.trace().real();
    if (!(tr > kDegenerateTrace)) throw DegenerateBlock("Tr(A A^dagger) = " + std::to_string(tr));
    return DensityMatrix(HermitianMatrix(aa * Complex(1.0 / tr)));
}

/// Inverse-ish of decode_state: a block whose decode is `rho` (A = sqrt(rho)).
inline std::vector<double> encode_state(const DensityMatrix& rho)
{
    const Matrix a = sqrt_from_eigen(rho.eigen());
    std::vector<double> block;
    block.reserve(2 * a.data().size());
    for (const auto& z : a.data()) {
        block.push_back(z.real());
        block.push_back(z.imag());
    }
    return block;
}

enum class Objective { single, symmetrized };

inline std::string to_string(Objective o)
{
    return o == Objective::single ? "single" : "symmetrized";
}

inline Objective objective_from_string(const std::string& s)
{
    if (s == "single") return Objective::single;
    if (s == "symmetrized") return Objective::symmetrized;
    throw InvalidConfig("unknown objective '" + s + "' (expected single or symmetrized)");
}

namespace detail {

/// Pairwise distances d01 = d(rho, xi), d12 = d(xi, sigma), d02 = d(rho, sigma).
inline double combine(Objective o, double d01, double d12, double d02)
{
    if (o == Objective::single) return d01 + d12 - d02;
    // mean of the defects with xi, rho and sigma as the pivot
    const double pivot_xi = d01 + d12 - d02;
    const double pivot_rho = d01 + d02 - d12;
    const double pivot_sigma = d02 + d12 - d01;
    return (pivot_xi + pivot_rho + pivot_sigma) / 3.0;
}

inline std::size_t triplet_param_count(std::size_t dim)
{
    return 3 * 2 * dim * dim;
}

} // namespace detail

inline std::array<DensityMatrix, 3> decode_triplet(std::span<const double> params, std::size_t dim)
{
    const std::size_t block = 2 * dim * dim;
    if (params.size() != 3 * block) throw DimMismatch("triplet parameters must hold three blocks");
    return {decode_state(params.subspan(0, block), dim), decode_state(params.subspan(block, block), dim),
            decode_state(params.subspan(2 * block, block), dim)};
}

inline double triplet_objective(Objective o, std::span<const double> params, std::size_t dim)
{
    const auto s = decode_triplet(params, dim);
    return detail::combine(o, qjsd_sqrt(s[0], s[1]), qjsd_sqrt(s[1], s[2]), qjsd_sqrt(s[0], s[2]));
}

/// Triangle defect of the decoded triplet (rho, xi, sigma).
inline double objective_single(std::span<const double> params, std::size_t dim)
{
    return triplet_objective(Objective::single, params, dim);
}

/// Defect averaged over the three choices of pivot state.
inline double objective_symmetrized(std::span<const double> params, std::size_t dim)
{
    return triplet_objective(Objective::symmetrized, params, dim);
}

/// Triplet search problem; caches decoded states and pairwise distances so a
/// proposal that moves one state only recomputes the two affected distances.
class TripletProblem {
public:
    TripletProblem(std::size_t dim, Objective objective) : dim_(dim), objective_(objective) {}

    std::size_t param_count() const { return detail::triplet_param_count(dim_); }
    std::size_t block_size() const { return 2 * dim_ * dim_; }

    std::vector<double> initial(Engine& rng, std::size_t) const
    {
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> p(param_count());
        for (auto& v : p) v = normal(rng);
        for (std::size_t b = 0; b < 3; ++b) canonicalize(std::span<double>(p).subspan(b * block_size(), block_size()));
        return p;
    }

    double reset(std::span<const double> params)
    {
        auto s = decode_triplet(params, dim_);
        states_ = {std::move(s[0]), std::move(s[1]), std::move(s[2])};
        dist_ = {qjsd_sqrt(states_[0], states_[1]), qjsd_sqrt(states_[1], states_[2]),
                 qjsd_sqrt(states_[0], states_[2])};
        return value(dist_);
    }

    double trial(std::span<const double> params, std::size_t block)
    {
        const std::size_t bs = block_size();
        trial_block_ = block;
        trial_state_ = decode_state(params.subspan(block * bs, bs), dim_);
        trial_dist_ = dist_;
        auto state = [&](std::size_t i) -> const DensityMatrix& { return i == block ? trial_state_ : states_[i]; };
        if (block != 2) trial_dist_[0] = qjsd_sqrt(state(0), state(1));
        if (block != 0) trial_dist_[1] = qjsd_sqrt(state(1), state(2));
        if (block != 1) trial_dist_[2] = qjsd_sqrt(state(0), state(2));
        return value(trial_dist_);
    }

    void commit()
    {
        states_[trial_block_] = std::move(trial_state_);
        dist_ = trial_dist_;
    }

    /// Rescales a block to unit Frobenius norm. decode_state ignores scale, so
    /// this leaves the objective unchanged but stops |A| from drifting upward,
    /// which would shrink the effective step size.
    void canonicalize(std::span<double> block) const
    {
        double n2 = 0.0;
        for (double v : block) n2 += v * v;
        if (!(n2 > 0.0)) return;
        const double s = 1.0 / std::sqrt(n2);
        for (double& v : block) v *= s;
    }

private:
    double value(const std::array<double, 3>& d) const { return detail::combine(objective_, d[0], d[1], d[2]); }

    std::size_t dim_;
    Objective objective_;
    std::array<DensityMatrix, 3> states_;
    std::array<double, 3> dist_{};
    std::size_t trial_block_ = 0;
    DensityMatrix trial_state_;
    std::array<double, 3> trial_dist_{};
};

struct AnnealConfig {
    std::size_t dim = 2;
    Objective objective = Objective::symmetrized;
    AnnealSchedule schedule;  // steps_per_temperature == 0 selects the standard schedule
    std::uint64_t seed = 0;
    int restarts = 5;
    unsigned workers = 1;
};

struct AnnealResult {
    std::size_t dim = 0;
    Objective objective = Objective::single;
    AnnealSchedule schedule;
    std::uint64_t seed = 0;
    double best_objective = std::numeric_limits<double>::infinity();
    std::size_t best_restart = 0;
    std::vector<double> best_params;
    /// (rho, xi, sigma) decoded from best_params.
    std::vector<DensityMatrix> decoded_states;
    std::vector<double> restart_best;
    std::vector<std::vector<double>> objective_traces;
};

inline AnnealSchedule resolve_schedule(AnnealSchedule s, std::size_t n_params)
{
    if (s.steps_per_temperature == 0) s.steps_per_temperature = AnnealSchedule::standard(n_params).steps_per_temperature;
    return s;
}

inline AnnealResult run_anneal(const AnnealConfig& config)
{
    if (config.dim < 1) throw InvalidConfig("dim must be >= 1");
    const AnnealSchedule schedule = resolve_schedule(config.schedule, detail::triplet_param_count(config.dim));
    auto chains = anneal_restarts([&] { return TripletProblem(config.dim, config.objective); }, schedule,
                                  config.seed, config.restarts, config.workers);

    AnnealResult r;
    r.dim = config.dim;
    r.objective = config.objective;
    r.schedule = schedule;
    r.seed = config.seed;
    r.best_restart = best_chain(chains);
    r.best_objective = chains[r.best_restart].best;
    r.best_params = chains[r.best_restart].best_params;
    for (auto& s : decode_triplet(r.best_params, config.dim)) r.decoded_states.push_back(std::move(s));
    for (auto& c : chains) {
        r.restart_best.push_back(c.best);
        r.objective_traces.push_back(std::move(c.trace));
    }
    return r;
}

inline nlohmann::json to_json(const AnnealSchedule& s)
{
    return {{"t_initial", s.t_initial},
            {"t_final", s.t_final},
            {"cooling_ratio", s.cooling_ratio},
            {"steps_per_temperature", s.steps_per_temperature},
            {"proposal_scale_ratio", s.proposal_scale_ratio}};
}

inline nlohmann::json to_json(const AnnealResult& r)
{
    nlohmann::json states = nlohmann::json::array();
    for (const auto& s : r.decoded_states) states.push_back(nlohmann::json::parse(state_to_json(s)));
    return {
        {"dim", r.dim},
        {"objective", to_string(r.objective)},
        {"seed", r.seed},
        {"schedule", to_json(r.schedule)},
        {"best_objective", r.best_objective},
        {"best_restart", r.best_restart},
        {"best_params", r.best_params},
        {"decoded_states", states},
        {"restart_best", r.restart_best},
        {"objective_traces", r.objective_traces},
    };
}

} // namespace qjsd
