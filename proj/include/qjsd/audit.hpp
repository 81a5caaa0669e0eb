#pragma once

// Monte Carlo audit of the triangle inequality for sqrt(QJSD) over triplets of
// random states.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qjsd/divergences.hpp"
#include "qjsd/error.hpp"
#include "qjsd/rng.hpp"
#include "qjsd/states.hpp"

namespace qjsd {

/// d(rho, xi) + d(xi, sigma) - d(rho, sigma) with xi the pivot.
inline double triangle_defect(const DensityMatrix& rho, const DensityMatrix& xi, const DensityMatrix& sigma)
{
    check_same_dim(rho, xi);
    check_same_dim(xi, sigma);
    return qjsd_sqrt(rho, xi) + qjsd_sqrt(xi, sigma) - qjsd_sqrt(rho, sigma);
}

/// Fixed-width histogram over [low, high) with underflow and overflow counters.
class Histogram {
public:
    Histogram() = default;

    static Histogram uniform(double low, double high, double width)
    {
        if (!(width > 0.0) || !(high > low)) throw InvalidConfig("histogram needs width > 0 and high > low");
        const double ratio = (high - low) / width;
        const auto bins = static_cast<std::size_t>(std::llround(ratio));
        if (bins == 0 || std::abs(ratio - double(bins)) > 1e-9 * std::max(1.0, ratio)) {
            throw InvalidConfig("range is not a whole number of bins");
        }
        Histogram h;
        h.edges_.resize(bins + 1);
        for (std::size_t i = 0; i <= bins; ++i) h.edges_[i] = low + double(i) * width;
        h.edges_.back() = high;
        h.counts_.assign(bins, 0);
        return h;
    }

    void add(double x)
    {
        ++total_;
        if (x < edges_.front()) {
            ++underflow_;
        } else if (x >= edges_.back()) {
            ++overflow_;
        } else {
            const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
            ++counts_[static_cast<std::size_t>(it - edges_.begin()) - 1];
        }
    }

    const std::vector<double>& bin_edges() const noexcept { return edges_; }
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t underflow() const noexcept { return underflow_; }
    std::uint64_t overflow() const noexcept { return overflow_; }
    std::uint64_t total() const noexcept { return total_; }

    /// Number of samples strictly below `x`, for x on a bin edge.
    std::uint64_t count_below(double x) const
    {
        std::uint64_t n = underflow_;
        for (std::size_t i = 0; i < counts_.size(); ++i)
            if (edges_[i + 1] <= x) n += counts_[i];
        if (x > edges_.back()) n += overflow_;
        return n;
    }

    friend Histogram histogram_merge(const Histogram& a, const Histogram& b);
    friend bool operator==(const Histogram&, const Histogram&) = default;

private:
    std::vector<double> edges_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t underflow_ = 0;
    std::uint64_t overflow_ = 0;
    std::uint64_t total_ = 0;
};

inline Histogram histogram_merge(const Histogram& a, const Histogram& b)
{
    if (a.edges_ != b.edges_) throw EdgeMismatch("histograms have different bin edges");
    Histogram r = a;
    for (std::size_t i = 0; i < r.counts_.size(); ++i) r.counts_[i] += b.counts_[i];
    r.underflow_ += b.underflow_;
    r.overflow_ += b.overflow_;
    r.total_ += b.total_;
    return r;
}

/// CSV with one row per bin plus underflow/overflow comment rows.
inline std::string histogram_csv(const Histogram& h)
{
    std::string out = "bin_low,bin_high,count,probability\n";
    char buf[128];
    const double total = h.total() ? double(h.total()) : 1.0;
    for (std::size_t i = 0; i < h.counts().size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%llu,%.12g\n", h.bin_edges()[i], h.bin_edges()[i + 1],
                      static_cast<unsigned long long>(h.counts()[i]), double(h.counts()[i]) / total);
        out += buf;
    }
    out += "# underflow," + std::to_string(h.underflow()) + "\n";
    out += "# overflow," + std::to_string(h.overflow()) + "\n";
    return out;
}

struct AuditConfig {
    std::size_t dim = 2;
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 1;
    double bin_width = 0.002;
    double tail_max = 0.2;
    double tolerance = 1e-9;
    std::optional<double> mixedness_floor;
    unsigned workers = 1;
};

/// One audited triplet; `triplet_seed` regenerates (rho, xi, sigma).
struct TriangleSample {
    double defect = 0.0;
    std::uint64_t triplet_index = 0;
    std::uint64_t triplet_seed = 0;
};

inline constexpr std::size_t kTrackedSmallest = 10;
inline constexpr std::size_t kMaxReportedViolations = 1000;

struct AuditReport {
    std::size_t dim = 0;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    /// Defects in [-tolerance, 0): floating-point noise, not violations.
    std::uint64_t noise_negatives = 0;
    double min_defect = std::numeric_limits<double>::infinity();
    Histogram histogram;
    double tolerance = 0.0;
    double bin_width = 0.0;
    double tail_max = 0.0;
    std::optional<double> mixedness_floor;
    std::uint64_t seed = 0;
    std::vector<TriangleSample> smallest;
    std::vector<TriangleSample> violating;

    /// Empirical P(defect < x) for x on a bin edge.
    double probability_below(double x) const
    {
        return histogram.total() ? double(histogram.count_below(x)) / double(histogram.total()) : 0.0;
    }
};

inline std::uint64_t triplet_seed(std::uint64_t run_seed, std::uint64_t index)
{
    return derive_seed(run_seed, index);
}

/// Regenerates the triplet (rho, xi, sigma) of an audit from its seed.
inline std::array<DensityMatrix, 3> regenerate_triplet(std::size_t dim, std::uint64_t seed,
                                                       std::optional<double> mixedness_floor = std::nullopt)
{
    StateSampler sampler(dim, seed, mixedness_floor);
    DensityMatrix rho = sample_state(sampler);
    DensityMatrix xi = sample_state(sampler);
    DensityMatrix sigma = sample_state(sampler);
    return {std::move(rho), std::move(xi), std::move(sigma)};
}

namespace detail {

inline bool sample_less(const TriangleSample& a, const TriangleSample& b)
{
    return a.defect < b.defect || (a.defect == b.defect && a.triplet_index < b.triplet_index);
}

inline void validate(const AuditConfig& c)
{
    if (c.dim == 0) throw InvalidConfig("dim must be >= 1");
    if (c.samples < 1) throw InvalidConfig("samples must be >= 1");
    if (!(c.bin_width > 0.0)) throw InvalidConfig("bin_width must be > 0");
    if (!(c.tail_max > 0.0)) throw InvalidConfig("tail_max must be > 0");
    if (!(c.tolerance >= 0.0)) throw InvalidConfig("tolerance must be >= 0");
    if (c.workers < 1) throw InvalidConfig("workers must be >= 1");
    if (c.mixedness_floor && !(*c.mixedness_floor >= 0.0 && *c.mixedness_floor < 1.0)) {
        throw InvalidConfig("mixedness floor must lie in [0, 1)");
    }
}

inline AuditReport empty_report(const AuditConfig& c)
{
    AuditReport r;
    r.dim = c.dim;
    r.samples = 0;
    r.histogram = Histogram::uniform(-c.tail_max, c.tail_max, c.bin_width);
    r.tolerance = c.tolerance;
    r.bin_width = c.bin_width;
    r.tail_max = c.tail_max;
    r.mixedness_floor = c.mixedness_floor;
    r.seed = c.seed;
    return r;
}

inline void audit_range(const AuditConfig& c, std::uint64_t begin, std::uint64_t end, AuditReport& out)
{
    for (std::uint64_t i = begin; i < end; ++i) {
        const std::uint64_t ts = triplet_seed(c.seed, i);
        const auto [rho, xi, sigma] = regenerate_triplet(c.dim, ts, c.mixedness_floor);
        const double defect = triangle_defect(rho, xi, sigma);
        if (!std::isfinite(defect)) throw NonConvergence("non-finite defect at triplet " + std::to_string(i));
        const TriangleSample s{defect, i, ts};
        ++out.samples;
        out.histogram.add(defect);
        out.min_defect = std::min(out.min_defect, defect);
        if (defect < -c.tolerance) {
            ++out.violations;
            if (out.violating.size() < kMaxReportedViolations) out.violating.push_back(s);
        } else if (defect < 0.0) {
            ++out.noise_negatives;
        }
        if (out.smallest.size() < kTrackedSmallest || sample_less(s, out.smallest.back())) {
            const auto pos = std::upper_bound(out.smallest.begin(), out.smallest.end(), s, sample_less);
            out.smallest.insert(pos, s);
            if (out.smallest.size() > kTrackedSmallest) out.smallest.pop_back();
        }
    }
}

/// Folds shard `b` (later triplet indices) into `a`.
inline void merge_into(AuditReport& a, const AuditReport& b)
{
    a.samples += b.samples;
    a.violations += b.violations;
    a.noise_negatives += b.noise_negatives;
    a.min_defect = std::min(a.min_defect, b.min_defect);
    a.histogram = histogram_merge(a.histogram, b.histogram);
    for (const auto& s : b.violating)
        if (a.violating.size() < kMaxReportedViolations) a.violating.push_back(s);
    a.smallest.insert(a.smallest.end(), b.smallest.begin(), b.smallest.end());
    std::sort(a.smallest.begin(), a.smallest.end(), sample_less);
    if (a.smallest.size() > kTrackedSmallest) a.smallest.resize(kTrackedSmallest);
}

} // namespace detail

/// Audits `samples` triplets. Triplet i is drawn from its own stream
/// derive_seed(seed, i), so the report does not depend on `workers`.
inline AuditReport run_audit(const AuditConfig& config)
{
    detail::validate(config);
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(config.workers, config.samples));
    std::vector<AuditReport> shards(workers, detail::empty_report(config));
    std::vector<std::exception_ptr> errors(workers);

    auto bounds = [&](unsigned w) { return config.samples * w / workers; };
    auto work = [&](unsigned w) {
        try {
            detail::audit_range(config, bounds(w), bounds(w + 1), shards[w]);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    AuditReport report = std::move(shards.front());
    for (unsigned w = 1; w < workers; ++w) detail::merge_into(report, shards[w]);
    return report;
}

inline nlohmann::json to_json(const TriangleSample& s)
{
    return {{"defect", s.defect}, {"triplet_index", s.triplet_index}, {"triplet_seed", s.triplet_seed}};
}

inline nlohmann::json to_json(const AuditReport& r)
{
    nlohmann::json smallest = nlohmann::json::array();
    for (const auto& s : r.smallest) smallest.push_back(to_json(s));
    nlohmann::json violating = nlohmann::json::array();
    for (const auto& s : r.violating) violating.push_back(to_json(s));
    return {
        {"dim", r.dim},
        {"samples", r.samples},
        {"seed", r.seed},
        {"tolerance", r.tolerance},
        {"violations", r.violations},
        {"noise_negatives", r.noise_negatives},
        {"min_defect", r.min_defect},
        {"mixedness_floor", r.mixedness_floor ? nlohmann::json(*r.mixedness_floor) : nlohmann::json(nullptr)},
        {"histogram",
         {{"bin_width", r.bin_width},
          {"tail_max", r.tail_max},
          {"bin_edges", r.histogram.bin_edges()},
          {"counts", r.histogram.counts()},
          {"underflow", r.histogram.underflow()},
          {"overflow", r.histogram.overflow()},
          {"total", r.histogram.total()},
          {"normalization", "probability per bin (count / total)"}}},
        {"smallest", smallest},
        {"violating", violating},
    };
}

} // namespace qjsd
