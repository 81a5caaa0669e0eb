#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qjsd/error.hpp"

namespace qjsd {

inline constexpr double kProbabilitySumTol = 1e-12;

/// Nonnegative reals summing to one.
class ProbabilityVector {
public:
    ProbabilityVector() = default;
    explicit ProbabilityVector(std::vector<double> probs) : probs_(std::move(probs))
    {
        if (probs_.empty()) throw InvalidDistribution("empty distribution");
        double sum = 0.0;
        for (double p : probs_) {
            if (!std::isfinite(p) || p < 0.0) throw InvalidDistribution("entry " + std::to_string(p));
            sum += p;
        }
        if (std::abs(sum - 1.0) > kProbabilitySumTol) {
            throw InvalidDistribution("entries sum to " + std::to_string(sum));
        }
    }

    /// Clips tiny negatives (>= -tol) to zero and rescales to unit sum.
    static ProbabilityVector normalized(std::vector<double> weights, double tol = 1e-10)
    {
        double sum = 0.0;
        for (double& w : weights) {
            if (w < -tol) throw InvalidDistribution("negative weight " + std::to_string(w));
            if (w < 0.0) w = 0.0;
            sum += w;
        }
        if (!(sum > 0.0)) throw InvalidDistribution("weights sum to zero");
        for (double& w : weights) w /= sum;
        return ProbabilityVector(std::move(weights));
    }

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> values() const noexcept { return probs_; }

    friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;

private:
    std::vector<double> probs_;
};

} // namespace qjsd
