#pragma once

// Closed forms for pure states and the grid check of the pure-state
// triangle inequality.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qjsd/divergences.hpp"
#include "qjsd/error.hpp"

namespace qjsd {

/// Divergence of two pure states as a function of x = |<psi|phi>|: the
/// binary entropy of (1 + x) / 2.
inline double phi_pure(double x)
{
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("phi_pure needs x in [0, 1], got " + std::to_string(x));
    const double lo = 0.5 * (1.0 - x);
    const double hi = 0.5 * (1.0 + x);
    double h = 0.0;
    if (lo > 0.0) h -= lo * std::log2(lo);
    if (hi > 0.0) h -= hi * std::log2(hi);
    return h;
}

/// Pure-state triangle defect sqrt(Phi(y)) + sqrt(Phi(z)) - sqrt(Phi(x)) where
/// x = |<psi|phi>|, y = |<psi|chi>|, z = |<chi|phi>|.
inline double g_function(double x, double y, double z)
{
    return std::sqrt(phi_pure(y)) + std::sqrt(phi_pure(z)) - std::sqrt(phi_pure(x));
}

struct PureScanResult {
    double min_g = std::numeric_limits<double>::infinity();
    double x = 0.0;
    std::complex<double> a;
    std::complex<double> b;
    double y = 0.0;
    double z = 0.0;
    std::size_t evaluated = 0;
};

/// Minimum of G over a grid of realisable configurations.
///
/// With <psi|phi> = x (real without loss of generality) and
/// |chi> = a|psi> + b|phi> + |chi_perp>, the overlaps are y = |a + b x| and
/// z = |a x + b|. The grid covers x in [0, 1] (`x_points` values) and a, b on
/// polar grids of `grid_steps` radii in [0, 1] times `grid_steps` angles,
/// keeping only points where |a|^2 + |b|^2 + 2 Re(conj(a) b x) <= 1 so that
/// chi_perp exists.
inline PureScanResult pure_triangle_scan(int grid_steps, int x_points = 20)
{
    if (grid_steps < 2) throw InvalidConfig("grid_steps must be >= 2");
    if (x_points < 2) throw InvalidConfig("x_points must be >= 2");

    const auto steps = static_cast<std::size_t>(grid_steps);
    std::vector<std::complex<double>> disc;
    disc.reserve(steps * steps);
    for (std::size_t r = 0; r < steps; ++r) {
        const double radius = double(r) / double(steps - 1);
        for (std::size_t t = 0; t < steps; ++t) {
            disc.push_back(std::polar(radius, 2.0 * std::numbers::pi * double(t) / double(steps)));
            if (r == 0) break;  // one point at the origin is enough
        }
    }

    auto unit = [](double v) { return std::clamp(v, 0.0, 1.0); };

    PureScanResult best;
    for (int ix = 0; ix < x_points; ++ix) {
        const double x = double(ix) / double(x_points - 1);
        const double sqrt_phi_x = std::sqrt(phi_pure(x));
        for (const auto& a : disc) {
            for (const auto& b : disc) {
                const double norm2 = std::norm(a) + std::norm(b) + 2.0 * (std::conj(a) * b).real() * x;
                if (norm2 > 1.0 + 1e-12) continue;
                const double y = unit(std::abs(a + b * x));
                const double z = unit(std::abs(a * x + b));
                const double g = std::sqrt(phi_pure(y)) + std::sqrt(phi_pure(z)) - sqrt_phi_x;
                ++best.evaluated;
                if (g < best.min_g) best = {g, x, a, b, y, z, best.evaluated};
            }
        }
    }
    return best;
}

/// Closed form of the purification metric: sqrt(Phi(F(rho, sigma))).
inline double d_h_closed_form(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    return std::sqrt(phi_pure(fidelity(rho, sigma)));
}

} // namespace qjsd
