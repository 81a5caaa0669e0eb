#pragma once

// Reference computations that avoid the library's own eigensolver, used to
// check it from the outside.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qjsd/linalg.hpp"
#include "qjsd/states.hpp"

namespace oracle {

using CMat = Eigen::MatrixXcd;

inline CMat to_eigen(const qjsd::Matrix& m)
{
    CMat r(m.dim(), m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) r(i, j) = m(i, j);
    return r;
}

inline std::vector<double> eigenvalues(const qjsd::Matrix& m)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(to_eigen(m), Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

inline double entropy_bits(std::span<const double> values)
{
    double h = 0.0;
    for (double x : values)
        if (x > 1e-15) h -= x * std::log2(x);
    return h;
}

inline double entropy(const qjsd::DensityMatrix& rho) { return entropy_bits(eigenvalues(rho.matrix())); }

inline double qjsd(const qjsd::DensityMatrix& rho, const qjsd::DensityMatrix& sigma)
{
    const auto mid = (rho.matrix() + sigma.matrix()) * qjsd::Complex(0.5);
    return entropy_bits(eigenvalues(mid)) - 0.5 * entropy(rho) - 0.5 * entropy(sigma);
}

inline CMat psd_sqrt(const CMat& m)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)).
inline double fidelity(const qjsd::DensityMatrix& rho, const qjsd::DensityMatrix& sigma)
{
    const CMat s = psd_sqrt(to_eigen(rho.matrix()));
    CMat inner = s * to_eigen(sigma.matrix()) * s;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(inner, Eigen::EigenvaluesOnly);
    double f = 0.0;
    for (int k = 0; k < es.eigenvalues().size(); ++k) f += std::sqrt(std::max(0.0, es.eigenvalues()(k)));
    return f;
}

inline double binary_entropy(double p)
{
    auto t = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
    return t(p) + t(1.0 - p);
}

} // namespace oracle
