#pragma once

// Dense complex linear algebra for small Hermitian problems (N <= ~64).
//
// Everything here is a pure function over value types. Eigenproblems are
// solved with cyclic complex Jacobi rotations, which keep high relative
// accuracy on the small eigenvalues that dominate 0*log(0) handling.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qjsd/error.hpp"

namespace qjsd {

using Complex = std::complex<double>;

/// Tolerance for the Hermitian-symmetry check (max entrywise deviation).
inline constexpr double kHermitianTol = 1e-12;
/// Eigenvalues in [-kClampTol, 0) are round-off and clamp to zero.
inline constexpr double kClampTol = 1e-10;

/// Square complex matrix stored row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    Matrix(std::size_t dim, std::vector<Complex> entries)
        : dim_(dim), data_(std::move(entries))
    {
        if (data_.size() != dim_ * dim_) {
            throw DimMismatch("expected " + std::to_string(dim_ * dim_) + " entries, got " +
                              std::to_string(data_.size()));
        }
        for (const auto& z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw DomainError("matrix entries must be finite");
            }
        }
    }

    static Matrix identity(std::size_t dim)
    {
        Matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(std::span<const double> values)
    {
        Matrix m(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    /// |v><v| for a column vector v.
    static Matrix outer(std::span<const Complex> v)
    {
        Matrix m(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }
    std::span<const Complex> data() const noexcept { return data_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    std::vector<Complex> column(std::size_t j) const
    {
        std::vector<Complex> c(dim_);
        for (std::size_t i = 0; i < dim_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    Matrix adjoint() const
    {
        Matrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    Complex trace() const
    {
        Complex t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const
    {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    Matrix& operator+=(const Matrix& o)
    {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o)
    {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(Complex s)
    {
        for (auto& z : data_) z *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        a.check_same(b);
        const std::size_t n = a.dim_;
        Matrix r(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) continue;
                for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend std::vector<Complex> operator*(const Matrix& a, std::span<const Complex> v)
    {
        if (v.size() != a.dim_) throw DimMismatch("matrix-vector product");
        std::vector<Complex> r(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i)
            for (std::size_t j = 0; j < a.dim_; ++j) r[i] += a(i, j) * v[j];
        return r;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    void check_same(const Matrix& o) const
    {
        if (o.dim_ != dim_) {
            throw DimMismatch("dims " + std::to_string(dim_) + " and " + std::to_string(o.dim_));
        }
    }

    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Largest entrywise absolute difference.
inline double max_abs_diff(const Matrix& a, const Matrix& b)
{
    if (a.dim() != b.dim()) throw DimMismatch("max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

/// Tr(a^dagger b).
inline Complex hs_inner(const Matrix& a, const Matrix& b)
{
    if (a.dim() != b.dim()) {
        throw DimMismatch("hs_inner of " + std::to_string(a.dim()) + "x" + std::to_string(a.dim()) +
                          " and " + std::to_string(b.dim()) + "x" + std::to_string(b.dim()));
    }
    Complex s = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) s += std::conj(a.data()[k]) * b.data()[k];
    return s;
}

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b)
{
    if (a.size() != b.size()) throw DimMismatch("inner product");
    Complex s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10)
{
    return max_abs_diff(u.adjoint() * u, Matrix::identity(u.dim())) <= tol;
}

/// A Matrix known to equal its conjugate transpose.
///
/// Construction checks the symmetry within kHermitianTol and then stores the
/// exactly symmetrised matrix (upper triangle mirrored), so downstream code can
/// rely on bit-exact Hermiticity.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const Matrix& m) : inner_(m.dim())
    {
        const std::size_t n = m.dim();
        double dev = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
        if (dev > kHermitianTol) {
            throw NotHermitian("deviation " + std::to_string(dev) + " exceeds tolerance");
        }
        for (std::size_t i = 0; i < n; ++i) {
            inner_(i, i) = m(i, i).real();
            for (std::size_t j = i + 1; j < n; ++j) {
                const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
                inner_(i, j) = z;
                inner_(j, i) = std::conj(z);
            }
        }
    }

    std::size_t dim() const noexcept { return inner_.dim(); }
    const Matrix& matrix() const noexcept { return inner_; }
    double operator()(std::size_t i) const { return inner_(i, i).real(); }
    const Complex& operator()(std::size_t i, std::size_t j) const { return inner_(i, j); }
    double trace() const { return inner_.trace().real(); }

private:
    Matrix inner_;
};

/// Eigenvalues ascending; column k of `vectors` is the unit eigenvector of values[k].
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;

    std::size_t dim() const noexcept { return values.size(); }

    /// V f(diag) V^dagger, with f applied to each eigenvalue.
    template <class F>
    Matrix apply(F&& f) const
    {
        const std::size_t n = dim();
        std::vector<double> fv(n);
        for (std::size_t k = 0; k < n; ++k) fv[k] = f(values[k]);
        Matrix r(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                Complex s = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (fv[k] == 0.0) continue;
                    s += vectors(i, k) * fv[k] * std::conj(vectors(j, k));
                }
                r(i, j) = s;
                r(j, i) = std::conj(s);
            }
        for (std::size_t i = 0; i < n; ++i) r(i, i) = r(i, i).real();
        return r;
    }

    Matrix reconstruct() const
    {
        return apply([](double x) { return x; });
    }
};

namespace detail {

/// Unitary 2x2 block J (acting on coordinates p, q) that diagonalises the
/// Hermitian block [[app, apq], [conj(apq), aqq]] via J^dagger A J.
struct Rotation {
    Complex pp, pq, qp, qq;
};

inline Rotation jacobi_rotation(double app, double aqq, Complex apq)
{
    const double mag = std::abs(apq);
    const Complex phase = apq / mag;  // e^{i phi}
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    return {c, s, -s * std::conj(phase), c * std::conj(phase)};
}

inline double off_diagonal_norm(const Matrix& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace detail

inline constexpr double kJacobiTol = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

/// Hermitian eigendecomposition by cyclic Jacobi sweeps.
inline EigenDecomposition eigh(const HermitianMatrix& m)
{
    const std::size_t n = m.dim();
    Matrix a = m.matrix();
    Matrix v = Matrix::identity(n);
    const double threshold = kJacobiTol * std::max(1.0, a.frobenius_norm());

    int sweep = 0;
    for (; sweep < kJacobiMaxSweeps; ++sweep) {
        if (detail::off_diagonal_norm(a) < threshold) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                if (std::abs(apq) < std::numeric_limits<double>::min()) continue;
                const auto r = detail::jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
                // A <- A J (columns p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * r.pp + akq * r.qp;
                    a(k, q) = akp * r.pq + akq * r.qq;
                }
                // A <- J^dagger A (rows p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(r.pp) * apk + std::conj(r.qp) * aqk;
                    a(q, k) = std::conj(r.pq) * apk + std::conj(r.qq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * r.pp + vkq * r.qp;
                    v(k, q) = vkp * r.pq + vkq * r.qq;
                }
            }
        }
    }
    if (sweep == kJacobiMaxSweeps && detail::off_diagonal_norm(a) >= threshold) {
        throw NonConvergence("Jacobi eigensolver exceeded " + std::to_string(kJacobiMaxSweeps) + " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigenDecomposition out{std::vector<double>(n), Matrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Clamp round-off negatives in [-kClampTol, 0) to zero; anything lower is an error.
inline void clamp_nonnegative(std::vector<double>& values)
{
    for (auto& x : values) {
        if (x < -kClampTol) throw NotPositive("eigenvalue " + std::to_string(x) + " below -1e-10");
        if (x < 0.0) x = 0.0;
    }
}

/// Eigenvalues below this are indistinguishable from zero after a Jacobi solve.
inline double roundoff_floor(const EigenDecomposition& e)
{
    double scale = 0.0;
    for (double x : e.values) scale = std::max(scale, std::abs(x));
    return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
}

/// Principal square root of a PSD matrix given its eigendecomposition.
inline Matrix sqrt_from_eigen(EigenDecomposition e)
{
    clamp_nonnegative(e.values);
    const double floor = roundoff_floor(e);
    return e.apply([floor](double x) { return x < floor ? 0.0 : std::sqrt(x); });
}

inline HermitianMatrix matrix_sqrt(const HermitianMatrix& m)
{
    return HermitianMatrix(sqrt_from_eigen(eigh(m)));
}

/// Householder QR: a = q r with q unitary and r upper triangular.
struct QrDecomposition {
    Matrix q;
    Matrix r;
};

inline QrDecomposition qr_decompose(const Matrix& a)
{
    const std::size_t n = a.dim();
    Matrix r = a;
    Matrix q = Matrix::identity(n);
    std::vector<Complex> v(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double norm_x = 0.0;
        for (std::size_t i = k; i < n; ++i) norm_x += std::norm(r(i, k));
        norm_x = std::sqrt(norm_x);
        if (norm_x == 0.0) continue;
        const Complex x0 = r(k, k);
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
        // v = x + phase*|x| e_k avoids cancellation
        std::fill(v.begin(), v.end(), Complex{});
        for (std::size_t i = k; i < n; ++i) v[i] = r(i, k);
        v[k] += phase * norm_x;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        // H = I - 2 v v^dagger / |v|^2, applied on the left of r and right of q
        for (std::size_t j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += std::conj(v[i]) * r(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k; i < n; ++i) r(i, j) -= v[i] * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = 0.0;
            for (std::size_t j = k; j < n; ++j) s += q(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k; j < n; ++j) q(i, j) -= s * std::conj(v[j]);
        }
    }
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) r(i, j) = 0.0;
    return {std::move(q), std::move(r)};
}

/// Singular values (descending) by one-sided Jacobi on the columns of `a`.
///
/// Works on `a` directly instead of a^dagger a, so singular values near zero
/// carry absolute error ~eps*|a| rather than ~sqrt(eps)*|a|.
inline std::vector<double> singular_values(const Matrix& a)
{
    const std::size_t n = a.dim();
    Matrix u = a;
    auto col_dot = [&](std::size_t p, std::size_t q) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::conj(u(i, p)) * u(i, q);
        return s;
    };
    int sweep = 0;
    for (; sweep < kJacobiMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = col_dot(p, p).real();
                const double beta = col_dot(q, q).real();
                const Complex gamma = col_dot(p, q);
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) ||
                    std::abs(gamma) < std::numeric_limits<double>::min()) {
                    continue;
                }
                rotated = true;
                const auto r = detail::jacobi_rotation(alpha, beta, gamma);
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex ukp = u(k, p), ukq = u(k, q);
                    u(k, p) = ukp * r.pp + ukq * r.qp;
                    u(k, q) = ukp * r.pq + ukq * r.qq;
                }
            }
        }
        if (!rotated) break;
    }
    if (sweep == kJacobiMaxSweeps) throw NonConvergence("one-sided Jacobi SVD did not converge");
    std::vector<double> s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = std::sqrt(col_dot(k, k).real());
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

} // namespace qjsd
