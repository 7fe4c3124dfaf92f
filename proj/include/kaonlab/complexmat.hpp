// complexmat.hpp
// Small fixed-size complex vectors/matrices for two-level and two-qubit
// algebra, plus a Hermitian Jacobi eigensolver. Everything lives on the
// stack; dimensions are 2 and 4 throughout the library.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace kaonlab {

using cd = std::complex<double>;

template <std::size_t N>
struct CVec {
    std::array<cd, N> v{};

    cd& operator[](std::size_t i) { return v[i]; }
    const cd& operator[](std::size_t i) const { return v[i]; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& z : v) s += std::norm(z);
        return s;
    }
};

using Vec2 = CVec<2>;
using Vec4 = CVec<4>;

template <std::size_t N>
struct CMat {
    std::array<cd, N * N> m{};

    cd& operator()(std::size_t i, std::size_t j) { return m[i * N + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return m[i * N + j]; }

    static CMat identity() {
        CMat r;
        for (std::size_t i = 0; i < N; ++i) r(i, i) = 1.0;
        return r;
    }

    CMat operator+(const CMat& o) const {
        CMat r;
        for (std::size_t k = 0; k < N * N; ++k) r.m[k] = m[k] + o.m[k];
        return r;
    }

    CMat operator-(const CMat& o) const {
        CMat r;
        for (std::size_t k = 0; k < N * N; ++k) r.m[k] = m[k] - o.m[k];
        return r;
    }

    CMat operator*(const CMat& o) const {
        CMat r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const cd a = (*this)(i, k);
                if (a == cd{}) continue;
                for (std::size_t j = 0; j < N; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    CMat operator*(cd s) const {
        CMat r;
        for (std::size_t k = 0; k < N * N; ++k) r.m[k] = m[k] * s;
        return r;
    }

    CVec<N> operator*(const CVec<N>& x) const {
        CVec<N> r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r[i] += (*this)(i, j) * x[j];
        return r;
    }

    CMat adjoint() const {
        CMat r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    CMat transpose() const {
        CMat r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    cd trace() const {
        cd s{};
        for (std::size_t i = 0; i < N; ++i) s += (*this)(i, i);
        return s;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : m) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_hermiticity_defect() const {
        double d = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return d;
    }
};

using Mat2 = CMat<2>;
using Mat4 = CMat<4>;

template <std::size_t N>
inline CMat<N> outer(const CVec<N>& a, const CVec<N>& b) {
    // |a><b|
    CMat<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = a[i] * std::conj(b[j]);
    return r;
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l)
                    r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

inline Vec4 kron(const Vec2& a, const Vec2& b) {
    Vec4 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) r[2 * i + j] = a[i] * b[j];
    return r;
}

// Tensor index convention: row = 2*left + right, i.e. the ordering
// {|00>, |01>, |10>, |11>} with the left subsystem as the slow index.
inline Mat2 partial_trace_right(const Mat4& rho) {
    Mat2 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t ip = 0; ip < 2; ++ip)
            for (std::size_t j = 0; j < 2; ++j) r(i, ip) += rho(2 * i + j, 2 * ip + j);
    return r;
}

inline Mat2 partial_trace_left(const Mat4& rho) {
    Mat2 r;
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t jp = 0; jp < 2; ++jp)
            for (std::size_t i = 0; i < 2; ++i) r(j, jp) += rho(2 * i + j, 2 * i + jp);
    return r;
}

inline Mat4 partial_transpose_right(const Mat4& rho) {
    Mat4 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t ip = 0; ip < 2; ++ip)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t jp = 0; jp < 2; ++jp)
                    r(2 * i + j, 2 * ip + jp) = rho(2 * i + jp, 2 * ip + j);
    return r;
}

template <std::size_t N>
struct EigenSystem {
    std::array<double, N> values{};  // ascending
    CMat<N> vectors;                 // columns; A = V diag(values) V^dagger
};

// Cyclic complex Jacobi diagonalization for Hermitian input. Each rotation
// zeroes one off-diagonal pair; convergence is quadratic once the matrix is
// nearly diagonal. Off-diagonal mass below tol * ||A||_F terminates.
template <std::size_t N>
inline EigenSystem<N> eigh(CMat<N> a, double tol = 1e-14, int max_sweeps = 100) {
    if (a.max_hermiticity_defect() > 1e-9 * (1.0 + a.frobenius_norm()))
        throw std::invalid_argument("eigh: matrix is not Hermitian");
    // symmetrize away roundoff
    for (std::size_t i = 0; i < N; ++i) {
        a(i, i) = cd(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < N; ++j) {
            const cd avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }

    CMat<N> v = CMat<N>::identity();
    const double scale = std::max(a.frobenius_norm(), 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += std::norm(a(p, q));
        off = std::sqrt(2.0 * off);
        if (off <= tol * scale) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const cd apq = a(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq <= 1e-300) continue;

                const cd phase = apq / abs_apq;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // zeroes (p,q): tan(2 theta) = 2|a_pq| / (a_qq - a_pp)
                const double theta = 0.5 * std::atan2(2.0 * abs_apq, aqq - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);

                // columns p,q of A and V transform; rows of A by conjugate
                for (std::size_t k = 0; k < N; ++k) {
                    const cd akp = a(k, p);
                    const cd akq = a(k, q);
                    a(k, p) = c * akp - std::conj(phase) * s * akq;
                    a(k, q) = phase * s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const cd apk = a(p, k);
                    const cd aqk = a(q, k);
                    a(p, k) = c * apk - phase * s * aqk;
                    a(q, k) = std::conj(phase) * s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const cd vkp = v(k, p);
                    const cd vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(phase) * s * vkq;
                    v(k, q) = phase * s * vkp + c * vkq;
                }
            }
        }
    }

    EigenSystem<N> es;
    for (std::size_t i = 0; i < N; ++i) es.values[i] = a(i, i).real();
    es.vectors = v;

    // sort ascending, permuting eigenvector columns alongside
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t lo = i;
        for (std::size_t j = i + 1; j < N; ++j)
            if (es.values[j] < es.values[lo]) lo = j;
        if (lo != i) {
            std::swap(es.values[i], es.values[lo]);
            for (std::size_t k = 0; k < N; ++k) std::swap(es.vectors(k, i), es.vectors(k, lo));
        }
    }
    return es;
}

// Square root of a positive semidefinite Hermitian matrix. Eigenvalues in
// [-tol, 0) are clamped to zero; anything more negative is rejected.
template <std::size_t N>
inline CMat<N> sqrt_psd(const CMat<N>& a, double tol = 1e-9) {
    const auto es = eigh(a);
    if (es.values[0] < -tol)
        throw std::invalid_argument("sqrt_psd: matrix has a significantly negative eigenvalue");
    CMat<N> r;
    for (std::size_t k = 0; k < N; ++k) {
        const double w = std::sqrt(std::max(es.values[k], 0.0));
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                r(i, j) += w * es.vectors(i, k) * std::conj(es.vectors(j, k));
    }
    return r;
}

}  // namespace kaonlab
