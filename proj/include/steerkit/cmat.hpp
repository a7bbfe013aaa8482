#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace steerkit {

using Complex = std::complex<double>;

// Absolute tolerance for matrix comparisons; every matrix here has norm <= 2.
inline constexpr double TOL_LINALG = 1e-9;

// Hermitian eigenvalues in [-EIG_CLAMP, 0) are treated as rounding noise.
inline constexpr double EIG_CLAMP = 1e-12;

template <std::size_t N>
using CVec = std::array<Complex, N>;

/// Dense square complex matrix, row-major.
template <std::size_t N>
struct Mat {
    std::array<Complex, N * N> e{};

    Complex& operator()(std::size_t r, std::size_t c) { return e[r * N + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return e[r * N + c]; }

    static Mat identity() {
        Mat m;
        for (std::size_t k = 0; k < N; ++k) m(k, k) = 1.0;
        return m;
    }
    static Mat diag(const std::array<double, N>& d) {
        Mat m;
        for (std::size_t k = 0; k < N; ++k) m(k, k) = d[k];
        return m;
    }
};

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

template <std::size_t N>
Mat<N> operator+(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> r;
    for (std::size_t k = 0; k < N * N; ++k) r.e[k] = a.e[k] + b.e[k];
    return r;
}

template <std::size_t N>
Mat<N> operator-(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> r;
    for (std::size_t k = 0; k < N * N; ++k) r.e[k] = a.e[k] - b.e[k];
    return r;
}

template <std::size_t N>
Mat<N> operator*(Complex s, const Mat<N>& a) {
    Mat<N> r;
    for (std::size_t k = 0; k < N * N; ++k) r.e[k] = s * a.e[k];
    return r;
}

template <std::size_t N>
Mat<N> operator*(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

template <std::size_t N>
CVec<N> operator*(const Mat<N>& a, const CVec<N>& v) {
    CVec<N> r{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r[i] += a(i, j) * v[j];
    return r;
}

template <std::size_t N>
Mat<N> adjoint(const Mat<N>& a) {
    Mat<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

template <std::size_t N>
Mat<N> conj(const Mat<N>& a) {
    Mat<N> r;
    for (std::size_t k = 0; k < N * N; ++k) r.e[k] = std::conj(a.e[k]);
    return r;
}

template <std::size_t N>
Mat<N> transpose(const Mat<N>& a) {
    Mat<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = a(j, i);
    return r;
}

template <std::size_t N>
Complex trace(const Mat<N>& a) {
    Complex t{};
    for (std::size_t k = 0; k < N; ++k) t += a(k, k);
    return t;
}

template <std::size_t N>
double frobenius(const Mat<N>& a) {
    double s = 0;
    for (const auto& z : a.e) s += std::norm(z);
    return std::sqrt(s);
}

/// Largest entry modulus.
template <std::size_t N>
double max_abs(const Mat<N>& a) {
    double m = 0;
    for (const auto& z : a.e) m = std::max(m, std::abs(z));
    return m;
}

template <std::size_t N>
double hermitian_defect(const Mat<N>& a) {
    return max_abs(a - adjoint(a));
}

template <std::size_t N>
Complex inner(const CVec<N>& u, const CVec<N>& v) {
    Complex s{};
    for (std::size_t k = 0; k < N; ++k) s += std::conj(u[k]) * v[k];
    return s;
}

template <std::size_t N>
double norm(const CVec<N>& v) {
    return std::sqrt(std::real(inner(v, v)));
}

/// |u><v|
template <std::size_t N>
Mat<N> outer(const CVec<N>& u, const CVec<N>& v) {
    Mat<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = u[i] * std::conj(v[j]);
    return r;
}

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

/// Kronecker product, basis order |00>,|01>,|10>,|11>.
Mat4 tensor(const Mat2& a, const Mat2& b);
CVec<4> kron(const CVec<2>& a, const CVec<2>& b);

/// Tr_A: Bob's reduced operator.
Mat2 partial_trace_a(const Mat4& rho);
/// Tr_B: Alice's reduced operator.
Mat2 partial_trace_b(const Mat4& rho);

template <std::size_t N>
struct Eigh {
    std::array<double, N> values;  // ascending
    Mat<N> vectors;                // column k pairs with values[k]
};

/// Cyclic Jacobi on a Hermitian matrix. Throws std::invalid_argument when
/// ||a - a^dag|| exceeds 1e-10 of ||a|| (entrywise max).
template <std::size_t N>
Eigh<N> eigh(const Mat<N>& a);

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-1e-12, 0) are clamped; anything more negative throws std::domain_error.
/// Eigenvalues below 1e-14 * max(1, |lambda|max) are set to zero so that
/// rank-deficient inputs keep an exact null space.
template <std::size_t N>
Mat<N> sqrt_psd(const Mat<N>& a);

/// Coefficients (c0, c1, c2, c3) of det(vI - a) = v^4 + c3 v^3 + c2 v^2 + c1 v + c0,
/// from traces of powers (Faddeev-LeVerrier).
std::array<Complex, 4> char_poly(const Mat4& a);

/// All eigenvalues of a general 4x4 matrix (shifted QR on the Hessenberg
/// form). Sorted by descending real part. Throws std::runtime_error on
/// non-convergence.
std::array<Complex, 4> eigvals_general(const Mat4& a);

}  // namespace steerkit
