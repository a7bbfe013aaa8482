#include "steerkit/cmat.hpp"

#include <limits>
#include <stdexcept>

namespace steerkit {

Mat2 pauli_x() {
    Mat2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Mat2 pauli_y() {
    Mat2 m;
    m(0, 1) = Complex(0, -1);
    m(1, 0) = Complex(0, 1);
    return m;
}

Mat2 pauli_z() { return Mat2::diag({1.0, -1.0}); }

Mat4 tensor(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

CVec<4> kron(const CVec<2>& a, const CVec<2>& b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

Mat2 partial_trace_a(const Mat4& rho) {
    Mat2 r;
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(k, l) = rho(k, l) + rho(2 + k, 2 + l);
    return r;
}

Mat2 partial_trace_b(const Mat4& rho) {
    Mat2 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) r(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
    return r;
}

template <std::size_t N>
Eigh<N> eigh(const Mat<N>& a0) {
    const double scale = max_abs(a0);
    if (hermitian_defect(a0) > 1e-10 * scale) throw std::invalid_argument("eigh: matrix is not Hermitian");

    Mat<N> a = Complex(0.5) * (a0 + adjoint(a0));
    Mat<N> v = Mat<N>::identity();
    for (std::size_t k = 0; k < N; ++k) a(k, k) = a(k, k).real();

    const double floor = std::numeric_limits<double>::min();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= 1e-17 * scale || off < floor) break;

        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) {
                const Complex g = a(p, q);
                const double h = std::abs(g);
                if (h < floor) continue;
                const Complex ph = std::conj(g / h);
                const double theta = (a(q, q).real() - a(p, p).real()) / (2 * h);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(1 + t * t);
                const double s = t * c;
                // G = diag(1, e^{-i arg g}) * [[c, s], [-s, c]] on the (p, q) plane.
                const Complex gpp = c, gpq = s, gqp = -s * ph, gqq = c * ph;
                for (std::size_t r = 0; r < N; ++r) {
                    const Complex x = a(r, p), y = a(r, q);
                    a(r, p) = x * gpp + y * gqp;
                    a(r, q) = x * gpq + y * gqq;
                    const Complex vx = v(r, p), vy = v(r, q);
                    v(r, p) = vx * gpp + vy * gqp;
                    v(r, q) = vx * gpq + vy * gqq;
                }
                for (std::size_t col = 0; col < N; ++col) {
                    const Complex x = a(p, col), y = a(q, col);
                    a(p, col) = std::conj(gpp) * x + std::conj(gqp) * y;
                    a(q, col) = std::conj(gpq) * x + std::conj(gqq) * y;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
    }

    std::array<std::size_t, N> order{};
    for (std::size_t k = 0; k < N; ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    Eigh<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < N; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

template <std::size_t N>
Mat<N> sqrt_psd(const Mat<N>& a) {
    auto eg = eigh(a);
    double top = 0;
    for (double l : eg.values) top = std::max(top, std::abs(l));
    const double null = 1e-14 * std::max(1.0, top);
    std::array<double, N> r{};
    for (std::size_t k = 0; k < N; ++k) {
        double l = eg.values[k];
        if (l < -EIG_CLAMP) throw std::domain_error("sqrt_psd: matrix is not positive semidefinite");
        r[k] = l <= null ? 0.0 : std::sqrt(l);
    }
    Mat<N> out = eg.vectors * Mat<N>::diag(r) * adjoint(eg.vectors);
    return Complex(0.5) * (out + adjoint(out));
}

template Eigh<2> eigh(const Mat<2>&);
template Eigh<4> eigh(const Mat<4>&);
template Eigh<8> eigh(const Mat<8>&);
template Mat<2> sqrt_psd(const Mat<2>&);
template Mat<4> sqrt_psd(const Mat<4>&);

std::array<Complex, 4> char_poly(const Mat4& a) {
    std::array<Complex, 4> c{};
    Mat4 m;  // M_0 = 0
    Complex prev = 1.0;
    for (int k = 1; k <= 4; ++k) {
        m = a * m + prev * Mat4::identity();
        prev = -trace(a * m) / static_cast<double>(k);
        c[4 - k] = prev;
    }
    return c;
}

namespace {

void to_hessenberg(Mat4& h) {
    for (std::size_t k = 0; k + 2 < 4; ++k) {
        CVec<4> v{};
        double xn = 0;
        for (std::size_t r = k + 1; r < 4; ++r) xn += std::norm(h(r, k));
        xn = std::sqrt(xn);
        if (xn == 0) continue;
        const Complex x0 = h(k + 1, k);
        const Complex phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : Complex(1.0);
        for (std::size_t r = k + 1; r < 4; ++r) v[r] = h(r, k);
        v[k + 1] += phase * xn;
        double vn = norm(v);
        if (vn == 0) continue;
        for (auto& z : v) z /= vn;
        // h <- (I - 2vv^dag) h (I - 2vv^dag)
        for (std::size_t col = 0; col < 4; ++col) {
            Complex d{};
            for (std::size_t r = k + 1; r < 4; ++r) d += std::conj(v[r]) * h(r, col);
            for (std::size_t r = k + 1; r < 4; ++r) h(r, col) -= 2.0 * v[r] * d;
        }
        for (std::size_t row = 0; row < 4; ++row) {
            Complex d{};
            for (std::size_t c = k + 1; c < 4; ++c) d += h(row, c) * v[c];
            for (std::size_t c = k + 1; c < 4; ++c) h(row, c) -= 2.0 * d * std::conj(v[c]);
        }
    }
}

}  // namespace

std::array<Complex, 4> eigvals_general(const Mat4& a) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    Mat4 h = a;
    to_hessenberg(h);
    const double anorm = std::max(frobenius(h), std::numeric_limits<double>::min());

    std::array<Complex, 4> ev{};
    int hi = 3, iter = 0, total = 0;
    while (hi >= 0) {
        if (hi == 0) {
            ev[0] = h(0, 0);
            break;
        }
        int l = hi;
        for (; l > 0; --l) {
            double sub = std::abs(h(l, l - 1));
            if (sub <= eps * (std::abs(h(l - 1, l - 1)) + std::abs(h(l, l))) || sub <= eps * anorm) {
                h(l, l - 1) = 0.0;
                break;
            }
        }
        if (l == hi) {
            ev[hi] = h(hi, hi);
            --hi;
            iter = 0;
            continue;
        }
        if (++total > 400) throw std::runtime_error("eigvals_general: QR iteration did not converge");

        // Wilkinson shift from the trailing 2x2 block.
        const Complex p = h(hi - 1, hi - 1), q = h(hi - 1, hi), r = h(hi, hi - 1), s = h(hi, hi);
        const Complex half = 0.5 * (p + s);
        const Complex disc = std::sqrt(0.25 * (p - s) * (p - s) + q * r);
        Complex mu = std::abs(half + disc - s) < std::abs(half - disc - s) ? half + disc : half - disc;
        if (++iter % 11 == 0) mu = s + 0.75 * std::abs(r);

        for (int k = l; k <= hi; ++k) h(k, k) -= mu;
        std::array<double, 4> gc{};
        std::array<Complex, 4> gs{};
        for (int k = l; k < hi; ++k) {
            const Complex x = h(k, k), y = h(k + 1, k);
            const double rr = std::hypot(std::abs(x), std::abs(y));
            double c;
            Complex sn;
            if (rr == 0) {
                c = 1;
                sn = 0;
            } else if (std::abs(x) == 0) {
                c = 0;
                sn = std::conj(y) / std::abs(y);
            } else {
                c = std::abs(x) / rr;
                sn = (x / std::abs(x)) * std::conj(y) / rr;
            }
            gc[k] = c;
            gs[k] = sn;
            for (int col = k; col <= hi; ++col) {
                const Complex u = h(k, col), w = h(k + 1, col);
                h(k, col) = c * u + sn * w;
                h(k + 1, col) = -std::conj(sn) * u + c * w;
            }
        }
        for (int k = l; k < hi; ++k) {
            const double c = gc[k];
            const Complex sn = gs[k];
            const int last = std::min(k + 2, hi);
            for (int row = l; row <= last; ++row) {
                const Complex u = h(row, k), w = h(row, k + 1);
                h(row, k) = u * c + w * std::conj(sn);
                h(row, k + 1) = -u * sn + w * c;
            }
        }
        for (int k = l; k <= hi; ++k) h(k, k) += mu;
    }

    std::sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
        return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
    });
    return ev;
}

}  // namespace steerkit
