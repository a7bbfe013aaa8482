#include "steerkit/states.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace steerkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1e-12;
constexpr double kSwapTol = 1e-8;

void check_range(const char* name, double v, double lo, double hi) {
    if (!(v >= lo - kSlack && v <= hi + kSlack))
        throw std::out_of_range(std::string(name) + " = " + std::to_string(v) + " outside [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

// Ket with Bloch vector n (unit).
CVec<2> ket_from_bloch(double nx, double ny, double nz) {
    double pol = std::acos(std::clamp(nz, -1.0, 1.0));
    double az = std::atan2(ny, nx);
    return {std::cos(pol / 2), std::polar(std::sin(pol / 2), az)};
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double len(const std::array<double, 3>& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

// diag(e^{i wa}, e^{i wb}) [[cos t, -sin t e^{-i f}], [sin t e^{i f}, cos t]]
Mat2 rot(double wa, double wb, double t, double f) {
    Mat2 m;
    m(0, 0) = std::polar(std::cos(t), wa);
    m(0, 1) = -std::polar(std::sin(t), wa - f);
    m(1, 0) = std::polar(std::sin(t), wb + f);
    m(1, 1) = std::polar(std::cos(t), wb);
    return m;
}

struct Finished {
    SwapUnitary u;
    double error;
};

// Fix the relative phase of the |00>, |11> amplitudes with diag(1, e^{ig}) on
// Alice and diag(e^{-ig}, 1) on Bob (which leaves |01>+|10> alone), then read
// off theta' and zeta and measure how far the pair is from the target.
Finished finish(Mat2 va, Mat2 vb, const CVec<4>& psi1, const CVec<4>& psi2) {
    CVec<4> o2 = tensor(va, vb) * psi2;
    double g = 0;
    if (std::abs(o2[0]) > 1e-300 && std::abs(o2[3]) > 1e-300) g = 0.5 * (std::arg(o2[0]) - std::arg(o2[3]));
    Mat2 da = Mat2::diag({1.0, 1.0}), db = Mat2::diag({1.0, 1.0});
    da(1, 1) = std::polar(1.0, g);
    db(0, 0) = std::polar(1.0, -g);
    va = da * va;
    vb = db * vb;

    Finished f;
    f.u.vA = va;
    f.u.vB = vb;
    Mat4 v = tensor(va, vb);
    o2 = v * psi2;
    CVec<4> o1 = v * psi1;
    f.u.thetaPrime = std::atan2(std::abs(o2[3]), std::abs(o2[0]));
    f.u.zeta = std::abs(o2[0]) >= std::abs(o2[3]) ? std::arg(o2[0]) : std::arg(o2[3]);
    const Complex z = std::polar(1.0, f.u.zeta);
    const double h = 1 / std::sqrt(2.0);
    CVec<4> t1{0.0, h, h, 0.0};
    CVec<4> t2{z * std::cos(f.u.thetaPrime), 0.0, 0.0, z * std::sin(f.u.thetaPrime)};
    f.error = 0;
    for (int k = 0; k < 4; ++k)
        f.error = std::max({f.error, std::abs(o1[k] - t1[k]), std::abs(o2[k] - t2[k])});
    return f;
}

// Closed-form angles; quadrants fixed with two-argument arctangents.
Finished swap_closed_form(const Rank2Params& p, const CVec<4>& psi1, const CVec<4>& psi2) {
    const double sa = std::sin(p.alpha), ca = std::cos(p.alpha);
    const double sg = ca - sa < 0 ? -1.0 : 1.0;
    const double f0 = std::atan2(sg * std::sin(p.beta) * (ca + sa), sg * std::cos(p.beta) * (ca - sa));
    const double vt = 0.5 * std::atan2(std::sqrt(2.0) * std::sin(p.phi),
                                       std::cos(p.phi) * std::sqrt(std::max(0.0, 1 + std::cos(2 * f0) * std::sin(2 * p.alpha))));
    const double s2 = std::pow(std::sin(vt), 2), c2 = std::pow(std::cos(vt), 2);
    const double a1 = std::atan2(s2 * sa * std::sin(2 * f0), c2 * ca + s2 * sa * std::cos(2 * f0));
    const double a2 = std::atan2(s2 * ca * std::sin(2 * f0), s2 * ca * std::cos(2 * f0) + c2 * sa);
    const double w0 = 0.5 * (a1 + a2), w1 = 0.0;
    const double f1 = -f0;
    const double w2 = -w1 + f1, w3 = kPi - w0 - f1;
    return finish(rot(w0, w1, vt, f0), rot(w2, w3, vt - kPi / 2, f1), psi1, psi2);
}

// With C1 = I/sqrt2, (A x B) acts as C -> A C B^T; B = X conj(A) keeps psi1 at
// (|01>+|10>)/sqrt2 and leaves A C2 A^dag X to be diagonal, i.e. A C2 A^dag
// must have zero diagonal. Writing C2 = (h + i k).sigma (traceless), the row
// vector of A needs a Bloch vector orthogonal to both h and k.
Finished swap_constructive(const CVec<4>& psi1, const CVec<4>& psi2) {
    Mat2 c2 = coefficient_matrix(PureState2Q{psi2});
    Mat2 herm = Complex(0.5) * (c2 + adjoint(c2));
    Mat2 anti = Complex(0, -0.5) * (c2 - adjoint(c2));
    auto bloch = [](const Mat2& m) {
        return std::array<double, 3>{m(0, 1).real(), -m(0, 1).imag(), 0.5 * (m(0, 0).real() - m(1, 1).real())};
    };
    auto h = bloch(herm), k = bloch(anti);
    auto n = cross(h, k);
    if (len(n) < 1e-12 * std::max(1e-300, len(h) * len(k))) {
        auto ref = len(h) >= len(k) ? h : k;
        std::array<double, 3> axis{0, 0, 0};
        int smallest = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(ref[i]) < std::abs(ref[smallest])) smallest = i;
        axis[smallest] = 1;
        n = cross(ref, axis);
    }
    double nl = len(n);
    CVec<2> v = ket_from_bloch(n[0] / nl, n[1] / nl, n[2] / nl);
    CVec<2> w{-std::conj(v[1]), std::conj(v[0])};
    Mat2 a;
    a(0, 0) = std::conj(v[0]);
    a(0, 1) = std::conj(v[1]);
    a(1, 0) = std::conj(w[0]);
    a(1, 1) = std::conj(w[1]);
    Mat2 b = pauli_x() * conj(a);
    return finish(a, b, psi1, psi2);
}

}  // namespace

void validate(const Rank2Params& p) {
    check_range("theta", p.theta, 0, kPi / 2);
    check_range("phi", p.phi, 0, kPi / 2);
    check_range("alpha", p.alpha, 0, kPi / 2);
    check_range("beta", p.beta, 0, 2 * kPi);
    check_range("nu1", p.nu1, 0, 1);
}

const char* to_string(SwapStatus s) {
    switch (s) {
        case SwapStatus::Regular: return "regular";
        case SwapStatus::Constructive: return "constructive";
        case SwapStatus::AlreadyCanonical: return "already-canonical";
        case SwapStatus::Degenerate: return "degenerate";
    }
    return "unknown";
}

PureState2Q make_psi1(double theta) {
    check_range("theta", theta, 0, kPi / 2);
    return {{std::cos(theta), 0.0, 0.0, std::sin(theta)}};
}

PureState2Q make_psi2(const Rank2Params& p) {
    validate(p);
    const Complex eb = std::polar(1.0, p.beta);
    const double sp = std::sin(p.phi), cp = std::cos(p.phi);
    return {{eb * sp * std::sin(p.theta), cp * std::cos(p.alpha), cp * std::sin(p.alpha),
             -eb * sp * std::cos(p.theta)}};
}

Mat4 rank2_density(const Rank2Params& p) {
    auto a = make_psi1(p.theta).amplitudes;
    auto b = make_psi2(p).amplitudes;
    Mat4 r = Complex(p.nu1) * outer(a, a) + Complex(p.nu2()) * outer(b, b);
    return Complex(0.5) * (r + adjoint(r));
}

Mat2 coefficient_matrix(const PureState2Q& psi) {
    Mat2 m;
    m.e = psi.amplitudes;
    return m;
}

double pure_concurrence(const PureState2Q& psi) {
    const auto& v = psi.amplitudes;
    return 2 * std::abs(v[1] * v[2] - v[0] * v[3]);
}

SchmidtResult schmidt_decompose(const PureState2Q& psi) {
    const auto& v = psi.amplitudes;
    if (std::abs(norm(v) - 1) > 1e-10) throw std::invalid_argument("schmidt_decompose: state is not normalized");
    const Complex c = v[0], a = v[1], b = v[2], d = v[3];

    // Bob: x = B1*/A1 solves mu1 x^2 + mu2 x - mu1* = 0 (smaller root, stable form).
    const Complex mu1 = a * std::conj(c) + std::conj(b) * d;
    const double mu2 = 2 * (std::norm(a) + std::norm(d)) - 1;
    double a1;
    Complex b1;
    if (std::abs(mu1) > 1e-15) {
        const double disc = std::sqrt(mu2 * mu2 + 4 * std::norm(mu1));
        const double q = -0.5 * (mu2 + (mu2 >= 0 ? disc : -disc));
        const Complex x = -std::conj(mu1) / q;
        a1 = 1 / std::sqrt(1 + std::norm(x));
        b1 = std::conj(x) * a1;
    } else if (mu2 > 0) {
        a1 = 1;
        b1 = 0;
    } else {
        a1 = 0;  // x -> infinity
        b1 = 1;
    }
    Mat2 ub;
    ub(0, 0) = a1;
    ub(0, 1) = -std::conj(b1);
    ub(1, 0) = b1;
    ub(1, 1) = a1;

    // After Bob's rotation the columns of C U^T are orthogonal; Alice's rows are
    // the normalized conjugate columns, which also makes the diagonal real.
    Mat2 m = coefficient_matrix(psi) * transpose(ub);
    CVec<2> m0{m(0, 0), m(1, 0)}, m1{m(0, 1), m(1, 1)};
    const double n0 = norm(m0), n1 = norm(m1);
    CVec<2> r0, r1;
    if (n0 >= n1) {
        for (int i = 0; i < 2; ++i) r0[i] = std::conj(m0[i]) / n0;
        if (n1 > 1e-14)
            for (int i = 0; i < 2; ++i) r1[i] = std::conj(m1[i]) / n1;
        else
            r1 = {-std::conj(r0[1]), std::conj(r0[0])};
    } else {
        for (int i = 0; i < 2; ++i) r1[i] = std::conj(m1[i]) / n1;
        if (n0 > 1e-14)
            for (int i = 0; i < 2; ++i) r0[i] = std::conj(m0[i]) / n0;
        else
            r0 = {-std::conj(r1[1]), std::conj(r1[0])};
    }
    Mat2 ua;
    ua(0, 0) = r0[0];
    ua(0, 1) = r0[1];
    ua(1, 0) = r1[0];
    ua(1, 1) = r1[1];
    if (n0 < n1) {
        ua = pauli_x() * ua;
        ub = pauli_x() * ub;
    }

    SchmidtResult out;
    out.uA = ua;
    out.uB = ub;
    CVec<4> f = tensor(ua, ub) * v;
    out.kappa1 = std::abs(f[0]);
    out.kappa2 = std::abs(f[3]);
    CVec<4> want{out.kappa1, 0.0, 0.0, out.kappa2};
    for (int k = 0; k < 4; ++k) out.residual = std::max(out.residual, std::abs(f[k] - want[k]));
    return out;
}

SwapOutcome swap_theta_quarter(const Rank2Params& p) {
    validate(p);
    if (std::abs(p.theta - kPi / 4) > kSlack) throw std::invalid_argument("swap_theta_quarter: theta must be pi/4");
    const auto psi1 = make_psi1(p.theta).amplitudes;
    const auto psi2 = make_psi2(p).amplitudes;

    SwapOutcome out;
    out.params = p;
    if (std::abs(p.phi) <= kSlack) {
        out.unitary.vA = out.unitary.vB = Mat2::identity();
        out.unitary.thetaPrime = p.theta;
        out.unitary.status = SwapStatus::AlreadyCanonical;
        return out;
    }

    Finished f;
    const bool maximal = pure_concurrence(PureState2Q{psi2}) >= 1 - kSlack;
    const bool beta_zero = std::abs(p.beta) <= kSlack || std::abs(p.beta - 2 * kPi) <= kSlack;
    if (maximal && beta_zero && std::abs(p.alpha - kPi / 4) <= kSlack) {
        const double c = std::cos(p.phi / 2), s = std::sin(p.phi / 2);
        Mat2 va, vb;
        va(0, 0) = c;
        va(0, 1) = -s;
        va(1, 0) = s;
        va(1, 1) = c;
        vb(0, 0) = s;
        vb(0, 1) = c;
        vb(1, 0) = c;
        vb(1, 1) = -s;
        f = finish(va, vb, psi1, psi2);
    } else {
        if (!maximal) f = swap_closed_form(p, psi1, psi2);
        if (maximal || f.error > kSwapTol) {
            f = swap_constructive(psi1, psi2);
            f.u.status = SwapStatus::Constructive;
        } else {
            f.u.status = SwapStatus::Regular;
        }
    }
    if (maximal) f.u.status = SwapStatus::Degenerate;

    out.unitary = f.u;
    out.params = {f.u.thetaPrime, 0.0, kPi / 4, 0.0, p.nu2()};
    return out;
}

}  // namespace steerkit
