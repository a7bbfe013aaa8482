#include "steerkit/decomp.hpp"

#include <stdexcept>
#include <string>

#include "steerkit/entangle.hpp"

namespace steerkit {

namespace {

constexpr double kPi = std::numbers::pi;

void check_angle(const char* name, double v, double hi) {
    if (!(v >= -1e-12 && v <= hi + 1e-12))
        throw std::out_of_range(std::string("frame ") + name + " = " + std::to_string(v) + " out of range");
}

// <left| x I  rho  |right> x I
Mat2 sandwich(const Mat4& rho, const CVec<2>& left, const CVec<2>& right) {
    Mat2 out;
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) {
            Complex s{};
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) s += std::conj(left[i]) * rho(2 * i + k, 2 * j + l) * right[j];
            out(k, l) = s;
        }
    return out;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Separable: return "separable";
        case Verdict::Entangled: return "entangled";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

AliceBasis alice_basis(const MeasurementFrame& f) {
    check_angle("xi", f.xi, kPi);
    check_angle("tau", f.tau, 2 * kPi);
    check_angle("delta", f.delta, 2 * kPi);
    const double c = std::cos(f.xi / 2), s = std::sin(f.xi / 2);
    const Complex et = std::polar(1.0, f.tau);
    AliceBasis b;
    b.plus = {c, s * et};
    b.minus = {s, -c * et};
    b.P0 = outer(b.plus, b.plus);
    b.P1 = outer(b.minus, b.minus);
    return b;
}

ConditionalDecomposition conditional_decompose(const Mat4& rho, const MeasurementFrame& f) {
    auto b = alice_basis(f);
    return {sandwich(rho, b.plus, b.plus), sandwich(rho, b.minus, b.minus), sandwich(rho, b.plus, b.minus)};
}

Mat4 reconstruct(const ConditionalDecomposition& d, const MeasurementFrame& f) {
    auto b = alice_basis(f);
    return tensor(b.P0, d.rho0) + tensor(b.P1, d.rho1) + tensor(outer(b.plus, b.minus), d.m) +
           tensor(outer(b.minus, b.plus), adjoint(d.m));
}

double hermiticity_defect(const Mat2& m) { return frobenius(m - adjoint(m)); }

std::vector<double> canonical_taus(const Rank2Params& p) {
    validate(p);
    if (std::abs(std::sin(2 * p.phi)) <= 1e-12) return {0.0};
    double b = std::fmod(p.beta, 2 * kPi);
    double nb = b == 0 ? 0.0 : 2 * kPi - b;
    if (std::abs(b - nb) <= 1e-15) return {b};
    return {b, nb};
}

ResidualTriple residuals(const Rank2Params& p, const MeasurementFrame& f) {
    validate(p);
    const double n1 = p.nu1, n2 = p.nu2(), t = f.tau;
    const double s2p = std::sin(2 * p.phi), sp2 = std::pow(std::sin(p.phi), 2), cp2 = std::pow(std::cos(p.phi), 2);
    const Complex i(0, 1);
    ResidualTriple r;
    r.r1 = -i * n2 * std::sin(p.alpha) * std::sin(p.theta) * std::sin(p.beta + t) * s2p;
    r.r2 = -i * n2 * std::cos(p.alpha) * std::cos(p.theta) * std::sin(p.beta - t) * s2p;
    r.r3 = 0.5 * std::polar(1.0, -t) *
           (n2 * cp2 * std::sin(2 * p.alpha) - std::polar(1.0, 2 * t) * (n1 - n2 * sp2) * std::sin(2 * p.theta));
    return r;
}

ResidualTriple residuals_from_block(const Mat2& m) {
    return {m(0, 0) - std::conj(m(0, 0)), m(1, 1) - std::conj(m(1, 1)), m(0, 1) - std::conj(m(1, 0))};
}

double min_canonical_defect(const Rank2Params& p, double xi) {
    Mat4 rho = rank2_density(p);
    double best = 1e300;
    for (double tau : canonical_taus(p))
        best = std::min(best, hermiticity_defect(conditional_decompose(rho, {xi, tau, 0.0}).m));
    return best;
}

bool ns_separability_check(const Rank2Params& p, double tol, double xi) { return min_canonical_defect(p, xi) < tol; }

Verdict separability_verdict(const Rank2Params& p) {
    const bool c_zero = concurrence_closed_form(p) < BORDERLINE_C;
    const bool m_herm = min_canonical_defect(p) < 1e-9;
    if (c_zero && m_herm) return Verdict::Separable;
    if (!c_zero && !m_herm) return Verdict::Entangled;
    return Verdict::Indeterminate;
}

}  // namespace steerkit
