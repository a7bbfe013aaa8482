#include "steerkit/steer.hpp"

#include <stdexcept>

#include "steerkit/entangle.hpp"

namespace steerkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTie = 1e-12;

double len(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 add(const Vec3& a, const Vec3& b, double s) { return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]}; }

BobDirection direction_of(const Vec3& v) {
    BobDirection d;
    double l = len(v);
    if (l < 1e-12) {
        d.degenerate = true;
        return d;
    }
    d.n = {v[0] / l, v[1] / l, v[2] / l};
    d.thetaB = std::acos(std::clamp(d.n[2], -1.0, 1.0));
    d.phiB = std::atan2(d.n[1], d.n[0]);
    if (d.phiB < 0) d.phiB += 2 * kPi;
    return d;
}

Mat2 sigma_dot(const Vec3& n) {
    return Complex(n[0]) * pauli_x() + Complex(n[1]) * pauli_y() + Complex(n[2]) * pauli_z();
}

Vec3 bloch_of(const Mat2& m) {
    return {trace(m * pauli_x()).real(), trace(m * pauli_y()).real(), trace(m * pauli_z()).real()};
}

// Fills best_w / margin / delta from the frame list: best delta per tau,
// smallest margin across taus.
void select(SteeringCertificate& c) {
    std::size_t pick = 0;
    double pick_margin = 0;
    for (std::size_t k = 0; k < c.frames.size(); ++k) {
        const auto& f = c.frames[k];
        double m = std::max(f.w1_max, f.w2_max) - c.c_lhs;
        bool better = k == 0 || m < pick_margin - kTie ||
                      (std::abs(m - pick_margin) <= kTie && f.tau < c.frames[pick].tau);
        if (better) {
            pick = k;
            pick_margin = m;
        }
    }
    const auto& f = c.frames[pick];
    c.tau = f.tau;
    c.w1_max = f.w1_max;
    c.w2_max = f.w2_max;
    c.delta = f.w2_max > f.w1_max + kTie ? 3 * kPi / 2 : kPi / 2;
    c.best_w = c.delta == kPi / 2 ? f.w1_max : f.w2_max;
    c.margin = c.best_w - c.c_lhs;
    c.violated = c.margin > VIOLATION_TOL;
}

}  // namespace

Vec3 bloch_f(const Rank2Params& p) {
    validate(p);
    const double n1 = p.nu1, n2 = p.nu2(), s2p = std::sin(2 * p.phi);
    return {-n2 * std::cos(p.beta) * std::sin(p.alpha - p.theta) * s2p,
            -n2 * std::sin(p.beta) * std::sin(p.alpha + p.theta) * s2p,
            -n2 * std::cos(2 * p.alpha) * std::pow(std::cos(p.phi), 2) +
                std::cos(2 * p.theta) * (n1 - n2 * std::pow(std::sin(p.phi), 2))};
}

double classical_bound(const Rank2Params& p) { return 0.25 + 0.25 * len(bloch_f(p)); }

SteeringVectors steering_vectors(const Rank2Params& p, double tau) {
    validate(p);
    const double n1 = p.nu1, n2 = p.nu2();
    const double s2p = std::sin(2 * p.phi), cp2 = std::pow(std::cos(p.phi), 2), sp2 = std::pow(std::sin(p.phi), 2);
    const double sb = std::sin(p.beta), cb = std::cos(p.beta), st = std::sin(tau), ct = std::cos(tau);
    const double amt = p.alpha - p.theta, apt = p.alpha + p.theta;
    const double k = n1 - n2 * sp2;
    SteeringVectors v;
    v.f = bloch_f(p);
    v.h0 = n2 * (std::cos(amt) * ct * sb - cb * std::cos(apt) * st) * s2p;
    v.h = {st * (n2 * cp2 * std::sin(2 * p.alpha) + std::sin(2 * p.theta) * k),
           ct * (-n2 * cp2 * std::sin(2 * p.alpha) + std::sin(2 * p.theta) * k),
           n2 * (-sb * std::cos(apt) * ct + cb * std::cos(amt) * st) * s2p};
    v.tau_used = tau;
    return v;
}

double h3_expanded(const Rank2Params& p, double tau) {
    return -p.nu2() *
           (std::sin(p.beta) * std::cos(p.alpha + p.theta) * std::cos(tau) -
            std::cos(p.beta) * std::cos(p.alpha - p.theta) * std::sin(tau)) *
           std::sin(2 * p.phi);
}

std::pair<double, double> w_max_pair(const Rank2Params& p, double tau) { return w_max_from_vectors(steering_vectors(p, tau)); }

std::pair<double, double> w_max_from_vectors(const SteeringVectors& v) {
    return {0.25 + 0.25 * v.h0 + 0.25 * len(add(v.f, v.h, 1)), 0.25 - 0.25 * v.h0 + 0.25 * len(add(v.f, v.h, -1))};
}

Mat2 witness_alice_projector(const MeasurementFrame& f) {
    auto b = alice_basis(f);
    const Complex ed = std::polar(1.0, f.delta);
    const double r = 1 / std::sqrt(2.0);
    CVec<2> plus{r * (b.plus[0] + ed * b.minus[0]), r * (b.plus[1] + ed * b.minus[1])};
    return outer(plus, plus);
}

double generic_w_expectation(const Mat4& rho, const MeasurementFrame& f, double thetaB, double phiB) {
    CVec<2> nb{std::cos(thetaB / 2), std::polar(std::sin(thetaB / 2), phiB)};
    Mat4 w = tensor(witness_alice_projector(f), outer(nb, nb));
    return trace(w * rho).real();
}

SteeringCertificate steer_certificate(const Rank2Params& p) {
    SteeringCertificate c;
    c.c_lhs = classical_bound(p);
    for (double tau : canonical_taus(p)) {
        auto w = w_max_pair(p, tau);
        c.frames.push_back({tau, w.first, w.second});
    }
    select(c);
    c.vectors = steering_vectors(p, c.tau);
    c.bob = direction_of(add(c.vectors.f, c.vectors.h, c.delta == kPi / 2 ? 1.0 : -1.0));
    c.concurrence = concurrence_closed_form(p);
    c.indeterminate = c.violated != (c.concurrence >= BORDERLINE_C);
    return c;
}

SteeringCertificate steer_certificate_numeric(const Mat4& rho, const std::vector<double>& taus, double xi) {
    if (taus.empty()) throw std::invalid_argument("steer_certificate_numeric: no frames");
    SteeringCertificate c;
    c.c_lhs = 0.5 * eigh(partial_trace_a(rho)).values[1];
    auto bob_operator = [&](const MeasurementFrame& f) {
        return partial_trace_a(tensor(witness_alice_projector(f), Mat2::identity()) * rho);
    };
    for (double tau : taus) {
        double w1 = eigh(bob_operator({xi, tau, kPi / 2})).values[1];
        double w2 = eigh(bob_operator({xi, tau, 3 * kPi / 2})).values[1];
        c.frames.push_back({tau, w1, w2});
    }
    select(c);

    // Recover F, H0, H from the Bob operators: Tr_A[(P x I) rho] = (1 +- H0 + (F +- H).sigma)/4.
    Mat2 up = bob_operator({xi, c.tau, kPi / 2}), dn = bob_operator({xi, c.tau, 3 * kPi / 2});
    Vec3 fp = bloch_of(up), fm = bloch_of(dn);
    c.vectors.f = bloch_of(partial_trace_a(rho));
    c.vectors.h0 = trace(up).real() - trace(dn).real();
    for (int i = 0; i < 3; ++i) c.vectors.h[i] = fp[i] - fm[i];
    c.vectors.tau_used = c.tau;
    c.bob = direction_of(bloch_of(c.delta == kPi / 2 ? up : dn));
    c.concurrence = -1;
    return c;
}

std::array<Vec3, 3> bob_triad(double eta, double tau) {
    const double ce = std::cos(eta), se = std::sin(eta), c2e = ce * ce, s2e = se * se, sin2e = std::sin(2 * eta);
    const double c2t = std::cos(2 * tau), s2t = std::sin(2 * tau);
    return {{{c2e - c2t * s2e, -s2e * s2t, -sin2e * std::cos(tau)},
             {-s2e * s2t, c2e + c2t * s2e, -sin2e * std::sin(tau)},
             {std::cos(tau) * sin2e, std::sin(tau) * sin2e, c2e - s2e}}};
}

LinearSteeringSettings optimal_linear_settings(double theta3) {
    LinearSteeringSettings s;
    s.eta = 0.5 * std::atan(std::sqrt(2.0));
    s.tau = kPi / 4;
    s.alice_angles = {kPi, 0.0, kPi, 0.0, theta3, -kPi / 4};
    return s;
}

double theta3_pure(double theta) { return std::atan(std::sqrt(2.0) * std::sin(2 * theta)); }

double theta3_mixed(double theta, double nu1) {
    return std::atan(std::sqrt(2.0) * (2 * nu1 - 1) * std::sin(2 * theta));
}

double linear_i3_value(const Mat4& rho, const LinearSteeringSettings& s) {
    auto b = bob_triad(s.eta, s.tau);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double d = b[i][0] * b[j][0] + b[i][1] * b[j][1] + b[i][2] * b[j][2];
            if (std::abs(d - (i == j ? 1.0 : 0.0)) > 1e-12)
                throw std::invalid_argument("linear_i3_value: Bob triad is not orthonormal");
        }
    Mat4 op;
    for (int j = 0; j < 3; ++j) {
        const double th = s.alice_angles[2 * j], ph = s.alice_angles[2 * j + 1];
        Vec3 a{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        op = op + tensor(sigma_dot(a), sigma_dot(b[j]));
    }
    return trace(op * rho).real() / 3;
}

double chsh_max(double c) {
    if (!(c >= -1e-12 && c <= 1 + 1e-12)) throw std::out_of_range("chsh_max: concurrence outside [0, 1]");
    return 2 * std::sqrt(1 + c * c);
}

Mat4 avn_state(double theta, double nu1) {
    if (!(theta >= -1e-12 && theta <= kPi / 2 + 1e-12)) throw std::out_of_range("avn_state: theta out of range");
    if (!(nu1 >= -1e-12 && nu1 <= 1 + 1e-12)) throw std::out_of_range("avn_state: nu1 out of range");
    CVec<4> a{std::cos(theta), 0.0, 0.0, std::sin(theta)};
    CVec<4> b{0.0, std::sin(theta), std::cos(theta), 0.0};
    return Complex(nu1) * outer(a, a) + Complex(1 - nu1) * outer(b, b);
}

Rank2Params avn_params(double theta, double nu1) {
    Rank2Params p{theta, 0.0, std::max(0.0, kPi / 2 - theta), 0.0, nu1};
    validate(p);
    return p;
}

}  // namespace steerkit
