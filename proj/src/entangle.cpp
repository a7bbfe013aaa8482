#include "steerkit/entangle.hpp"

#include <stdexcept>

namespace steerkit {

SCoefficients s_coefficients(const Rank2Params& p) {
    validate(p);
    const double n1 = p.nu1, n2 = p.nu2();
    const double s2a = std::sin(2 * p.alpha), s2t = std::sin(2 * p.theta);
    const double sp = std::sin(p.phi), cp = std::cos(p.phi);
    const double s2p = std::sin(2 * p.phi);
    const double c2b = std::cos(2 * p.beta);
    const double sp2 = sp * sp, cp4 = std::pow(cp, 4);

    SCoefficients s;
    s.s2 = -0.5 * n2 * n2 * s2a * s2t * s2p * s2p * c2b - n2 * n2 * s2a * s2a * cp4 -
           s2t * s2t * (n1 * n1 - n1 * n2 * sp2 + n2 * n2 * sp2 * sp2) -
           0.5 * n1 * n2 * (std::cos(4 * p.theta) + 3) * sp2;
    s.s1 = 0.5 * n1 * n1 * n2 * n2 *
           (s2a * s2t * s2p * s2p * c2b + 2 * s2a * s2a * s2t * s2t * cp4 + 2 * sp2 * sp2);
    return s;
}

double concurrence_closed_form(const Rank2Params& p) {
    auto s = s_coefficients(p);
    double r = -s.s2 - 2 * std::sqrt(std::max(0.0, s.s1));
    if (r < -1e-10) throw std::logic_error("concurrence_closed_form: negative radicand");
    return std::min(1.0, std::sqrt(std::max(0.0, r)));
}

Mat4 spin_flip(const Mat4& rho) {
    Mat4 yy = tensor(pauli_y(), pauli_y());
    return yy * conj(rho) * yy;
}

WoottersResult concurrence_wootters(const Mat4& rho) {
    if (hermitian_defect(rho) > 1e-10) throw std::invalid_argument("concurrence_wootters: rho is not Hermitian");
    if (std::abs(trace(rho) - 1.0) > 1e-10) throw std::invalid_argument("concurrence_wootters: trace is not 1");
    Mat4 s;
    try {
        s = sqrt_psd(rho);
    } catch (const std::domain_error&) {
        throw std::invalid_argument("concurrence_wootters: rho is not positive semidefinite");
    }

    // R^2 = sqrt(rho) rho~ sqrt(rho) = B B^dag with B = sqrt(rho) Y sqrt(rho)*, so the
    // eigenvalues of R are the singular values of B. They are read off the Hermitian
    // dilation [[0, B], [B^dag, 0]] rather than from R^2, which would square the
    // rounding floor of the vanishing ones.
    Mat4 yy = tensor(pauli_y(), pauli_y());
    Mat4 b = s * yy * conj(s);
    Mat<8> dil;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            dil(i, 4 + j) = b(i, j);
            dil(4 + j, i) = std::conj(b(i, j));
        }
    auto ev = eigh(dil).values;

    WoottersResult w;
    for (int k = 0; k < 4; ++k) w.lambdas[k] = ev[7 - k];
    w.c = std::clamp(w.lambdas[0] - w.lambdas[1] - w.lambdas[2] - w.lambdas[3], 0.0, 1.0);
    return w;
}

ConcurrenceReport concurrence_report(const Rank2Params& p) {
    ConcurrenceReport r;
    auto s = s_coefficients(p);
    r.s1 = s.s1;
    r.s2 = s.s2;
    r.c_closed = concurrence_closed_form(p);
    auto w = concurrence_wootters(rank2_density(p));
    r.wootters_lambdas = w.lambdas;
    r.c_wootters = w.c;
    r.defect = std::abs(r.c_closed - r.c_wootters);
    return r;
}

bool is_separable(const Rank2Params& p, double tol) { return concurrence_closed_form(p) < tol; }

}  // namespace steerkit
