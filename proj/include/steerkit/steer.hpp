#pragma once

#include <array>
#include <utility>
#include <vector>

#include "steerkit/cmat.hpp"
#include "steerkit/decomp.hpp"
#include "steerkit/states.hpp"

namespace steerkit {

using Vec3 = std::array<double, 3>;

// A certificate is "violated" when best_w - c_lhs exceeds this.
inline constexpr double VIOLATION_TOL = 1e-9;

// LHS bound of the 3-setting linear inequality.
inline const double LINEAR_I3_BOUND = 1 / std::sqrt(3.0);

struct SteeringVectors {
    Vec3 f{};
    Vec3 h{};
    double h0 = 0;
    double tau_used = 0;
};

struct BobDirection {
    Vec3 n{0, 0, 1};
    double thetaB = 0;
    double phiB = 0;
    bool degenerate = false;  // |F +- H| ~ 0: every direction is optimal, +z reported
};

/// Both delta branches at one Alice azimuth.
struct FrameEvaluation {
    double tau = 0;
    double w1_max = 0;  // delta = +pi/2
    double w2_max = 0;  // delta = -pi/2
};

struct SteeringCertificate {
    double c_lhs = 0;
    double w1_max = 0;
    double w2_max = 0;
    double best_w = 0;
    bool violated = false;
    double margin = 0;
    double tau = 0;
    double delta = 0;  // pi/2 or 3pi/2
    BobDirection bob;
    SteeringVectors vectors;
    double concurrence = 0;
    // The concurrence and the witness disagree about entanglement; happens
    // only for C < 1e-7 or margins below VIOLATION_TOL.
    bool indeterminate = false;
    std::vector<FrameEvaluation> frames;
};

struct LinearSteeringSettings {
    double eta = 0;
    double tau = 0;
    std::array<double, 6> alice_angles{};  // theta1, phi1, theta2, phi2, theta3, phi3
};

/// Bloch vector of Bob's reduced state.
Vec3 bloch_f(const Rank2Params& p);

/// 1/4 + |F|/4 = lambda_max(rho_B) / 2
double classical_bound(const Rank2Params& p);

SteeringVectors steering_vectors(const Rank2Params& p, double tau);

/// H3 expanded: -nu2 [sin b cos(a+t) cos tau - cos b cos(a-t) sin tau] sin 2phi.
double h3_expanded(const Rank2Params& p, double tau);

/// (1/4 + H0/4 + |F+H|/4, 1/4 - H0/4 + |F-H|/4) from given vectors.
std::pair<double, double> w_max_from_vectors(const SteeringVectors& v);

/// (1/4 + H0/4 + |F+H|/4, 1/4 - H0/4 + |F-H|/4): the best Bob value for
/// delta = +pi/2 and delta = -pi/2.
std::pair<double, double> w_max_pair(const Rank2Params& p, double tau);

/// Alice's half of the witness, |+><+| with |+> = (|+n> + e^{i delta}|-n>)/sqrt2.
Mat2 witness_alice_projector(const MeasurementFrame& f);

/// Tr(W rho), W = |+><+| x |nB><nB|, nB at polar thetaB and azimuth phiB.
double generic_w_expectation(const Mat4& rho, const MeasurementFrame& f, double thetaB, double phiB);

/// Closed-form certificate. Every canonical tau is evaluated with both delta
/// branches; within a tau the better branch is kept (ties -> +pi/2). Across
/// taus the smallest margin is reported (ties -> smaller tau): the bound only
/// holds in the frame where a separable state has M = M^dag, and a separable
/// state can exceed it in the other frame.
SteeringCertificate steer_certificate(const Rank2Params& p);

/// Same selection, with everything computed from rho by partial traces and
/// Hermitian eigenvalues (xi is arbitrary; the delta = +-pi/2 projectors do
/// not depend on it). No concurrence is available here; it is left at -1 and
/// indeterminate is false.
SteeringCertificate steer_certificate_numeric(const Mat4& rho, const std::vector<double>& taus,
                                              double xi = std::numbers::pi / 2);

/// Orthonormal Bob triad b1, b2, b3 from (eta, tau).
std::array<Vec3, 3> bob_triad(double eta, double tau);

/// tau = pi/4, theta1 = theta2 = pi, phi1 = phi2 = 0, phi3 = -pi/4,
/// eta = atan(sqrt 2)/2, and the given theta3.
LinearSteeringSettings optimal_linear_settings(double theta3);

/// theta3 = atan(sqrt2 sin 2theta) for psi1(theta).
double theta3_pure(double theta);

/// theta3 = atan(sqrt2 (nu1 - nu2) sin 2theta) for the mixtures with
/// psi2 = sin(theta)|00> - cos(theta)|11> or cos(theta)|10> + sin(theta)|01>.
double theta3_mixed(double theta, double nu1);

/// Tr{rho (1/3) sum_j (a_j.sigma) x (b_j.sigma)}. Throws std::invalid_argument
/// if the triad is not orthonormal to 1e-12.
double linear_i3_value(const Mat4& rho, const LinearSteeringSettings& s);

/// 2 sqrt(1 + C^2)
double chsh_max(double c);

/// nu1 |psi1><psi1| + nu2 |chi><chi|, chi = cos(theta)|10> + sin(theta)|01>.
Mat4 avn_state(double theta, double nu1);

/// The same state in the canonical family: phi = 0, alpha = pi/2 - theta.
Rank2Params avn_params(double theta, double nu1);

}  // namespace steerkit
