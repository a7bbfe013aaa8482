#pragma once

#include "steerkit/cmat.hpp"

namespace steerkit {

/// rho = nu1 |psi1><psi1| + nu2 |psi2><psi2| with
///   psi1 = cos(theta)|00> + sin(theta)|11>
///   psi2 = e^{i beta} sin(phi) (sin(theta)|00> - cos(theta)|11>)
///          + cos(phi) (cos(alpha)|01> + sin(alpha)|10>)
/// Angles in radians: theta, phi, alpha in [0, pi/2], beta in [0, 2pi].
struct Rank2Params {
    double theta = 0;
    double phi = 0;
    double alpha = 0;
    double beta = 0;
    double nu1 = 1;

    double nu2() const { return 1.0 - nu1; }
};

/// Throws std::out_of_range naming the offending field.
void validate(const Rank2Params& p);

/// Amplitudes in the order |00>, |01>, |10>, |11>.
struct PureState2Q {
    CVec<4> amplitudes{};
};

struct SchmidtResult {
    double kappa1 = 0;
    double kappa2 = 0;
    Mat2 uA;
    Mat2 uB;
    double residual = 0;  // max |(uA x uB) psi - (kappa1, 0, 0, kappa2)|
};

enum class SwapStatus {
    Regular,           // closed-form angles
    Constructive,      // closed form lost accuracy; built from the coefficient matrix
    AlreadyCanonical,  // phi = 0: nothing to do
    Degenerate,        // psi2 is itself maximally entangled; theta' stays pi/4
};

const char* to_string(SwapStatus s);

struct SwapUnitary {
    Mat2 vA;
    Mat2 vB;
    double thetaPrime = 0;
    double zeta = 0;
    SwapStatus status = SwapStatus::Regular;
};

struct SwapOutcome {
    SwapUnitary unitary;
    Rank2Params params;
};

PureState2Q make_psi1(double theta);
PureState2Q make_psi2(const Rank2Params& p);
Mat4 rank2_density(const Rank2Params& p);

/// [[c, a], [b, d]] with c = <00|psi>, a = <01|psi>, b = <10|psi>, d = <11|psi>.
Mat2 coefficient_matrix(const PureState2Q& psi);

/// 2|ab - cd|.
double pure_concurrence(const PureState2Q& psi);

/// Throws std::invalid_argument unless | ||psi|| - 1 | <= 1e-10.
SchmidtResult schmidt_decompose(const PureState2Q& psi);

/// For theta = pi/4: local unitaries taking psi1 to (|01>+|10>)/sqrt2 and
/// psi2 to e^{i zeta}(cos theta'|00> + sin theta'|11>), so the returned
/// params describe the same state with the roles of the two vectors swapped
/// (phi' = 0, alpha' = pi/4, beta' = 0, nu1' = nu2).
/// Throws std::invalid_argument when theta != pi/4.
SwapOutcome swap_theta_quarter(const Rank2Params& p);

}  // namespace steerkit
