#pragma once

#include <numbers>
#include <vector>

#include "steerkit/cmat.hpp"
#include "steerkit/states.hpp"

namespace steerkit {

/// Alice measures along n = (sin xi cos tau, sin xi sin tau, cos xi); delta is
/// the relative phase used by the witness projector.
struct MeasurementFrame {
    double xi = std::numbers::pi / 2;
    double tau = 0;
    double delta = std::numbers::pi / 2;
};

/// |+n> = cos(xi/2)|0> + sin(xi/2) e^{i tau}|1>
/// |-n> = sin(xi/2)|0> - cos(xi/2) e^{i tau}|1>
struct AliceBasis {
    CVec<2> plus;
    CVec<2> minus;
    Mat2 P0;
    Mat2 P1;
};

/// rho = P0 x rho0 + P1 x rho1 + |+n><-n| x m + |-n><+n| x m^dag
struct ConditionalDecomposition {
    Mat2 rho0;
    Mat2 rho1;
    Mat2 m;
};

struct ResidualTriple {
    Complex r1;  // m1 - m1*
    Complex r2;  // m4 - m4*
    Complex r3;  // m2 - m3*
};

enum class Verdict { Separable, Entangled, Indeterminate };

const char* to_string(Verdict v);

/// Throws std::out_of_range unless xi in [0, pi] and tau, delta in [0, 2pi].
AliceBasis alice_basis(const MeasurementFrame& f);

ConditionalDecomposition conditional_decompose(const Mat4& rho, const MeasurementFrame& f);

Mat4 reconstruct(const ConditionalDecomposition& d, const MeasurementFrame& f);

/// ||m - m^dag||_F
double hermiticity_defect(const Mat2& m);

/// {beta, -beta mod 2pi} if sin 2phi != 0, else {0}.
std::vector<double> canonical_taus(const Rank2Params& p);

/// Closed forms; independent of xi.
ResidualTriple residuals(const Rank2Params& p, const MeasurementFrame& f);

ResidualTriple residuals_from_block(const Mat2& m);

/// Smallest hermiticity defect over the canonical taus at the given xi.
double min_canonical_defect(const Rank2Params& p, double xi = std::numbers::pi / 2);

/// True iff some canonical tau gives ||M - M^dag|| < tol.
bool ns_separability_check(const Rank2Params& p, double tol = 1e-9, double xi = std::numbers::pi / 2);

/// Separable when both the concurrence (< 1e-7) and the NS defect (< 1e-9)
/// say so, entangled when both disagree with separability, otherwise
/// indeterminate.
Verdict separability_verdict(const Rank2Params& p);

}  // namespace steerkit
