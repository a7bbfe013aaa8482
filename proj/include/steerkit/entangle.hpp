#pragma once

#include "steerkit/cmat.hpp"
#include "steerkit/states.hpp"

namespace steerkit {

// Concurrences below this are numerically indistinguishable from zero: the
// closed form is a square root of a difference that cancels at separability,
// so rounding of order 1e-16 in the radicand shows up as ~1e-8 in C.
inline constexpr double BORDERLINE_C = 1e-7;

inline constexpr double SEPARABLE_TOL = BORDERLINE_C;

/// Coefficients of the non-trivial factor v^2 + s2 v + s1 of the
/// characteristic polynomial of rho~ rho.
struct SCoefficients {
    double s1 = 0;
    double s2 = 0;
};

struct WoottersResult {
    double c = 0;
    std::array<double, 4> lambdas{};  // descending
};

struct ConcurrenceReport {
    double s1 = 0;
    double s2 = 0;
    double c_closed = 0;
    std::array<double, 4> wootters_lambdas{};
    double c_wootters = 0;
    double defect = 0;
};

SCoefficients s_coefficients(const Rank2Params& p);

/// sqrt(-s2 - 2 sqrt(s1)). Radicands in [-1e-10, 0) are clamped; anything
/// more negative throws std::logic_error.
double concurrence_closed_form(const Rank2Params& p);

/// (sigma_y x sigma_y) rho* (sigma_y x sigma_y)
Mat4 spin_flip(const Mat4& rho);

/// max(0, l1 - l2 - l3 - l4), l = eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho)).
/// Throws std::invalid_argument unless rho is a density matrix to 1e-10.
WoottersResult concurrence_wootters(const Mat4& rho);

ConcurrenceReport concurrence_report(const Rank2Params& p);

bool is_separable(const Rank2Params& p, double tol = SEPARABLE_TOL);

}  // namespace steerkit
