#include <doctest.h>

#include "steerkit/decomp.hpp"
#include "steerkit/entangle.hpp"
#include "test_util.hpp"

using namespace steerkit;
using testutil::dist;
using testutil::kPi;

namespace {

MeasurementFrame random_frame(std::mt19937_64& g) {
    std::uniform_real_distribution<double> x(0.0, kPi), t(0.0, 2 * kPi);
    return {x(g), t(g), t(g)};
}

// Direct block extraction with explicit |n><n| x I sandwiches, no reshaping.
Mat2 block(const Mat4& rho, const CVec<2>& left, const CVec<2>& right) {
    Mat2 out;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            CVec<4> bra{}, ket{};
            CVec<2> ek{}, el{};
            ek[k] = 1.0;
            el[l] = 1.0;
            bra = kron(left, ek);
            ket = kron(right, el);
            out(k, l) = inner(bra, rho * ket);
        }
    return out;
}

}  // namespace

TEST_CASE("alice basis") {
    auto b0 = alice_basis({0.0, 0.7, 0.0});
    CHECK(std::abs(b0.plus[0] - 1.0) < 1e-15);
    CHECK(std::abs(b0.minus[1] + std::polar(1.0, 0.7)) < 1e-15);
    CHECK(dist(b0.P0, Mat2::diag({1, 0})) < 1e-15);

    auto bx = alice_basis({kPi / 2, 0.0, 0.0});
    const double h = 1 / std::sqrt(2.0);
    CHECK(std::abs(bx.plus[0] - h) + std::abs(bx.plus[1] - h) < 1e-15);
    CHECK(std::abs(bx.minus[0] - h) + std::abs(bx.minus[1] + h) < 1e-15);

    std::mt19937_64 g(41);
    for (int k = 0; k < 200; ++k) {
        auto f = random_frame(g);
        auto b = alice_basis(f);
        CHECK(std::abs(inner(b.plus, b.minus)) < 1e-15);
        CHECK(dist(b.P0 + b.P1, Mat2::identity()) < 1e-15);
        double nx = std::sin(f.xi) * std::cos(f.tau), ny = std::sin(f.xi) * std::sin(f.tau), nz = std::cos(f.xi);
        Mat2 sn = Complex(nx) * pauli_x() + Complex(ny) * pauli_y() + Complex(nz) * pauli_z();
        CHECK(dist(b.P0, Complex(0.5) * (Mat2::identity() + sn)) < 1e-15);
        CHECK(dist(b.P1, Complex(0.5) * (Mat2::identity() - sn)) < 1e-15);
    }
    CHECK_THROWS_AS(alice_basis({4.0, 0.0, 0.0}), std::out_of_range);
}

TEST_CASE("conditional decomposition") {
    std::mt19937_64 g(42);
    for (int k = 0; k < 300; ++k) {
        auto f = random_frame(g);
        auto b = alice_basis(f);
        Mat4 rho = testutil::random_density(g, 1 + k % 4);
        auto d = conditional_decompose(rho, f);
        CHECK(dist(d.rho0, block(rho, b.plus, b.plus)) < 1e-14);
        CHECK(dist(d.rho1, block(rho, b.minus, b.minus)) < 1e-14);
        CHECK(dist(d.m, block(rho, b.plus, b.minus)) < 1e-14);
        CHECK(dist(reconstruct(d, f), rho) < 1e-12);
        CHECK(std::abs(trace(d.rho0 + d.rho1) - 1.0) < 1e-12);
        CHECK(dist(d.rho0 + d.rho1, partial_trace_a(rho)) < 1e-12);
    }

    // P0 x sigma is block-pure in its own frame.
    MeasurementFrame f{1.1, 2.3, 0.0};
    auto b = alice_basis(f);
    Mat2 sigma = testutil::random_hermitian<2>(g);
    auto d = conditional_decompose(tensor(b.P0, sigma), f);
    CHECK(dist(d.rho0, sigma) < 1e-14);
    CHECK(max_abs(d.rho1) < 1e-14);
    CHECK(max_abs(d.m) < 1e-14);

    // Maximally entangled psi1: M is far from Hermitian for every tau.
    auto bell = make_psi1(kPi / 4).amplitudes;
    for (double tau : {0.0, 0.5, 1.9, 3.3, 5.0}) {
        auto m = conditional_decompose(outer(bell, bell), {kPi / 2, tau, 0.0}).m;
        CHECK(hermiticity_defect(m) > 0.1);
    }
}

TEST_CASE("hermiticity defect and canonical taus") {
    std::mt19937_64 g(43);
    CHECK(hermiticity_defect(testutil::random_hermitian<2>(g)) < 1e-15);
    Mat2 n;
    n(0, 1) = 1.0;
    CHECK(hermiticity_defect(n) == doctest::Approx(std::sqrt(2.0)));

    auto t0 = canonical_taus({0.3, 0.0, 0.2, 1.0, 0.5});
    REQUIRE(t0.size() == 1);
    CHECK(t0[0] == 0.0);
    auto t1 = canonical_taus({0.3, kPi / 4, 0.2, kPi / 3, 0.5});
    REQUIRE(t1.size() == 2);
    CHECK(t1[0] == doctest::Approx(kPi / 3));
    CHECK(t1[1] == doctest::Approx(5 * kPi / 3));
    CHECK(canonical_taus({0.3, kPi / 2, 0.2, 1.0, 0.5}).size() == 1);
}

TEST_CASE("residuals two ways") {
    std::mt19937_64 g(44);
    for (int k = 0; k < 1000; ++k) {
        auto p = testutil::random_params(g);
        auto f = random_frame(g);
        auto closed = residuals(p, f);
        auto num = residuals_from_block(conditional_decompose(rank2_density(p), f).m);
        CHECK(std::abs(closed.r1 - num.r1) < 1e-12);
        CHECK(std::abs(closed.r2 - num.r2) < 1e-12);
        CHECK(std::abs(closed.r3 - num.r3) < 1e-12);
        CHECK(std::abs(num.r1.real()) < 1e-14);
        CHECK(std::abs(num.r2.real()) < 1e-14);
        double fro = std::sqrt(std::norm(closed.r1) + std::norm(closed.r2) + 2 * std::norm(closed.r3));
        CHECK(std::abs(fro - hermiticity_defect(conditional_decompose(rank2_density(p), f).m)) < 1e-12);
    }

    // Pure psi1: only r3 survives.
    for (double tau : {0.0, 1.0, 4.0}) {
        Rank2Params p{0.6, 0.8, 0.3, 2.0, 1.0};
        auto r = residuals(p, {kPi / 2, tau, 0.0});
        CHECK(std::abs(r.r1) < 1e-15);
        CHECK(std::abs(r.r2) < 1e-15);
        CHECK(std::abs(r.r3 + 0.5 * std::polar(1.0, tau) * std::sin(1.2)) < 1e-15);
    }
}

TEST_CASE("NS criterion") {
    std::mt19937_64 g(45);
    for (int k = 0; k < 2000; ++k) {
        auto p = testutil::random_params(g);
        // phi = 0, nu2 sin2alpha = nu1 sin2theta
        Rank2Params a{p.theta, 0.0, p.alpha, p.beta,
                      std::sin(2 * p.alpha) / (std::sin(2 * p.alpha) + std::sin(2 * p.theta))};
        CHECK(ns_separability_check(a));
        CHECK(hermiticity_defect(conditional_decompose(rank2_density(a), {kPi / 2, 0.0, 0.0}).m) < 1e-12);
        // phi = pi/2, nu1 = nu2
        Rank2Params b{p.theta, kPi / 2, p.alpha, p.beta, 0.5};
        CHECK(ns_separability_check(b));
        CHECK(separability_verdict(b) == Verdict::Separable);
        // theta = alpha = 0: product states with sin2phi != 0, only one tau works
        Rank2Params c{0.0, p.phi, 0.0, p.beta, p.nu1};
        CHECK(ns_separability_check(c));

        // xi does not matter at the canonical tau.
        for (double xi : {0.3, 0.9, kPi / 2, 2.2, 3.0})
            CHECK(hermiticity_defect(conditional_decompose(rank2_density(a), {xi, 0.0, 0.0}).m) < 1e-12);
    }

    for (double th : {0.3, kPi / 3, 1.3}) {
        // AVN mixture: cos(theta)|10> + sin(theta)|01> is phi = 0, alpha = pi/2 - theta.
        CHECK_FALSE(ns_separability_check({th, 0.0, kPi / 2 - th, 0.0, 0.7}));
        CHECK(ns_separability_check({th, 0.0, kPi / 2 - th, 0.0, 0.5}));
        CHECK_FALSE(ns_separability_check({th, kPi / 2, 0.0, 0.0, 0.7}));
    }

    int checked = 0;
    for (int k = 0; k < 10000; ++k) {
        auto p = testutil::random_params(g);
        double c = concurrence_closed_form(p);
        if (c < BORDERLINE_C) continue;
        ++checked;
        CHECK_FALSE(ns_separability_check(p, 1e-7));
        CHECK(separability_verdict(p) == Verdict::Entangled);
    }
    CHECK(checked > 9900);
}
