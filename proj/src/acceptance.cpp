#include "steerkit/acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "steerkit/decomp.hpp"
#include "steerkit/entangle.hpp"
#include "steerkit/oracle.hpp"

namespace steerkit {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double len(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

std::vector<Rank2Params> uniform(std::uint64_t seed, int count) {
    return sample_params({seed, std::max(1, count), Distribution::UniformParams});
}

CriterionResult a1(const AcceptanceOptions& o) {
    double worst = 0;
    auto draws = uniform(o.seed + 1, o.n);
    for (const auto& p : draws)
        worst = std::max(worst, std::abs(concurrence_closed_form(p) - concurrence_wootters(rank2_density(p)).c));
    return {"A1", "concurrence dual-path", worst < 1e-8,
            fmt("max |C_closed - C_wootters| = %.3g over %zu draws (tol 1e-8)", worst, draws.size())};
}

CriterionResult a2(const AcceptanceOptions& o) {
    auto draws = uniform(o.seed + 2, o.n / 2);
    auto edge = sample_params({o.seed + 102, std::max(1, o.n - o.n / 2), Distribution::BoundaryBiased});
    draws.insert(draws.end(), edge.begin(), edge.end());
    int excluded = 0, disagree = 0;
    for (const auto& p : draws) {
        const double c = concurrence_closed_form(p);
        if (c < BORDERLINE_C) {
            ++excluded;
            continue;
        }
        if (ns_separability_check(p)) ++disagree;
    }
    return {"A2", "NS criterion equivalence", disagree == 0,
            fmt("%d disagreements over %zu draws, %d with C < 1e-7 excluded", disagree, draws.size() - excluded,
                excluded)};
}

CriterionResult a3(const AcceptanceOptions& o) {
    double worst = 0;
    auto draws = uniform(o.seed + 3, o.n / 10);
    for (const auto& p : draws) {
        double lmax = eigh(partial_trace_a(rank2_density(p))).values[1];
        worst = std::max(worst, std::abs(classical_bound(p) - 0.5 * lmax));
    }
    return {"A3", "classical bound identity", worst < 1e-12,
            fmt("max |C_LHS - lambda_max(rho_B)/2| = %.3g over %zu draws (tol 1e-12)", worst, draws.size())};
}

CriterionResult a4(const AcceptanceOptions& o) {
    double worst = 0;
    int evals = 0;
    auto draws = uniform(o.seed + 4, o.n / 10);
    for (const auto& p : draws) {
        Mat4 rho = rank2_density(p);
        for (double tau : canonical_taus(p)) {
            auto w = w_max_from_vectors(o.vectors(p, tau));
            auto up = maximize_over_bob(rho, {kPi / 2, tau, kPi / 2});
            auto dn = maximize_over_bob(rho, {kPi / 2, tau, 3 * kPi / 2});
            worst = std::max({worst, std::abs(w.first - up.value), std::abs(w.second - dn.value)});
            evals += 2;
        }
    }
    return {"A4", "closed-form maxima vs grid oracle", worst < 1e-6,
            fmt("max |w_closed - w_oracle| = %.3g over %d (tau, delta) frames (tol 1e-6)", worst, evals)};
}

CriterionResult a5(const AcceptanceOptions& o) {
    auto draws = uniform(o.seed + 5, 10 * o.n);
    int entangled = 0, failures = 0;
    double min_margin = 1e300;
    for (const auto& p : draws) {
        auto c = steer_certificate(p);
        if (c.concurrence <= 1e-4) continue;
        ++entangled;
        min_margin = std::min(min_margin, c.margin);
        if (!(c.margin > 0)) ++failures;
    }

    std::vector<Rank2Params> seps;
    for (const auto& p : uniform(o.seed + 105, std::max(1, o.n / 10))) {
        const double s2a = std::sin(2 * p.alpha), s2t = std::sin(2 * p.theta);
        if (s2a + s2t > 0) seps.push_back({p.theta, 0.0, p.alpha, p.beta, s2a / (s2a + s2t)});
        seps.push_back({p.theta, kPi / 2, p.alpha, p.beta, 0.5});
        seps.push_back({0.0, p.phi, p.alpha, p.beta, 1.0});
        seps.push_back({kPi / 2, p.phi, p.alpha, p.beta, 1.0});
        seps.push_back({p.theta, 0.0, 0.0, p.beta, 0.0});
        seps.push_back({p.theta, 0.0, kPi / 2, p.beta, 0.0});
        seps.push_back({0.0, p.phi, 0.0, p.beta, p.nu1});
    }
    double worst_sep = 0;
    for (const auto& s : seps) worst_sep = std::max(worst_sep, std::abs(steer_certificate(s).margin));
    const bool pass = failures == 0 && entangled > 0 && worst_sep < 1e-9;
    return {"A5", "entangled implies steerable",
            pass,
            fmt("%d/%d entangled draws (C > 1e-4) with margin <= 0, min margin %.3g; max |margin| over %zu "
                "separable states %.3g (tol 1e-9)",
                failures, entangled, min_margin, seps.size(), worst_sep)};
}

CriterionResult a6(const AcceptanceOptions& o) {
    std::mt19937_64 rng(o.seed + 6);
    std::uniform_real_distribution<double> q(0, kPi / 2), b(0, 2 * kPi), u(0, 1);
    double worst_w = 0, worst_h = 0;
    int count = 0;
    for (int fam = 0; fam < 3; ++fam)
        for (int k = 0; k < 200; ++k) {
            Rank2Params p{q(rng), q(rng), q(rng), b(rng), u(rng)};
            if (fam == 0) p.phi = 0;
            if (fam == 1) p.phi = kPi / 2;
            if (fam == 2) {
                p.beta = kPi / 2;
                p.alpha = 0;
            }
            const double c = concurrence_wootters(rank2_density(p)).c;
            auto cert = steer_certificate(p);
            const double fl = len(cert.vectors.f), hl = len(cert.vectors.h);
            worst_w = std::max(worst_w, std::abs(cert.best_w - (1 + std::sqrt(fl * fl + c * c)) / 4));
            worst_h = std::max(worst_h, std::abs(hl * hl - c * c));
            ++count;
        }
    return {"A6", "example families", worst_w < 1e-9 && worst_h < 1e-9,
            fmt("max |w_max - (1+sqrt(F^2+C^2))/4| = %.3g, max ||H|^2 - C^2| = %.3g over %d draws (tol 1e-9)",
                worst_w, worst_h, count)};
}

CriterionResult a7(const AcceptanceOptions&) {
    auto expected = [](double c) { return (2 + std::sqrt(1 + 2 * c * c)) / (3 * std::sqrt(3.0)); };
    double worst_pure = 0, worst_mixed = 0;
    for (int k = 0; k < 50; ++k) {
        const double th = k * (kPi / 2) / 49;
        auto psi = make_psi1(th).amplitudes;
        double v = linear_i3_value(outer(psi, psi), optimal_linear_settings(theta3_pure(th)));
        worst_pure = std::max(worst_pure, std::abs(v - expected(std::sin(2 * th))));
    }
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double th = i * (kPi / 2) / 19, nu1 = j / 19.0;
            Mat4 rho = rank2_density({th, kPi / 2, 0.0, 0.0, nu1});
            double v = linear_i3_value(rho, optimal_linear_settings(theta3_mixed(th, nu1)));
            worst_mixed = std::max(worst_mixed, std::abs(v - expected(std::abs(2 * nu1 - 1) * std::sin(2 * th))));
        }
    return {"A7", "linear 3-setting closed form", worst_pure < 1e-10 && worst_mixed < 1e-10,
            fmt("max defect %.3g on 50-point pure grid, %.3g on 20x20 mixed grid (tol 1e-10)", worst_pure,
                worst_mixed)};
}

CriterionResult a8(const AcceptanceOptions&) {
    double worst = 0;
    for (int k = 0; k <= 100; ++k) {
        const double th = k * (kPi / 2) / 100, c = std::sin(2 * th);
        worst = std::max(worst, std::abs(chsh_max(c) - 2 * std::sqrt(1 + c * c)));
    }
    const double top = std::abs(chsh_max(std::sin(2 * (kPi / 4))) - 2 * std::sqrt(2.0));
    return {"A8", "Gisin / CHSH maximum", worst == 0.0 && top < 1e-12,
            fmt("max |I - 2 sqrt(1+C^2)| = %.3g on 101 points; |I(pi/4) - 2 sqrt2| = %.3g", worst, top)};
}

CriterionResult a9(const AcceptanceOptions& o) {
    auto states = sample_haar_pure({o.seed + 9, std::max(1, o.n), Distribution::HaarPure});
    double worst_res = 0, worst_k = 0;
    for (const auto& s : states) {
        auto r = schmidt_decompose(s);
        const auto& v = s.amplitudes;
        // Singular values of [[c, a], [b, d]] from its invariants.
        double fro2 = 0;
        for (auto z : v) fro2 += std::norm(z);
        const double det = std::abs(v[0] * v[3] - v[1] * v[2]);
        const double s1 = std::sqrt(0.5 * (fro2 + std::sqrt(std::max(0.0, fro2 * fro2 - 4 * det * det))));
        const double s2 = det / s1;
        worst_res = std::max(worst_res, r.residual);
        worst_k = std::max({worst_k, std::abs(r.kappa1 - s1), std::abs(r.kappa2 - s2)});
    }
    return {"A9", "Schmidt round-trip", worst_res < 1e-9 && worst_k < 1e-10,
            fmt("max residual %.3g (tol 1e-9), max kappa defect %.3g (tol 1e-10) over %zu Haar states", worst_res,
                worst_k, states.size())};
}

CriterionResult a10(const AcceptanceOptions& o) {
    std::mt19937_64 rng(o.seed + 10);
    std::uniform_real_distribution<double> x(0, kPi), t(0, 2 * kPi);
    double worst_rec = 0, worst_b = 0;
    auto draws = uniform(o.seed + 110, o.n / 10);
    for (const auto& p : draws) {
        Mat4 rho = rank2_density(p);
        MeasurementFrame f{x(rng), t(rng), t(rng)};
        auto d = conditional_decompose(rho, f);
        auto ref = conditional_decompose(rho, {kPi / 2, 0.0, 0.0});
        worst_rec = std::max(worst_rec, max_abs(reconstruct(d, f) - rho));
        worst_b = std::max(worst_b, max_abs((d.rho0 + d.rho1) - (ref.rho0 + ref.rho1)));
    }
    return {"A10", "decomposition completeness", worst_rec < 1e-12 && worst_b < 1e-12,
            fmt("max reconstruction defect %.3g, max frame dependence of rho0+rho1 %.3g over %zu pairs (tol 1e-12)",
                worst_rec, worst_b, draws.size())};
}

CriterionResult a11(const AcceptanceOptions&) {
    auto anchor = steer_certificate_numeric(avn_state(kPi / 3, 0.7), {0.0});
    int found = 0;
    double ft = 0, fn = 0, fi = 0, fc = 0;
    for (int i = 1; i < 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const double th = i * (kPi / 2) / 20, nu1 = j / 20.0;
            Mat4 rho = avn_state(th, nu1);
            const double c = concurrence_wootters(rho).c;
            if (c < 1e-3) continue;
            const double i3 = linear_i3_value(rho, optimal_linear_settings(theta3_mixed(th, nu1)));
            if (i3 > LINEAR_I3_BOUND + 1e-9) continue;
            if (!steer_certificate_numeric(rho, {0.0}).violated) continue;
            if (found++ == 0) {
                ft = th;
                fn = nu1;
                fi = i3;
                fc = c;
            }
        }
    return {"A11", "AVN gap", anchor.violated && found > 0,
            fmt("AVN(pi/3, 0.7) margin %.3g; %d scan points with C > 0, I3 <= 1/sqrt3 and a violated certificate, "
                "first (theta=%.4f, nu1=%.2f): C=%.4f, I3=%.6f <= %.6f",
                anchor.margin, found, ft, fn, fc, fi, LINEAR_I3_BOUND)};
}

CriterionResult a12(const AcceptanceOptions& o) {
    auto draws = uniform(o.seed + 12, 200);
    double worst = 0;
    int bad_theta = 0, flagged = 0;
    for (auto p : draws) {
        p.theta = kPi / 4;
        auto out = swap_theta_quarter(p);
        const double before = concurrence_wootters(rank2_density(p)).c;
        const double after = concurrence_wootters(rank2_density(out.params)).c;
        worst = std::max(worst, std::abs(before - after));
        const auto st = out.unitary.status;
        if (st == SwapStatus::Degenerate || st == SwapStatus::AlreadyCanonical)
            ++flagged;
        else if (std::abs(out.params.theta - kPi / 4) <= 1e-9)
            ++bad_theta;
    }
    return {"A12", "theta = pi/4 swap", worst < 1e-8 && bad_theta == 0,
            fmt("max concurrence change %.3g (tol 1e-8), %d unflagged outputs with theta' = pi/4, %d flagged, "
                "%zu draws",
                worst, bad_theta, flagged, draws.size())};
}

}  // namespace

bool AcceptanceReport::all_pass() const {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

AcceptanceReport run_acceptance(const AcceptanceOptions& opts) {
    AcceptanceReport rep;
    rep.seed = opts.seed;
    rep.n = opts.n;
    rep.rng = RNG_NAME;
    using Fn = CriterionResult (*)(const AcceptanceOptions&);
    const Fn all[] = {a1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11, a12};
    for (Fn f : all) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = f(opts);
        } catch (const std::exception& e) {
            r.id = "A" + std::to_string(rep.results.size() + 1);
            r.title = "exception";
            r.pass = false;
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.results.push_back(r);
    }
    return rep;
}

std::string format_report(const AcceptanceReport& r) {
    std::ostringstream os;
    os << "seed " << r.seed << ", n " << r.n << ", rng " << r.rng << "\n";
    for (const auto& c : r.results)
        os << fmt("%-4s %s  %s: %s (%.2fs)\n", c.id.c_str(), c.pass ? "PASS" : "FAIL", c.title.c_str(), c.detail.c_str(),
                  c.seconds);
    os << (r.all_pass() ? "all criteria passed\n" : "some criteria FAILED\n");
    return os.str();
}

}  // namespace steerkit
