#include "steerkit/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "steerkit/entangle.hpp"
#include "steerkit/steer.hpp"

namespace steerkit {

namespace {

constexpr double kPi = std::numbers::pi;

double pick(std::mt19937_64& rng, std::initializer_list<double> edges, double lo, double hi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = u(rng);
    if (r >= 0.5) return lo + (hi - lo) * u(rng);
    std::uniform_int_distribution<std::size_t> which(0, edges.size() - 1);
    double e = *(edges.begin() + which(rng));
    if (r < 1.0 / 3) return e;
    double off = std::pow(10.0, -3.0 - 6.0 * u(rng));
    double sign = e <= lo ? 1.0 : e >= hi ? -1.0 : (u(rng) < 0.5 ? -1.0 : 1.0);
    return std::clamp(e + sign * off, lo, hi);
}

void check_config(const SamplerConfig& cfg, bool pure) {
    if (cfg.count < 1) throw std::invalid_argument("sampler: count must be >= 1");
    if (pure != (cfg.distribution == Distribution::HaarPure))
        throw std::invalid_argument("sampler: distribution does not match the sampler kind");
}

}  // namespace

BobMaximum maximize_over_bob(const Mat4& rho, const MeasurementFrame& f, const GridSpec& grid) {
    if (grid.n_theta < 8 || grid.n_phi < 8 || grid.refine_iters < 0)
        throw std::invalid_argument("maximize_over_bob: grid counts must be >= 8");

    // <W> = <nB| Tr_A[(P x I) rho] |nB>
    const Mat2 bob = partial_trace_a(tensor(witness_alice_projector(f), Mat2::identity()) * rho);
    auto value = [&](double th, double ph) {
        const double c = std::cos(th / 2), s = std::sin(th / 2);
        const Complex e = std::polar(1.0, ph);
        return (c * c * bob(0, 0) + s * s * bob(1, 1) + c * s * (bob(0, 1) * e + bob(1, 0) * std::conj(e))).real();
    };

    BobMaximum best;
    best.value = -1e300;
    const double dth = kPi / (grid.n_theta - 1), dph = 2 * kPi / grid.n_phi;
    for (int i = 0; i < grid.n_theta; ++i)
        for (int j = 0; j < grid.n_phi; ++j) {
            double v = value(i * dth, j * dph);
            if (v > best.value) {
                best.value = v;
                best.thetaB = i * dth;
                best.phiB = j * dph;
            }
        }
    best.history.push_back(best.value);

    // Shrinking 9x9 grid in the tangent plane at the incumbent direction, which
    // stays regular at the poles.
    auto angles = [](const std::array<double, 3>& n) {
        const double r = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        const double th = std::acos(std::clamp(n[2] / r, -1.0, 1.0));
        const double ph = std::atan2(n[1], n[0]);
        return std::pair{th, ph < 0 ? ph + 2 * kPi : ph};
    };
    double w = dth;
    for (int it = 0; it < grid.refine_iters; ++it) {
        const double st = std::sin(best.thetaB), ct = std::cos(best.thetaB);
        const double sp = std::sin(best.phiB), cp = std::cos(best.phiB);
        const std::array<double, 3> n0{st * cp, st * sp, ct}, e1{ct * cp, ct * sp, -st}, e2{-sp, cp, 0.0};
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                const double a = i * w / 4, b = j * w / 4;
                auto [th, ph] = angles({n0[0] + a * e1[0] + b * e2[0], n0[1] + a * e1[1] + b * e2[1],
                                        n0[2] + a * e1[2] + b * e2[2]});
                const double v = value(th, ph);
                if (v > best.value) {
                    best.value = v;
                    best.thetaB = th;
                    best.phiB = ph;
                }
            }
        w *= 0.5;
        best.history.push_back(best.value);
    }
    return best;
}

ParamSampler::ParamSampler(const SamplerConfig& cfg) : cfg_(cfg), rng_(cfg.seed) { check_config(cfg, false); }

std::optional<Rank2Params> ParamSampler::next() {
    if (drawn_ >= cfg_.count) return std::nullopt;
    ++drawn_;
    const double q = kPi / 2;
    Rank2Params p;
    if (cfg_.distribution == Distribution::UniformParams) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        p.theta = q * u(rng_);
        p.phi = q * u(rng_);
        p.alpha = q * u(rng_);
        p.beta = 2 * kPi * u(rng_);
        p.nu1 = u(rng_);
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        p.theta = q * u(rng_);
        p.phi = pick(rng_, {0.0, q}, 0.0, q);
        p.alpha = pick(rng_, {0.0, q / 2, q}, 0.0, q);
        p.beta = 2 * kPi * u(rng_);
        p.nu1 = pick(rng_, {0.0, 0.5, 1.0}, 0.0, 1.0);
    }
    return p;
}

PureSampler::PureSampler(const SamplerConfig& cfg) : cfg_(cfg), rng_(cfg.seed) { check_config(cfg, true); }

std::optional<PureState2Q> PureSampler::next() {
    if (drawn_ >= cfg_.count) return std::nullopt;
    ++drawn_;
    std::normal_distribution<double> n(0.0, 1.0);
    PureState2Q s;
    for (auto& z : s.amplitudes) {
        double re = n(rng_);
        z = Complex(re, n(rng_));
    }
    double l = norm(s.amplitudes);
    for (auto& z : s.amplitudes) z /= l;
    return s;
}

std::vector<Rank2Params> sample_params(const SamplerConfig& cfg) {
    ParamSampler s(cfg);
    std::vector<Rank2Params> out;
    out.reserve(cfg.count);
    while (auto p = s.next()) out.push_back(*p);
    return out;
}

std::vector<PureState2Q> sample_haar_pure(const SamplerConfig& cfg) {
    PureSampler s(cfg);
    std::vector<PureState2Q> out;
    out.reserve(cfg.count);
    while (auto p = s.next()) out.push_back(*p);
    return out;
}

CharPolyCoefficients char_poly_oracle(const Mat4& rho) {
    auto ev = eigvals_general(spin_flip(rho) * rho);
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
    if (std::abs(ev[2]) > 1e-8) throw std::invalid_argument("char_poly_oracle: rank of rho exceeds 2");
    return {-(ev[0] + ev[1]).real(), (ev[0] * ev[1]).real()};
}

}  // namespace steerkit
