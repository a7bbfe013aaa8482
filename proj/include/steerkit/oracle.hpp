#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "steerkit/cmat.hpp"
#include "steerkit/decomp.hpp"
#include "steerkit/states.hpp"

namespace steerkit {

// Recorded in reports so a seed can be replayed.
inline constexpr const char* RNG_NAME = "std::mt19937_64";

struct GridSpec {
    int n_theta = 96;
    int n_phi = 192;
    int refine_iters = 40;
};

enum class Distribution { UniformParams, HaarPure, BoundaryBiased };

struct SamplerConfig {
    std::uint64_t seed = 0;
    int count = 1;
    Distribution distribution = Distribution::UniformParams;
};

struct BobMaximum {
    double value = 0;
    double thetaB = 0;
    double phiB = 0;
    std::vector<double> history;  // incumbent after the grid and after each refinement pass
};

/// Brute-force max over Bob's Bloch sphere of <W> for a fixed Alice frame:
/// grid (theta row-major, first maximum wins) then a 9x9 local grid around the
/// incumbent, halved each pass; only improvements are accepted.
/// Throws std::invalid_argument when a grid count is below 8.
BobMaximum maximize_over_bob(const Mat4& rho, const MeasurementFrame& f, const GridSpec& grid = {});

/// Draws one Rank2Params at a time; deterministic in the seed.
class ParamSampler {
public:
    explicit ParamSampler(const SamplerConfig& cfg);
    std::optional<Rank2Params> next();

private:
    SamplerConfig cfg_;
    std::mt19937_64 rng_;
    int drawn_ = 0;
};

/// Four independent complex Gaussians, normalized.
class PureSampler {
public:
    explicit PureSampler(const SamplerConfig& cfg);
    std::optional<PureState2Q> next();

private:
    SamplerConfig cfg_;
    std::mt19937_64 rng_;
    int drawn_ = 0;
};

/// Whole streams at once. Throw std::invalid_argument on count < 1 or a
/// distribution of the wrong kind.
std::vector<Rank2Params> sample_params(const SamplerConfig& cfg);
std::vector<PureState2Q> sample_haar_pure(const SamplerConfig& cfg);

struct CharPolyCoefficients {
    double s2 = 0;
    double s1 = 0;
};

/// Nonzero factor v^2 + s2 v + s1 of det(vI - rho~ rho) from the two largest
/// eigenvalues of rho~ rho (general eigensolver). Throws std::invalid_argument
/// if a third eigenvalue exceeds 1e-8 (rank > 2).
CharPolyCoefficients char_poly_oracle(const Mat4& rho);

}  // namespace steerkit
