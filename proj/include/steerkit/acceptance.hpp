#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "steerkit/steer.hpp"

namespace steerkit {

inline constexpr std::uint64_t DEFAULT_SEED = 2718281828ULL;

struct AcceptanceOptions {
    std::uint64_t seed = DEFAULT_SEED;
    // Base draw count: A1, A2, A9 use n; A3, A4, A10 use n/10; A5 uses 10n.
    int n = 10000;
    // Closed-form steering vectors checked by A4; replaceable for mutation tests.
    std::function<SteeringVectors(const Rank2Params&, double)> vectors = steering_vectors;
};

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct AcceptanceReport {
    std::uint64_t seed = 0;
    int n = 0;
    std::string rng;
    std::vector<CriterionResult> results;

    bool all_pass() const;
};

AcceptanceReport run_acceptance(const AcceptanceOptions& opts = {});

/// One line per criterion: "A1  PASS  title: detail".
std::string format_report(const AcceptanceReport& r);

}  // namespace steerkit
