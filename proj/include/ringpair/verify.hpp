#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ringpair/resonator.hpp"
#include "ringpair/transfer.hpp"

namespace ringpair {

enum class VerifyLevel { fast, full };

struct InvariantResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 0;
    bool passed = false;
};

struct VerifyReport {
    std::vector<InvariantResult> results;
    double seconds = 0.0;

    bool passed() const;
};

// Output-bus transfer used by the checks; swapped out by mutation tests.
using TransferEvaluator = std::function<TransferPair(const SystemConfig&, double)>;

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::fast;
    std::uint64_t seed = 0x5eed2024ull;
    TransferEvaluator output = output_transfer;
};

// A random valid configuration plus a detuning. Every fourth draw (by the
// caller's count) should be symmetric; pass symmetric = true for those.
struct RandomPoint {
    SystemConfig config;
    double omega = 0.0;
};

RandomPoint random_point(std::mt19937_64& rng, bool symmetric);

// fast: 100 random configs. full: 1000 configs plus the high-Q convergence,
// pole-residual and boundary-condition studies.
VerifyReport verify(const VerifyOptions& options = {});

// One line per invariant: PASS/FAIL, name, max residual, tolerance.
std::string format_report(const VerifyReport& report);

}  // namespace ringpair
