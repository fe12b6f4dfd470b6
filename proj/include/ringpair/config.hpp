#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ringpair/highq.hpp"
#include "ringpair/resonator.hpp"
#include "ringpair/transfer.hpp"

namespace ringpair {

enum class Quantity {
    pair_rate_mrr,
    pair_rate_out,
    car_mrr,
    car_out,
    herald_mrr,
    herald_out,
    populations,
    transfer_entry,
    commutators,
    limit_report,
};

std::string_view to_string(Quantity q);

enum class Spacing { linear, log };

struct Axis {
    std::string name;  // rho, alpha, gamma_T, gamma_int_T (optionally signal./idler.), theta, r
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    Spacing spacing = Spacing::linear;
    std::vector<double> values;  // explicit list; overrides min/max/count when set

    std::vector<double> points() const;
    std::size_t size() const;
};

// Grid for the limits subcommand: fixed rates, halving T.
struct LimitSpec {
    RateSet rates;
    double t0 = 1e-2;
    int count = 4;
};

struct SweepSpec {
    Quantity quantity = Quantity::pair_rate_mrr;
    std::vector<Axis> axes;  // one or two
    // Fixed numeric bindings under canonical dotted keys ("signal.rho", "pump.r", "sweep.theta").
    std::map<std::string, double> fixed;
    Process process = Process::spdc;
    bool symmetric = false;
    Location location = Location::output_bus;  // populations, transfer_entry
    std::optional<LimitSpec> limits;
    // Sorted "key = value" lines of the accepted document; hashed into the CSV header.
    std::string canonical;
};

struct ParsedConfig {
    SweepSpec spec;
    std::vector<std::string> warnings;
};

// Grammar: one `section.key = value` per line, '#' starts a comment, keys are
// case sensitive. Sections: signal, idler, pump, sweep, axis1, axis2, limits.
// Duplicate keys: last one wins, with a warning. Throws ValidationError with
// the line number for malformed lines, unknown keys and out-of-range values,
// and without one for missing required keys.
ParsedConfig parse_config(std::string_view text);

ParsedConfig load_config(const std::string& path);

// Canonical parameter keys an axis writes to under the given spec.
std::vector<std::string> axis_targets(const Axis& axis, bool symmetric);

// Builds the physical configuration from fixed bindings plus overrides (axis
// coordinates by canonical key). Throws ValidationError on bad values.
SystemConfig build_system(const SweepSpec& spec, const std::map<std::string, double>& overrides = {});

// Detuning for a point: omega = theta / T_signal.
double point_omega(const SweepSpec& spec, const std::map<std::string, double>& overrides = {});

// 64-bit FNV-1a, lower-case hex.
std::string fnv1a_hex(std::string_view text);

}  // namespace ringpair
