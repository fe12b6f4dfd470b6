#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ringpair/config.hpp"

namespace ringpair {

inline constexpr const char* kArtifactVersion = "1.0.0";

// A computed table. Row i holds the grid coordinates followed by the values;
// flags[i] carries RateFlag bits for that row. Undefined values (pole rows)
// are NaN, and CAR may be +infinity (the lossless sentinel).
struct Dataset {
    std::string version = kArtifactVersion;
    std::string config_hash;
    std::string config;  // canonical config text
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::uint32_t> flags;
    std::map<std::string, double> summary;  // e.g. fitted convergence orders
};

// Equality with NaN == NaN, for round-trip checks.
bool same_dataset(const Dataset& x, const Dataset& y);

// Value columns produced for a quantity (coordinates excluded).
std::vector<std::string> value_columns(Quantity q);

struct PointResult {
    std::vector<double> values;
    std::uint32_t flags = 0;
};

// One grid point evaluated on its own; coords follow spec.axes.
PointResult evaluate_point(const SweepSpec& spec, const std::vector<double>& coords);

// Full grid, axis1 outer and axis2 inner. Grid points run in parallel
// (RINGPAIR_THREADS); rows are stored by grid index, so the result does not
// depend on scheduling. limit_report specs run the T-halving grid instead.
Dataset run_sweep(const SweepSpec& spec);

// Convergence table for a limits grid: one row per point, T_a and scale
// followed by the relative error of every quantity; orders go to summary.
Dataset run_limits(const LimitSpec& limits, const std::string& canonical = {});

enum class Format { csv, json };

// CSV: "# config-hash: <hex>", header row, rows with 17 significant digits,
// LF endings; NaN is an empty cell and infinities are "inf"/"-inf".
std::string emit_csv(const Dataset& d);

// JSON with fixed key order: version, config_hash, config, columns, rows,
// flags, summary. NaN is null and infinities are the strings "inf"/"-inf".
std::string emit_json(const Dataset& d);

std::string emit(const Dataset& d, Format format);

// Inverse of emit_json. Throws ValidationError on malformed input.
Dataset dataset_from_json(const std::string& text);

}  // namespace ringpair
