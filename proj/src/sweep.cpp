#include "ringpair/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "ringpair/biphoton.hpp"
#include "ringpair/commutators.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/highq.hpp"
#include "ringpair/parallel.hpp"

namespace ringpair {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_value(double x, double y) {
    return x == y || (std::isnan(x) && std::isnan(y));
}

std::string format_number(double v) {
    if (std::isnan(v)) return {};
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ojson number_to_json(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double number_from_json(const ojson& j) {
    if (j.is_null()) return kNaN;
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ValidationError("dataset JSON: unexpected string value '" + s + "'");
    }
    if (!j.is_number()) throw ValidationError("dataset JSON: expected a number");
    return j.get<double>();
}

Location quantity_location(const SweepSpec& spec) {
    switch (spec.quantity) {
        case Quantity::pair_rate_mrr:
        case Quantity::car_mrr:
        case Quantity::herald_mrr:
            return Location::intracavity;
        case Quantity::pair_rate_out:
        case Quantity::car_out:
        case Quantity::herald_out:
            return Location::output_bus;
        default:
            return spec.location;
    }
}

std::vector<double> nan_values(std::size_t n) { return std::vector<double>(n, kNaN); }

}  // namespace

bool same_dataset(const Dataset& x, const Dataset& y) {
    if (x.version != y.version || x.config_hash != y.config_hash || x.config != y.config ||
        x.columns != y.columns || x.flags != y.flags || x.rows.size() != y.rows.size() ||
        x.summary.size() != y.summary.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        if (x.rows[i].size() != y.rows[i].size()) return false;
        for (std::size_t j = 0; j < x.rows[i].size(); ++j) {
            if (!same_value(x.rows[i][j], y.rows[i][j])) return false;
        }
    }
    for (const auto& [k, v] : x.summary) {
        const auto it = y.summary.find(k);
        if (it == y.summary.end() || !same_value(v, it->second)) return false;
    }
    return true;
}

std::vector<std::string> value_columns(Quantity q) {
    switch (q) {
        case Quantity::pair_rate_mrr:
        case Quantity::pair_rate_out:
            return {"rate_tilde", "pair_rate"};
        case Quantity::car_mrr:
        case Quantity::car_out:
            return {"car"};
        case Quantity::herald_mrr:
        case Quantity::herald_out:
            return {"herald"};
        case Quantity::populations:
            return {"p0", "p1a", "p1b", "p2"};
        case Quantity::transfer_entry: {
            std::vector<std::string> cols;
            for (const char* m : {"G", "H"}) {
                for (const char* e : {"aa", "ab", "ba", "bb"}) {
                    for (const char* part : {"re", "im"}) {
                        cols.push_back(std::string(m) + "_" + e + "_" + part);
                    }
                }
            }
            return cols;
        }
        case Quantity::commutators:
            return {"c_aa", "c_bb", "d_ab_re", "d_ab_im"};
        case Quantity::limit_report:
            return {};
    }
    return {};
}

PointResult evaluate_point(const SweepSpec& spec, const std::vector<double>& coords) {
    if (coords.size() != spec.axes.size()) {
        throw ValidationError("evaluate_point: one coordinate per axis expected");
    }
    std::map<std::string, double> overrides;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        for (const std::string& t : axis_targets(spec.axes[i], spec.symmetric)) overrides[t] = coords[i];
    }
    const SystemConfig config = build_system(spec, overrides);
    const double omega = point_omega(spec, overrides);
    const Location location = quantity_location(spec);

    PointResult out;
    switch (spec.quantity) {
        case Quantity::transfer_entry: {
            try {
                const TransferPair p = transfer(config, omega, location);
                for (const Mat2* m : {&p.G, &p.H}) {
                    for (const cplx& z : m->m) {
                        out.values.push_back(z.real());
                        out.values.push_back(z.imag());
                    }
                }
            } catch (const Error&) {
                out.values = nan_values(16);
                out.flags |= kRatePole;
            }
            return out;
        }
        case Quantity::commutators: {
            const CommutatorSet c = commutators_closed_form(config);
            out.values = {c.c_aa, c.c_bb, c.d_ab.real(), c.d_ab.imag()};
            if (c.c_aa < 0.0 || c.c_bb < 0.0) out.flags |= kRateNegativeCommutator;
            return out;
        }
        case Quantity::limit_report:
            throw ValidationError("limit_report is not a per-point quantity");
        default:
            break;
    }

    const RateRecord r = evaluate_rates(config, omega, location);
    out.flags = r.flags;
    switch (spec.quantity) {
        case Quantity::pair_rate_mrr:
        case Quantity::pair_rate_out:
            out.values = {r.psi2_sq, r.pair_rate};
            break;
        case Quantity::car_mrr:
        case Quantity::car_out:
            out.values = {r.car};
            break;
        case Quantity::herald_mrr:
        case Quantity::herald_out:
            out.values = {r.herald};
            break;
        case Quantity::populations:
            out.values = {r.populations.p0, r.populations.p1a, r.populations.p1b, r.populations.p2};
            break;
        default:
            break;
    }
    return out;
}

Dataset run_limits(const LimitSpec& limits, const std::string& canonical) {
    const LimitReport rep = limit_report(halving_grid(limits.rates, limits.t0, limits.count));
    Dataset d;
    d.config = canonical;
    d.config_hash = fnv1a_hex(canonical);
    d.columns = {"T_a", "scale"};
    for (const std::string& q : rep.quantities) d.columns.push_back("err_" + q);
    double ta = limits.t0;
    for (std::size_t i = 0; i < rep.errors.size(); ++i, ta *= 0.5) {
        std::vector<double> row{ta, rep.scales[i]};
        row.insert(row.end(), rep.errors[i].begin(), rep.errors[i].end());
        d.rows.push_back(std::move(row));
        d.flags.push_back(0);
    }
    for (std::size_t q = 0; q < rep.quantities.size(); ++q) {
        d.summary["order_" + rep.quantities[q]] = rep.orders[q];
        d.summary["monotone_" + rep.quantities[q]] = rep.monotone[q] ? 1.0 : 0.0;
    }
    return d;
}

Dataset run_sweep(const SweepSpec& spec) {
    if (spec.quantity == Quantity::limit_report) {
        if (!spec.limits) throw ValidationError("limit_report needs a limits section");
        return run_limits(*spec.limits, spec.canonical);
    }
    if (spec.axes.empty() || spec.axes.size() > 2) {
        throw ValidationError("a sweep takes one or two axes");
    }

    Dataset d;
    d.config = spec.canonical;
    d.config_hash = fnv1a_hex(spec.canonical);
    for (const Axis& a : spec.axes) d.columns.push_back(a.name);
    for (const std::string& c : value_columns(spec.quantity)) d.columns.push_back(c);

    const std::vector<double> p1 = spec.axes[0].points();
    const std::vector<double> p2 = spec.axes.size() > 1 ? spec.axes[1].points() : std::vector<double>{};
    const std::size_t n2 = spec.axes.size() > 1 ? p2.size() : 1;
    const std::size_t total = p1.size() * n2;
    d.rows.resize(total);
    d.flags.resize(total);

    parallel_for(total, [&](std::size_t idx) {
        std::vector<double> coords{p1[idx / n2]};
        if (spec.axes.size() > 1) coords.push_back(p2[idx % n2]);
        PointResult r = evaluate_point(spec, coords);
        std::vector<double> row = coords;
        row.insert(row.end(), r.values.begin(), r.values.end());
        d.rows[idx] = std::move(row);
        d.flags[idx] = r.flags;
    });
    return d;
}

std::string emit_csv(const Dataset& d) {
    std::string out = "# config-hash: " + d.config_hash + "\n";
    for (const std::string& c : d.columns) out += c + ",";
    out += "flags\n";
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        for (double v : d.rows[i]) out += format_number(v) + ",";
        out += std::to_string(d.flags[i]) + "\n";
    }
    return out;
}

std::string emit_json(const Dataset& d) {
    ojson j;
    j["version"] = d.version;
    j["config_hash"] = d.config_hash;
    j["config"] = d.config;
    j["columns"] = d.columns;
    ojson rows = ojson::array();
    for (const auto& r : d.rows) {
        ojson row = ojson::array();
        for (double v : r) row.push_back(number_to_json(v));
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["flags"] = d.flags;
    ojson summary = ojson::object();
    for (const auto& [k, v] : d.summary) summary[k] = number_to_json(v);
    j["summary"] = std::move(summary);
    return j.dump(1) + "\n";
}

std::string emit(const Dataset& d, Format format) {
    return format == Format::csv ? emit_csv(d) : emit_json(d);
}

Dataset dataset_from_json(const std::string& text) {
    Dataset d;
    try {
        const ojson j = ojson::parse(text);
        d.version = j.at("version").get<std::string>();
        d.config_hash = j.at("config_hash").get<std::string>();
        d.config = j.at("config").get<std::string>();
        d.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& row : j.at("rows")) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(number_from_json(v));
            d.rows.push_back(std::move(r));
        }
        d.flags = j.at("flags").get<std::vector<std::uint32_t>>();
        for (const auto& [k, v] : j.at("summary").items()) d.summary[k] = number_from_json(v);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("dataset JSON: ") + e.what());
    }
    if (d.flags.size() != d.rows.size()) throw ValidationError("dataset JSON: flags/rows size mismatch");
    return d;
}

}  // namespace ringpair
