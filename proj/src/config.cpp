#include "ringpair/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ringpair/errors.hpp"

namespace ringpair {

namespace {

const std::set<std::string> kModeKeys = {"T", "rho", "alpha", "gamma_T", "gamma_int_T"};
const std::set<std::string> kPumpKeys = {"process", "r", "g", "amplitude", "phase"};
const std::set<std::string> kSweepKeys = {"quantity", "theta", "symmetric", "location"};
const std::set<std::string> kAxisKeys = {"name", "min", "max", "count", "spacing", "values"};
const std::set<std::string> kLimitKeys = {"gamma_a", "gamma_int_a", "gamma_b", "gamma_int_b",
                                          "g",       "phase",       "omega",   "t_ratio",
                                          "T0",      "count"};
const std::set<std::string> kAxisParams = {"rho", "alpha", "theta", "r", "gamma_T", "gamma_int_T"};

struct Entry {
    std::string value;
    int line = 0;
};

using Entries = std::map<std::string, Entry>;

[[noreturn]] void fail_at(int line, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line << ": " << msg;
    throw ValidationError(os.str());
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const Entry& e, const std::string& key) {
    double v = 0.0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    // from_chars rejects a leading '+'; accept it for hand-written configs.
    if (begin != end && *begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
        fail_at(e.line, "'" + key + "' expects a finite number, got '" + e.value + "'");
    }
    return v;
}

int parse_count(const Entry& e, const std::string& key) {
    int v = 0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        fail_at(e.line, "'" + key + "' expects an integer, got '" + e.value + "'");
    }
    return v;
}

bool parse_bool(const Entry& e, const std::string& key) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail_at(e.line, "'" + key + "' expects true or false, got '" + e.value + "'");
}

std::string base_name(const std::string& key) {
    const auto dot = key.rfind('.');
    return dot == std::string::npos ? key : key.substr(dot + 1);
}

// Range check for a numeric parameter; `where` is the key or axis that set it.
void check_range(const std::string& base, double v, int line, const std::string& where) {
    auto bad = [&](const char* range) {
        std::ostringstream os;
        os << "'" << where << "' = " << v << " out of range (" << range << ")";
        fail_at(line, os.str());
    };
    if (base == "rho" || base == "alpha") {
        if (!(v >= 0.0 && v <= 1.0)) bad("expected 0 <= value <= 1");
    } else if (base == "T" || base == "T0") {
        if (!(v > 0.0)) bad("expected > 0");
    } else if (base == "gamma_T" || base == "gamma_int_T" || base == "r" || base == "g" ||
               base == "amplitude" || base == "gamma_a" || base == "gamma_int_a" ||
               base == "gamma_b" || base == "gamma_int_b") {
        if (!(v >= 0.0)) bad("expected >= 0");
    } else if (base == "t_ratio") {
        if (!(v > 0.0)) bad("expected > 0");
    }
}

Quantity parse_quantity(const Entry& e) {
    static const std::pair<const char*, Quantity> table[] = {
        {"pair_rate_mrr", Quantity::pair_rate_mrr}, {"pair_rate_out", Quantity::pair_rate_out},
        {"car_mrr", Quantity::car_mrr},             {"car_out", Quantity::car_out},
        {"herald_mrr", Quantity::herald_mrr},       {"herald_out", Quantity::herald_out},
        {"populations", Quantity::populations},     {"transfer_entry", Quantity::transfer_entry},
        {"commutators", Quantity::commutators},     {"limit_report", Quantity::limit_report},
    };
    for (const auto& [name, q] : table) {
        if (e.value == name) return q;
    }
    fail_at(e.line, "unknown sweep.quantity '" + e.value + "'");
}

Axis parse_axis(const Entries& entries, const std::string& section) {
    Axis axis;
    const auto get = [&](const std::string& k) -> const Entry* {
        const auto it = entries.find(section + "." + k);
        return it == entries.end() ? nullptr : &it->second;
    };
    const Entry* name = get("name");
    if (!name) throw ValidationError("missing required key '" + section + ".name'");
    axis.name = name->value;
    const std::string base = base_name(axis.name);
    const bool prefixed = axis.name.find('.') != std::string::npos;
    if (!kAxisParams.count(base) ||
        (prefixed && axis.name.rfind("signal.", 0) != 0 && axis.name.rfind("idler.", 0) != 0) ||
        (prefixed && (base == "theta" || base == "r"))) {
        fail_at(name->line, "unknown axis parameter '" + axis.name +
                                "' (rho, alpha, gamma_T, gamma_int_T, theta, r)");
    }

    if (const Entry* sp = get("spacing")) {
        if (sp->value == "linear") {
            axis.spacing = Spacing::linear;
        } else if (sp->value == "log") {
            axis.spacing = Spacing::log;
        } else {
            fail_at(sp->line, "'" + section + ".spacing' expects linear or log");
        }
    }

    if (const Entry* vals = get("values")) {
        for (const Entry* other : {get("min"), get("max"), get("count")}) {
            if (other) fail_at(other->line, section + ": give either values or min/max/count");
        }
        std::stringstream ss(vals->value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const Entry e{trim(item), vals->line};
            const double v = parse_number(e, section + ".values");
            check_range(base, v, vals->line, section + ".values");
            axis.values.push_back(v);
        }
        if (axis.values.size() < 2) fail_at(vals->line, section + ".values needs at least 2 entries");
        return axis;
    }

    const Entry* mn = get("min");
    const Entry* mx = get("max");
    const Entry* ct = get("count");
    if (!mn) throw ValidationError("missing required key '" + section + ".min'");
    if (!mx) throw ValidationError("missing required key '" + section + ".max'");
    if (!ct) throw ValidationError("missing required key '" + section + ".count'");
    axis.min = parse_number(*mn, section + ".min");
    axis.max = parse_number(*mx, section + ".max");
    axis.count = parse_count(*ct, section + ".count");
    check_range(base, axis.min, mn->line, section + ".min");
    check_range(base, axis.max, mx->line, section + ".max");
    if (axis.count < 2) fail_at(ct->line, section + ".count must be >= 2");
    if (!(axis.min < axis.max)) fail_at(mx->line, section + ": min must be < max");
    if (axis.spacing == Spacing::log && !(axis.min > 0.0)) {
        fail_at(mn->line, section + ": log spacing needs min > 0");
    }
    return axis;
}

LimitSpec parse_limits(const Entries& entries) {
    LimitSpec ls;
    double g = 0.0;
    double phase = 0.0;
    for (const auto& [key, e] : entries) {
        if (key.rfind("limits.", 0) != 0) continue;
        const std::string k = key.substr(7);
        if (k == "count") {
            ls.count = parse_count(e, key);
            if (ls.count < 3) fail_at(e.line, "limits.count must be >= 3 to fit convergence orders");
            continue;
        }
        const double v = parse_number(e, key);
        check_range(k, v, e.line, key);
        if (k == "gamma_a") ls.rates.gamma_a = v;
        else if (k == "gamma_int_a") ls.rates.gamma_int_a = v;
        else if (k == "gamma_b") ls.rates.gamma_b = v;
        else if (k == "gamma_int_b") ls.rates.gamma_int_b = v;
        else if (k == "g") g = v;
        else if (k == "phase") phase = v;
        else if (k == "omega") ls.rates.omega = v;
        else if (k == "t_ratio") ls.rates.t_ratio = v;
        else if (k == "T0") ls.t0 = v;
    }
    if (!(ls.rates.gamma_a > 0.0) || !(ls.rates.gamma_b > 0.0)) {
        throw ValidationError("limits.gamma_a and limits.gamma_b must be > 0");
    }
    ls.rates.coupling = std::polar(g, phase);
    return ls;
}

double lookup(const std::map<std::string, double>& m, const std::string& k, double fallback) {
    const auto it = m.find(k);
    return it == m.end() ? fallback : it->second;
}

ModeParams build_mode(ModeLabel label, const std::string& prefix,
                      const std::map<std::string, double>& v) {
    const double t = lookup(v, prefix + ".T", 1.0);
    const bool has_rho = v.count(prefix + ".rho") != 0;
    const bool has_alpha = v.count(prefix + ".alpha") != 0;
    if (!has_rho && !has_alpha) {
        return ModeParams::from_rates(label, t, lookup(v, prefix + ".gamma_T", 0.0) / t,
                                      lookup(v, prefix + ".gamma_int_T", 0.0) / t);
    }
    const double rho = has_rho ? v.at(prefix + ".rho")
                               : std::exp(-0.5 * lookup(v, prefix + ".gamma_T", 0.0));
    const double alpha = has_alpha ? v.at(prefix + ".alpha")
                                   : std::exp(-0.5 * lookup(v, prefix + ".gamma_int_T", 0.0));
    return ModeParams::from_coefficients(label, t, rho, alpha);
}

}  // namespace

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::pair_rate_mrr: return "pair_rate_mrr";
        case Quantity::pair_rate_out: return "pair_rate_out";
        case Quantity::car_mrr: return "car_mrr";
        case Quantity::car_out: return "car_out";
        case Quantity::herald_mrr: return "herald_mrr";
        case Quantity::herald_out: return "herald_out";
        case Quantity::populations: return "populations";
        case Quantity::transfer_entry: return "transfer_entry";
        case Quantity::commutators: return "commutators";
        case Quantity::limit_report: return "limit_report";
    }
    return "?";
}

std::vector<double> Axis::points() const {
    if (!values.empty()) return values;
    std::vector<double> out(static_cast<std::size_t>(count));
    const double last = static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / last;
        if (spacing == Spacing::log) {
            out[i] = std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
        } else {
            out[i] = min + f * (max - min);
        }
    }
    // Pin the end points so they are exactly as written.
    out.front() = min;
    out.back() = max;
    return out;
}

std::size_t Axis::size() const {
    return values.empty() ? static_cast<std::size_t>(count) : values.size();
}

std::vector<std::string> axis_targets(const Axis& axis, bool symmetric) {
    const std::string base = base_name(axis.name);
    if (base == "theta") return {"sweep.theta"};
    if (base == "r") return {"pump.r"};
    if (axis.name.find('.') != std::string::npos) return {axis.name};
    if (symmetric) return {"signal." + base};
    return {"signal." + base, "idler." + base};
}

ParsedConfig parse_config(std::string_view text) {
    ParsedConfig out;
    Entries entries;

    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail_at(line_no, "expected 'section.key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (value.empty()) fail_at(line_no, "empty value for '" + key + "'");

        const auto dot = key.find('.');
        if (dot == std::string::npos) fail_at(line_no, "unknown key '" + key + "' (expected section.key)");
        const std::string section = key.substr(0, dot);
        const std::string name = key.substr(dot + 1);
        const std::set<std::string>* allowed = nullptr;
        if (section == "signal" || section == "idler") allowed = &kModeKeys;
        else if (section == "pump") allowed = &kPumpKeys;
        else if (section == "sweep") allowed = &kSweepKeys;
        else if (section == "axis1" || section == "axis2") allowed = &kAxisKeys;
        else if (section == "limits") allowed = &kLimitKeys;
        if (!allowed || !allowed->count(name)) fail_at(line_no, "unknown key '" + key + "'");

        if (const auto it = entries.find(key); it != entries.end()) {
            std::ostringstream os;
            os << "line " << line_no << ": duplicate key '" << key << "' (first set on line "
               << it->second.line << "); the last value wins";
            out.warnings.push_back(os.str());
        }
        entries[key] = {value, line_no};
    }

    SweepSpec& spec = out.spec;
    const auto find = [&](const std::string& k) -> const Entry* {
        const auto it = entries.find(k);
        return it == entries.end() ? nullptr : &it->second;
    };

    const bool has_limits = std::any_of(entries.begin(), entries.end(), [](const auto& kv) {
        return kv.first.rfind("limits.", 0) == 0;
    });
    if (const Entry* q = find("sweep.quantity")) {
        spec.quantity = parse_quantity(*q);
    } else if (has_limits) {
        spec.quantity = Quantity::limit_report;
    } else {
        throw ValidationError("missing required key 'sweep.quantity'");
    }
    if (const Entry* s = find("sweep.symmetric")) spec.symmetric = parse_bool(*s, "sweep.symmetric");
    if (const Entry* l = find("sweep.location")) {
        if (l->value == "output_bus" || l->value == "bus") {
            spec.location = Location::output_bus;
        } else if (l->value == "intracavity" || l->value == "mrr") {
            spec.location = Location::intracavity;
        } else {
            fail_at(l->line, "'sweep.location' expects output_bus or intracavity");
        }
    }
    if (const Entry* p = find("pump.process")) {
        if (p->value == "spdc") {
            spec.process = Process::spdc;
        } else if (p->value == "sfwm") {
            spec.process = Process::sfwm;
        } else {
            fail_at(p->line, "'pump.process' expects spdc or sfwm");
        }
    }

    if (spec.quantity == Quantity::limit_report) {
        for (const auto& [key, e] : entries) {
            if (key.rfind("axis", 0) == 0) fail_at(e.line, "limit_report takes no axes; use the limits section");
        }
        spec.limits = parse_limits(entries);
    } else {
        if (has_limits) spec.limits = parse_limits(entries);
        const bool has_axis2 = std::any_of(entries.begin(), entries.end(), [](const auto& kv) {
            return kv.first.rfind("axis2.", 0) == 0;
        });
        spec.axes.push_back(parse_axis(entries, "axis1"));
        if (has_axis2) spec.axes.push_back(parse_axis(entries, "axis2"));
    }

    // Fixed numeric bindings.
    for (const auto& [key, e] : entries) {
        const std::string section = key.substr(0, key.find('.'));
        const std::string name = base_name(key);
        const bool numeric = ((section == "signal" || section == "idler") && kModeKeys.count(name)) ||
                             (section == "pump" && name != "process") || key == "sweep.theta";
        if (!numeric) continue;
        if (spec.symmetric && section == "idler") {
            fail_at(e.line, "'" + key + "' not allowed with sweep.symmetric = true (idler copies signal)");
        }
        const double v = parse_number(e, key);
        check_range(name, v, e.line, key);
        spec.fixed[key] = v;
    }

    // Swept keys must not also be fixed, and two axes must not share a target.
    std::set<std::string> swept;
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
        const std::string section = "axis" + std::to_string(i + 1);
        const int line = find(section + ".name")->line;
        if (spec.symmetric && spec.axes[i].name.find('.') != std::string::npos) {
            fail_at(line, "mode-prefixed axis '" + spec.axes[i].name + "' not allowed with sweep.symmetric = true");
        }
        for (const std::string& t : axis_targets(spec.axes[i], spec.symmetric)) {
            if (const Entry* e = find(t)) {
                fail_at(e->line, "'" + t + "' is both fixed and swept by " + section);
            }
            if (!swept.insert(t).second) fail_at(line, "'" + t + "' is swept by both axes");
        }
    }

    if (spec.quantity != Quantity::limit_report) {
        const auto bound = [&](const std::string& k) { return spec.fixed.count(k) || swept.count(k); };
        const std::vector<std::string> modes =
            spec.symmetric ? std::vector<std::string>{"signal"} : std::vector<std::string>{"signal", "idler"};
        for (const std::string& m : modes) {
            const std::pair<const char*, const char*> pairs[] = {{"rho", "gamma_T"}, {"alpha", "gamma_int_T"}};
            for (const auto& [coef, rate] : pairs) {
                const std::string kc = m + "." + coef;
                const std::string kr = m + "." + rate;
                if (bound(kc) && bound(kr)) {
                    throw ValidationError("'" + kc + "' and '" + kr + "' both set; give one of them");
                }
                if (!bound(kc) && !bound(kr)) {
                    throw ValidationError("missing required key '" + kc + "' (or '" + kr + "')");
                }
            }
        }
        if (bound("pump.r") && bound("pump.g")) {
            throw ValidationError("'pump.r' and 'pump.g' both set; give one of them");
        }
        if (!bound("pump.r") && !bound("pump.g")) {
            throw ValidationError("missing required key 'pump.r' (or 'pump.g')");
        }
        if (bound("pump.r") && bound("pump.amplitude")) {
            throw ValidationError("'pump.amplitude' is implied by 'pump.r'; drop one of them");
        }
    }

    std::ostringstream canon;
    for (const auto& [key, e] : entries) canon << key << " = " << e.value << "\n";
    spec.canonical = canon.str();

    // Fail early on combinations that only the physical builder can reject.
    if (spec.quantity != Quantity::limit_report) {
        for (const Axis& a : spec.axes) {
            for (double v : {a.points().front(), a.points().back()}) {
                std::map<std::string, double> o;
                for (const std::string& t : axis_targets(a, spec.symmetric)) o[t] = v;
                build_system(spec, o);
            }
        }
    }
    return out;
}

ParsedConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

// Fixed values, then overrides. Swept keys missing from the overrides take the
// axis' first point, so a config is always buildable.
std::map<std::string, double> bindings(const SweepSpec& spec,
                                       const std::map<std::string, double>& overrides) {
    std::map<std::string, double> v = spec.fixed;
    for (const auto& [k, x] : overrides) v[k] = x;
    for (const Axis& a : spec.axes) {
        for (const std::string& t : axis_targets(a, spec.symmetric)) {
            if (!v.count(t)) v[t] = a.points().front();
        }
    }
    return v;
}

}  // namespace

SystemConfig build_system(const SweepSpec& spec, const std::map<std::string, double>& overrides) {
    const std::map<std::string, double> v = bindings(spec, overrides);
    SystemConfig c;
    c.signal = build_mode(ModeLabel::signal, "signal", v);
    c.idler = spec.symmetric ? build_mode(ModeLabel::idler, "signal", v)
                             : build_mode(ModeLabel::idler, "idler", v);
    c.pump_mode = ModeParams::from_coefficients(ModeLabel::pump, c.signal.round_trip(),
                                                c.signal.rho(), 1.0);
    c.pump.process = spec.process;
    c.pump.phase = lookup(v, "pump.phase", 0.0);
    if (v.count("pump.r")) {
        c.pump.g = v.at("pump.r") / c.t_ab();
        c.pump.amplitude = 1.0;
    } else {
        c.pump.g = lookup(v, "pump.g", 0.0);
        c.pump.amplitude = lookup(v, "pump.amplitude", 1.0);
    }
    return c;
}

double point_omega(const SweepSpec& spec, const std::map<std::string, double>& overrides) {
    const SystemConfig c = build_system(spec, overrides);
    return lookup(bindings(spec, overrides), "sweep.theta", 0.0) / c.signal.round_trip();
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ringpair
