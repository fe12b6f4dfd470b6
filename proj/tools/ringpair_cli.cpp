// Command-line front end: rates, sweep, verify, limits, info.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ringpair/biphoton.hpp"
#include "ringpair/commutators.hpp"
#include "ringpair/config.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/highq.hpp"
#include "ringpair/sweep.hpp"
#include "ringpair/verify.hpp"

namespace {

using namespace ringpair;

constexpr int kExitValidation = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitNumerical = 3;

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

void print_value(const char* name, double v) { std::printf("%-22s %.17g\n", name, v); }

void print_value(const char* name, cplx v) {
    std::printf("%-22s %.17g %+.17gi\n", name, v.real(), v.imag());
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << bytes;
    if (!out) throw ValidationError("write to '" + path + "' failed");
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ValidationError("--format expects csv or json");
}

std::string flag_names(std::uint32_t flags) {
    if (flags == kRateOk) return "ok";
    std::string out;
    if (flags & kRatePole) out += "pole ";
    if (flags & kRateCarSentinel) out += "car_sentinel ";
    if (flags & kRateNegativeCommutator) out += "negative_commutator ";
    out.pop_back();
    return out;
}

int cmd_rates(const std::string& path, std::optional<double> omega_opt) {
    const ParsedConfig parsed = load_config(path);
    print_warnings(parsed.warnings);
    const SystemConfig c = build_system(parsed.spec);
    print_warnings(config_warnings(c));
    const double omega = omega_opt ? *omega_opt : point_omega(parsed.spec);
    print_value("omega", omega);
    for (Location loc : {Location::intracavity, Location::output_bus}) {
        const RateRecord r = evaluate_rates(c, omega, loc);
        std::printf("[%s]\n", loc == Location::intracavity ? "intracavity" : "output_bus");
        print_value("rate_tilde", r.psi2_sq);
        print_value("pair_rate", r.pair_rate);
        print_value("singles_a", r.singles_a);
        print_value("singles_b", r.singles_b);
        print_value("car", r.car);
        print_value("herald", r.herald);
        print_value("p0", r.populations.p0);
        print_value("p1a", r.populations.p1a);
        print_value("p1b", r.populations.p1b);
        print_value("p2", r.populations.p2);
        std::printf("%-22s %s\n", "flags", flag_names(r.flags).c_str());
    }
    return 0;
}

int cmd_sweep(const std::string& path, const std::string& out, const std::string& format) {
    const Format f = parse_format(format);
    const ParsedConfig parsed = load_config(path);
    print_warnings(parsed.warnings);
    const Dataset d = run_sweep(parsed.spec);
    write_file(out, emit(d, f));
    std::size_t flagged = 0;
    for (std::uint32_t fl : d.flags) flagged += (fl & kRatePole) ? 1 : 0;
    std::fprintf(stderr, "%zu rows written to %s (%zu pole rows)\n", d.rows.size(), out.c_str(), flagged);
    return 0;
}

int cmd_limits(const std::string& path, const std::string& out, const std::string& format) {
    const Format f = parse_format(format);
    const ParsedConfig parsed = load_config(path);
    print_warnings(parsed.warnings);
    if (!parsed.spec.limits) throw ValidationError("config has no limits section");
    const Dataset d = run_limits(*parsed.spec.limits, parsed.spec.canonical);
    write_file(out, emit(d, f));
    for (const auto& [k, v] : d.summary) {
        if (k.rfind("order_", 0) == 0) std::printf("%-22s %.4f\n", k.c_str(), v);
    }
    return 0;
}

int cmd_verify(bool full, std::uint64_t seed) {
    VerifyOptions opt;
    opt.level = full ? VerifyLevel::full : VerifyLevel::fast;
    opt.seed = seed;
    const VerifyReport rep = verify(opt);
    std::fputs(format_report(rep).c_str(), stdout);
    return rep.passed() ? 0 : kExitInvariant;
}

void print_mode(const char* label, const ModeParams& m) {
    std::printf("[%s]\n", label);
    print_value("T", m.round_trip());
    print_value("rho", m.rho());
    print_value("tau", m.tau());
    print_value("alpha", m.alpha());
    print_value("gamma", m.gamma());
    print_value("gamma_int", m.gamma_int());
}

int cmd_info(const std::string& path) {
    const ParsedConfig parsed = load_config(path);
    print_warnings(parsed.warnings);
    const SweepSpec& spec = parsed.spec;
    std::printf("%-22s %s\n", "version", kArtifactVersion);
    std::printf("%-22s %s\n", "config_hash", fnv1a_hex(spec.canonical).c_str());
    std::printf("%-22s %s\n", "quantity", std::string(to_string(spec.quantity)).c_str());
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
        const Axis& a = spec.axes[i];
        const auto pts = a.points();
        std::printf("axis%zu                  %s: %zu points in [%.17g, %.17g]\n", i + 1, a.name.c_str(),
                    pts.size(), pts.front(), pts.back());
    }
    if (spec.quantity == Quantity::limit_report) return 0;

    const SystemConfig c = build_system(spec);
    print_warnings(config_warnings(c));
    print_mode("signal", c.signal);
    print_mode("idler", c.idler);
    std::printf("[pump]\n");
    std::printf("%-22s %s\n", "process", std::string(to_string(c.pump.process)).c_str());
    print_value("g_alpha_p", c.pump.coupling());
    print_value("r_a", c.r_a());
    print_value("r_b", c.r_b());
    print_value("|r_ab|", c.r_ab_abs());
    const CommutatorSet cs = commutators_closed_form(c);
    std::printf("[commutators]\n");
    print_value("C_aa", cs.c_aa);
    print_value("C_bb", cs.c_bb);
    print_value("D_ab", cs.d_ab);
    const ClosedFormRates cf = closed_form_rates(c);
    std::printf("[closed_form]\n");
    if (cf.car) print_value("car_mrr", *cf.car);
    print_value("herald_mrr", cf.herald);
    const PoleSet p = poles(c);
    std::printf("[poles]\n");
    print_value("s_plus", p.s_plus);
    print_value("s_minus", p.s_minus);
    print_value("pi_plus", p.pi_plus);
    print_value("pi_minus", p.pi_minus);
    print_value("residual_rel", std::max(p.residual_plus, p.residual_minus) / p.d_at_zero);
    const RegimeReport reg = highq_regime(c, point_omega(spec));
    std::printf("%-22s %s (%.3g)\n", "high_q_regime", std::string(to_string(reg.regime)).c_str(),
                reg.parameter);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Microring signal-idler pair generation: rates, sweeps and checks"};
    app.require_subcommand(1);

    std::string config, out, format = "csv";
    std::optional<double> omega;
    bool full = false;
    std::uint64_t seed = VerifyOptions{}.seed;

    auto* rates = app.add_subcommand("rates", "Rates at one detuning");
    rates->add_option("--config", config, "Config file")->required();
    rates->add_option("--omega", omega, "Detuning (default: sweep.theta / T_signal)");

    auto* sweep = app.add_subcommand("sweep", "Run the configured sweep and write a dataset");
    sweep->add_option("--config", config, "Config file")->required();
    sweep->add_option("--out", out, "Output file")->required();
    sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* ver = app.add_subcommand("verify", "Run the invariant suite");
    ver->add_flag("--full", full, "1000 configs plus convergence studies");
    ver->add_option("--seed", seed, "Random seed");

    auto* limits = app.add_subcommand("limits", "High-Q convergence table");
    limits->add_option("--config", config, "Config file with a limits section")->required();
    limits->add_option("--out", out, "Output file")->required();
    limits->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* info = app.add_subcommand("info", "Echo derived parameters");
    info->add_option("--config", config, "Config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*rates) return cmd_rates(config, omega);
        if (*sweep) return cmd_sweep(config, out, format);
        if (*ver) return cmd_verify(full, seed);
        if (*limits) return cmd_limits(config, out, format);
        if (*info) return cmd_info(config);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const UnitarityError& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
