#include "ringpair/resonator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ringpair/errors.hpp"

namespace ringpair {

namespace {

constexpr double kHbar = 1.054571817e-34;
constexpr double kEpsilon0 = 8.8541878128e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_round_trip(double round_trip) {
    if (!(round_trip > 0.0) || !std::isfinite(round_trip)) {
        throw ValidationError("round-trip time must be positive and finite");
    }
}

void require_unit_interval(const char* what, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << what << " = " << v << " outside [0, 1]";
        throw ValidationError(os.str());
    }
}

// -2 ln(x) / T, +inf for x = 0
double rate_from_coefficient(double x, double round_trip) {
    return x == 0.0 ? kInf : -2.0 * std::log(x) / round_trip;
}

}  // namespace

std::string_view to_string(ModeLabel label) {
    switch (label) {
        case ModeLabel::signal: return "signal";
        case ModeLabel::idler: return "idler";
        case ModeLabel::pump: return "pump";
    }
    return "?";
}

std::string_view to_string(Process process) {
    return process == Process::spdc ? "spdc" : "sfwm";
}

double derive_coupling(double gamma, double round_trip) {
    if (!(gamma >= 0.0)) throw ValidationError("coupling rate gamma must be >= 0");
    require_round_trip(round_trip);
    return std::exp(-0.5 * gamma * round_trip);
}

double cross_coupling(double rho) {
    require_unit_interval("rho", rho);
    return std::sqrt((1.0 - rho) * (1.0 + rho));
}

ModeParams ModeParams::from_rates(ModeLabel label, double round_trip, double gamma,
                                  double gamma_int) {
    require_round_trip(round_trip);
    if (!(gamma >= 0.0)) throw ValidationError("coupling rate gamma must be >= 0");
    if (!(gamma_int >= 0.0)) throw ValidationError("internal loss rate gamma_int must be >= 0");
    ModeParams m;
    m.label_ = label;
    m.round_trip_ = round_trip;
    m.gamma_ = gamma;
    m.gamma_int_ = gamma_int;
    m.rho_ = std::exp(-0.5 * gamma * round_trip);
    m.tau_ = std::sqrt(-std::expm1(-gamma * round_trip));
    m.alpha_ = std::exp(-0.5 * gamma_int * round_trip);
    m.one_minus_alpha_sq_ = -std::expm1(-gamma_int * round_trip);
    return m;
}

ModeParams ModeParams::from_coefficients(ModeLabel label, double round_trip, double rho,
                                         double alpha) {
    require_round_trip(round_trip);
    require_unit_interval("rho", rho);
    require_unit_interval("alpha", alpha);
    ModeParams m;
    m.label_ = label;
    m.round_trip_ = round_trip;
    m.rho_ = rho;
    m.alpha_ = alpha;
    // Only +, *, sqrt here so sweep datasets are bit-reproducible.
    m.tau_ = std::sqrt((1.0 - rho) * (1.0 + rho));
    m.one_minus_alpha_sq_ = (1.0 - alpha) * (1.0 + alpha);
    m.gamma_ = rate_from_coefficient(rho, round_trip);
    m.gamma_int_ = rate_from_coefficient(alpha, round_trip);
    return m;
}

cplx ModeParams::xi(double omega) const { return std::polar(alpha_, theta(omega)); }

cplx PumpConfig::effective_amplitude() const {
    const cplx field = std::polar(amplitude, phase);
    return process == Process::spdc ? field : field * field;
}

double PumpConfig::effective_phase() const {
    return process == Process::spdc ? phase : 2.0 * phase;
}

cplx SystemConfig::r_a() const { return pump.coupling() * signal.round_trip(); }

cplx SystemConfig::r_b() const { return std::conj(pump.coupling()) * idler.round_trip(); }

double SystemConfig::t_ab() const { return std::sqrt(signal.round_trip() * idler.round_trip()); }

double SystemConfig::r_ab_abs() const { return std::abs(pump.coupling()) * t_ab(); }

SystemConfig symmetric_config(double rho, double alpha, double r, double round_trip,
                              double pump_phase, Process process) {
    if (!(r >= 0.0)) throw ValidationError("pump parameter r must be >= 0");
    SystemConfig c;
    c.signal = ModeParams::from_coefficients(ModeLabel::signal, round_trip, rho, alpha);
    c.idler = ModeParams::from_coefficients(ModeLabel::idler, round_trip, rho, alpha);
    c.pump_mode = ModeParams::from_coefficients(ModeLabel::pump, round_trip, rho, 1.0);
    c.pump.process = process;
    c.pump.g = r / round_trip;
    c.pump.amplitude = 1.0;
    c.pump.phase = process == Process::spdc ? pump_phase : 0.5 * pump_phase;
    return c;
}

double nonlinear_gain(Process process, const GainInputs& in) {
    if (!(in.omega_c > 0.0)) throw ValidationError("pump carrier frequency must be positive");
    if (!(in.susceptibility >= 0.0)) throw ValidationError("susceptibility must be >= 0");
    if (!(in.mean_index > 0.0)) throw ValidationError("mean refractive index must be positive");
    if (!(in.ring_volume > 0.0)) throw ValidationError("ring mode volume must be positive");
    const double photon_energy = kHbar * in.omega_c;
    const double energy_factor = process == Process::spdc ? std::pow(photon_energy, 1.5)
                                                          : photon_energy * photon_energy;
    const double n2 = in.mean_index * in.mean_index;
    return 3.0 * energy_factor * in.susceptibility / (4.0 * kEpsilon0 * n2 * n2 * in.ring_volume);
}

PumpParameters pump_parameters(const SystemConfig& config) {
    return {config.r_a(), config.r_b()};
}

std::vector<std::string> config_warnings(const SystemConfig& config, double weak_pump_warn) {
    std::vector<std::string> out;
    const double ra = std::abs(config.r_a());
    const double rb = std::abs(config.r_b());
    if (ra > weak_pump_warn || rb > weak_pump_warn) {
        std::ostringstream os;
        os << "weak-pump validity: |r_a| = " << ra << ", |r_b| = " << rb << " exceed "
           << weak_pump_warn;
        out.push_back(os.str());
    }
    if (ra * ra > config.signal.one_minus_alpha_sq() ||
        rb * rb > config.idler.one_minus_alpha_sq()) {
        out.push_back("weak-pump validity violated: noise commutator C_kk = 1 - alpha^2 - |r|^2 < 0");
    }
    return out;
}

}  // namespace ringpair
