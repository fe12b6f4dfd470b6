#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ringpair/mat2.hpp"

namespace ringpair {

enum class ModeLabel { signal, idler, pump };

std::string_view to_string(ModeLabel label);

// Round-trip time and loss rates of one ring mode together with the derived
// beam-splitter coefficients.
//
//   rho   = exp(-gamma * T / 2)        self-coupling
//   tau   = sqrt(1 - rho^2)            cross-coupling
//   alpha = exp(-gamma_int * T / 2)    per-round-trip internal transmission
//
// Coupling loss lives only in rho; alpha carries internal propagation loss.
// Immutable once built. The default is a lossless mode decoupled from the
// bus (rho = 1, T = 1); real modes come from the factories.
class ModeParams {
public:
    ModeParams() = default;

    // From rates. gamma = 0 gives rho = 1 (ring decoupled from the bus).
    static ModeParams from_rates(ModeLabel label, double round_trip, double gamma,
                                 double gamma_int);

    // From the dimensionless coefficients rho, alpha. rho = 0 or
    // alpha = 0 maps to an infinite rate.
    static ModeParams from_coefficients(ModeLabel label, double round_trip, double rho,
                                        double alpha);

    ModeLabel label() const { return label_; }
    double round_trip() const { return round_trip_; }
    double gamma() const { return gamma_; }
    double gamma_int() const { return gamma_int_; }
    double rho() const { return rho_; }
    double tau() const { return tau_; }
    double alpha() const { return alpha_; }

    // 1 - alpha^2, evaluated without cancellation when built from rates.
    double one_minus_alpha_sq() const { return one_minus_alpha_sq_; }

    // Round-trip phase theta = omega * T. Never stored.
    double theta(double omega) const { return omega * round_trip_; }

    // xi = alpha * e^{i theta}
    cplx xi(double omega) const;

private:
    ModeLabel label_ = ModeLabel::signal;
    double round_trip_ = 1.0;
    double gamma_ = 0.0;
    double gamma_int_ = 0.0;
    double rho_ = 1.0;
    double tau_ = 0.0;
    double alpha_ = 1.0;
    double one_minus_alpha_sq_ = 0.0;
};

enum class Process { spdc, sfwm };

std::string_view to_string(Process process);

// Classical pump driving the pair generation.
//
// For SPDC the effective pump alpha_p is the field amplitude; for SFWM it is
// the amplitude squared. g is taken frequency independent.
struct PumpConfig {
    Process process = Process::spdc;
    double g = 0.0;
    double amplitude = 0.0;  // |pump field|
    double phase = 0.0;      // pump field phase (radians)

    // alpha_p as it enters the Hamiltonian.
    cplx effective_amplitude() const;

    // arg(alpha_p): the theta_p that multiplies the biphoton amplitude.
    double effective_phase() const;

    // g * alpha_p, the complex pair-generation rate.
    cplx coupling() const { return g * effective_amplitude(); }
};

// Signal (a), idler (b) and pump (c) modes plus pump settings.
struct SystemConfig {
    ModeParams signal;
    ModeParams idler;
    ModeParams pump_mode;
    PumpConfig pump;

    // r_a = g alpha_p T_a, r_b = g alpha_p^* T_b
    cplx r_a() const;
    cplx r_b() const;

    // T_ab = sqrt(T_a T_b); |r_ab| = |g alpha_p| T_ab
    double t_ab() const;
    double r_ab_abs() const;
};

// Builds a config with equal signal and idler modes and a pump such that
// |r_a| = |r_b| = r. Convenient for the rho/alpha sweeps.
SystemConfig symmetric_config(double rho, double alpha, double r, double round_trip = 1.0,
                              double pump_phase = 0.0, Process process = Process::spdc);

// rho = exp(-gamma T / 2)
double derive_coupling(double gamma, double round_trip);

// tau = sqrt(1 - rho^2)
double cross_coupling(double rho);

// Physical inputs for the nonlinear gain, SI units.
struct GainInputs {
    double omega_c = 0.0;        // pump carrier angular frequency
    double susceptibility = 0.0;  // chi2 (SPDC) or chi3 (SFWM)
    double mean_index = 0.0;
    double ring_volume = 0.0;
};

// g_spdc = 3 (hbar w_c)^{3/2} chi2 / (4 eps0 n^4 V)
// g_sfwm = 3 (hbar w_c)^2   chi3 / (4 eps0 n^4 V)
double nonlinear_gain(Process process, const GainInputs& in);

struct PumpParameters {
    cplx r_a;
    cplx r_b;
};

PumpParameters pump_parameters(const SystemConfig& config);

// Default weak-pump threshold on |r_a|, |r_b|.
inline constexpr double kWeakPumpWarn = 1e-2;

// Human-readable warnings: weak-pump validity (|r| above threshold) and
// negative noise commutators (|r_k|^2 > 1 - alpha_k^2). Empty when clean.
std::vector<std::string> config_warnings(const SystemConfig& config,
                                         double weak_pump_warn = kWeakPumpWarn);

}  // namespace ringpair
