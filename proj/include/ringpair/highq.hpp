#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ringpair/resonator.hpp"
#include "ringpair/transfer.hpp"

namespace ringpair {

// Decay rates of one mode in the Langevin picture.
struct LangevinParams {
    double gamma = 0.0;      // bus coupling rate
    double gamma_int = 0.0;  // internal loss rate
    double total = 0.0;      // Gamma = gamma + gamma_int
    double difference = 0.0; // Delta = gamma - gamma_int
};

LangevinParams langevin_params(const ModeParams& mode);
LangevinParams langevin_params(double gamma, double gamma_int);

// s = -i omega
inline cplx laplace_variable(double omega) { return {0.0, -omega}; }

struct SingleModeLimit {
    cplx G;         // (i w + Delta/2) / (-i w + Gamma/2)
    double h_sq;    // gamma gamma' / (w^2 + (Gamma/2)^2), equal to 1 - |G|^2
    double h_abs;   // sqrt(h_sq)
};

SingleModeLimit highq_single_mode(double gamma, double gamma_int, double omega);

enum class HighQOrder { full_highQ, first_order };

// High-Q G and rescaled noise matrix H~ = H Lambda_alpha (in TransferPair::H).
// D holds D~(s) T_a T_b with D~ = (s + Gamma_a/2)(s + Gamma_b/2) - |g alpha_p|^2
// (full) or without the coupling term (first order). Never throws on regime
// violations; check highq_regime for that.
TransferPair highq_matrices(const SystemConfig& config, double omega, HighQOrder order);

enum class Regime { clean, marginal, violated };

std::string_view to_string(Regime regime);

inline constexpr double kHighQClean = 1e-2;
inline constexpr double kHighQWarn = 1e-1;

struct RegimeReport {
    double parameter = 0.0;  // max over modes of gamma T, gamma' T, |omega| T, |r|
    Regime regime = Regime::clean;
    std::vector<std::string> warnings;
};

RegimeReport highq_regime(const SystemConfig& config, double omega);

// Roots of the quadratic approximation of D(s). Stored with positive real
// part (decay rates); D(s) itself vanishes near s = -s_plus, -s_minus.
struct PoleSet {
    double s_plus = 0.0;
    double s_minus = 0.0;
    double pi_plus = 0.0;   // high-Q roots from Gamma_k
    double pi_minus = 0.0;
    double residual_plus = 0.0;   // |D(-s_plus)|
    double residual_minus = 0.0;  // |D(-s_minus)|
    double d_at_zero = 0.0;       // |D(0)|
};

// Roots u_plus, u_minus of (u - u_a)(u - u_b) = k2, i.e.
// (u_a + u_b)/2 +- sqrt(((u_a - u_b)/2)^2 + k2).
std::pair<double, double> quadratic_roots(double u_a, double u_b, double k2);

// D(s) = (1 - rho_a alpha_a e^{-s T_a})(1 - rho_b alpha_b e^{-s T_b}) - |g alpha_p|^2 T_a T_b
cplx transcendental_d(const SystemConfig& config, cplx s);

PoleSet poles(const SystemConfig& config);

enum class ChainStage { pole_form, highQ_form, lorentzian_product };

std::string_view to_string(ChainStage stage);

// Pair rate from the quadratic-pole form, its high-Q reduction, and the
// Lorentzian product |g alpha_p|^2 gamma_a/(w^2+(Gamma_a/2)^2) gamma_b/(w^2+(Gamma_b/2)^2).
double rate_highq_chain(const SystemConfig& config, double omega, ChainStage stage);

// High-Q rate limits.
double highq_car_intracavity(const SystemConfig& config);
double highq_herald_intracavity(const SystemConfig& config);
double highq_car_output(const SystemConfig& config, double omega);
double highq_herald_output(const SystemConfig& config, double omega);

// |sqrt(gamma T) G^(L)_aa - 1 - G_aa| for a single decoupled mode: the exact
// counterpart of a_out = sqrt(gamma) a - a_in. Vanishes as O(gamma T).
double langevin_boundary_residual(const ModeParams& mode, double omega);

// Fixed rates from which a T-halving grid is built.
struct RateSet {
    double gamma_a = 1.0;
    double gamma_int_a = 0.0;
    double gamma_b = 1.0;
    double gamma_int_b = 0.0;
    cplx coupling{};        // g alpha_p
    double omega = 0.0;
    double t_ratio = 1.0;   // T_b / T_a
};

struct LimitPoint {
    SystemConfig config;
    double omega = 0.0;
    double scale = 0.0;  // small parameter used for the order fit
};

// T_a = T0, T0/2, ... (count points); scale is the regime parameter.
std::vector<LimitPoint> halving_grid(const RateSet& rates, double t0, int count);

struct LimitReport {
    std::vector<std::string> quantities;
    std::vector<double> scales;
    std::vector<std::vector<double>> errors;  // errors[point][quantity]
    std::vector<double> orders;   // least-squares log-log slope; NaN if not fittable
    std::vector<bool> monotone;   // error non-increasing along the grid
};

// Relative error of each exact quantity against its limit form at every grid
// point: G and H~ entries against the first-order matrices, C_kk, CAR and
// herald (ring and bus), R_ab against the Lorentzian product, and the
// whole-matrix maxima "G", "Ht", "C_kk". Throws ValidationError for fewer
// than 3 points.
LimitReport limit_report(const std::vector<LimitPoint>& grid);

// Least-squares slope of log(error) against log(scale), over points with a
// positive error. NaN when fewer than 2 such points remain.
double fit_order(const std::vector<double>& scales, const std::vector<double>& errors);

}  // namespace ringpair
