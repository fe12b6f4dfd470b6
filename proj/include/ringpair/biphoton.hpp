#pragma once

#include <cstdint>
#include <optional>

#include "ringpair/commutators.hpp"
#include "ringpair/resonator.hpp"
#include "ringpair/transfer.hpp"

namespace ringpair {

// First-order (in |r_ab|) signal-idler state at one detuning, either on the
// output bus or inside the ring at z = L-.
struct BiphotonState {
    cplx psi2;    // two-photon amplitude
    cplx c_vac;   // first-order vacuum correction
    cplx phi_a1;  // signal survives, idler lost into the ring
    cplx phi_b1;  // idler survives, signal lost
    double r0 = 0.0;  // both photons lost
    Location location = Location::output_bus;
};

// pump_phase is arg(alpha_p); it must match the phase carried by r_a, r_b
// (see PumpConfig::effective_phase) for the amplitudes to be consistent.
BiphotonState biphoton_state(const TransferPair& pair, const CommutatorSet& comms,
                             double pump_phase);

// Convenience: transfer + closed-form commutators + state for one config.
BiphotonState biphoton_state(const SystemConfig& config, double omega, Location location);

// Closed-form intracavity two-photon amplitude, evaluated without the G^(L)
// matrices. Used as the second route for psi2 inside the ring.
cplx psi2_intracavity_closed_form(const SystemConfig& config, double omega);

// R_ab = |r_ab|^2 |psi2|^2, with |r_ab| = |g alpha_p| sqrt(T_a T_b).
double pair_rate(const SystemConfig& config, const BiphotonState& state);

struct SinglesRates {
    double a = 0.0;  // |r_ab|^2 |phi_a1|^2 C_bb
    double b = 0.0;  // |r_ab|^2 C_aa |phi_b1|^2
};

SinglesRates singles_rates(const SystemConfig& config, const BiphotonState& state,
                           const CommutatorSet& comms);

// Relative threshold below which the CAR denominator counts as zero and the
// +infinity sentinel is returned.
inline constexpr double kCarSentinelThreshold = 1e-14;

// |psi2|^2 / (|phi_a1|^2 C_bb + C_aa |phi_b1|^2). Returns +infinity when the
// denominator is <= kCarSentinelThreshold * |psi2|^2 (lossless ring, or a
// weak-pump violation with negative commutators).
double car(const BiphotonState& state, const CommutatorSet& comms);

// |psi2|^2 / (|phi_a1|^2 C_bb + |psi2|^2): heralding of the idler by the signal.
double herald(const BiphotonState& state, const CommutatorSet& comms);

struct Populations {
    double p0 = 1.0;
    double p1a = 0.0;
    double p1b = 0.0;
    double p2 = 0.0;
};

// Normalised weights of the vacuum, one-photon and two-photon sectors of the
// reduced signal-idler density matrix. The vacuum weight is truncated at
// O(|r_ab|^2): w0 = 1 + |r_ab|^2 (|C_vac|^2 + R_0).
Populations populations(const SystemConfig& config, const BiphotonState& state,
                        const CommutatorSet& comms);

struct ClosedFormRates {
    std::optional<double> car;  // only for equal signal/idler modes
    double herald = 0.0;
};

// Intracavity closed forms:
//   CAR    = alpha^2 (1 - rho^2) / (2 (1 - |r|^2 - alpha^2))         (symmetric)
//   herald = alpha_b^2 (1 - rho_b^2) / (1 - |r_b|^2 - alpha_b^2 rho_b^2)
// Both are omega independent.
ClosedFormRates closed_form_rates(const SystemConfig& config);

// Throws ValidationError unless T, rho, alpha agree between signal and idler.
double closed_form_car_symmetric(const SystemConfig& config);

// Status bits on a RateRecord.
enum RateFlag : std::uint32_t {
    kRateOk = 0,
    kRatePole = 1u << 0,             // transfer undefined: D = 0, or tau = 0 inside the ring
    kRateCarSentinel = 1u << 1,      // CAR reported as +infinity
    kRateNegativeCommutator = 1u << 2,  // C_kk < 0: weak-pump validity violated
};

struct RateRecord {
    double omega = 0.0;
    double psi2_sq = 0.0;  // |psi2|^2, the rate per |r_ab|^2
    double pair_rate = 0.0;
    double singles_a = 0.0;
    double singles_b = 0.0;
    double car = 0.0;
    double herald = 0.0;
    Populations populations;
    std::uint32_t flags = kRateOk;
};

// Full pipeline at one detuning. Undefined points come back flagged with NaN
// values, not thrown.
RateRecord evaluate_rates(const SystemConfig& config, double omega, Location location);

}  // namespace ringpair
