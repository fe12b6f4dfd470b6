#include "ringpair/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringpair/errors.hpp"

namespace ringpair {

namespace {

bool same_value(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace

BiphotonState biphoton_state(const TransferPair& pair, const CommutatorSet& comms,
                             double pump_phase) {
    const Mat2& G = pair.G;
    const Mat2& H = pair.H;
    const cplx e = std::polar(1.0, pump_phase);
    const cplx ec = std::conj(e);
    using std::conj;

    BiphotonState s;
    s.location = pair.location;
    s.psi2 = e * conj(G.aa()) * G.bb() + ec * G.ab() * conj(G.ba());
    s.c_vac = e * (conj(G.ab()) * G.bb() + conj(H.ab()) * H.bb() * comms.c_bb) +
              ec * (G.aa() * conj(G.ba()) + H.aa() * conj(H.ba()) * comms.c_aa);
    s.phi_a1 = e * conj(G.aa()) * H.bb() + ec * conj(G.ba()) * H.ab();
    s.phi_b1 = e * G.bb() * conj(H.aa()) + ec * G.ab() * conj(H.ba());
    // Environment two-photon trace with C_ab = 0 leaves C_aa C_bb.
    const cplx both_lost = e * conj(H.aa()) * H.bb() + ec * H.ab() * conj(H.ba());
    s.r0 = comms.c_aa * comms.c_bb * std::norm(both_lost);
    return s;
}

BiphotonState biphoton_state(const SystemConfig& config, double omega, Location location) {
    return biphoton_state(transfer(config, omega, location), commutators_closed_form(config),
                          config.pump.effective_phase());
}

cplx psi2_intracavity_closed_form(const SystemConfig& config, double omega) {
    const ModeParams& a = config.signal;
    const ModeParams& b = config.idler;
    const double rr = std::abs(config.r_a()) * std::abs(config.r_b());
    const cplx ea = std::polar(1.0, a.theta(omega));
    const cplx eb = std::polar(1.0, b.theta(omega));
    const double xa = a.alpha() * a.rho();
    const double xb = b.alpha() * b.rho();
    const double theta_p = config.pump.effective_phase();

    const cplx num = a.alpha() * b.alpha() * a.tau() * b.tau() *
                     std::polar(1.0, b.theta(omega) + theta_p) *
                     (eb * rr - (1.0 - ea * xa) * (eb - xb));
    const cplx den = (ea * eb * rr - (ea - xa) * (eb - xb)) *
                     ((1.0 - ea * xa) * (1.0 - eb * xb) - rr);
    if (!(std::abs(den) > 0.0)) throw PoleError("closed-form psi2: vanishing denominator");
    return num / den;
}

double pair_rate(const SystemConfig& config, const BiphotonState& state) {
    const double r = config.r_ab_abs();
    return r * r * std::norm(state.psi2);
}

SinglesRates singles_rates(const SystemConfig& config, const BiphotonState& state,
                           const CommutatorSet& comms) {
    const double r2 = std::pow(config.r_ab_abs(), 2);
    return {r2 * std::norm(state.phi_a1) * comms.c_bb, r2 * comms.c_aa * std::norm(state.phi_b1)};
}

double car(const BiphotonState& state, const CommutatorSet& comms) {
    const double num = std::norm(state.psi2);
    const double den = std::norm(state.phi_a1) * comms.c_bb + comms.c_aa * std::norm(state.phi_b1);
    if (den <= kCarSentinelThreshold * num) return std::numeric_limits<double>::infinity();
    return num / den;
}

double herald(const BiphotonState& state, const CommutatorSet& comms) {
    const double num = std::norm(state.psi2);
    const double den = std::norm(state.phi_a1) * comms.c_bb + num;
    if (den == 0.0) return 0.0;
    return num / den;
}

Populations populations(const SystemConfig& config, const BiphotonState& state,
                        const CommutatorSet& comms) {
    const double r2 = std::pow(config.r_ab_abs(), 2);
    const double w2 = r2 * std::norm(state.psi2);
    const double w1a = r2 * std::norm(state.phi_a1) * comms.c_bb;
    const double w1b = r2 * comms.c_aa * std::norm(state.phi_b1);
    const double w0 = 1.0 + r2 * (std::norm(state.c_vac) + state.r0);
    const double total = w0 + w1a + w1b + w2;
    return {w0 / total, w1a / total, w1b / total, w2 / total};
}

double closed_form_car_symmetric(const SystemConfig& config) {
    const ModeParams& a = config.signal;
    const ModeParams& b = config.idler;
    if (!same_value(a.round_trip(), b.round_trip()) || !same_value(a.rho(), b.rho()) ||
        !same_value(a.alpha(), b.alpha())) {
        throw ValidationError(
            "closed-form CAR needs equal signal/idler T, rho, alpha; use the matrix pipeline");
    }
    const double alpha2 = a.alpha() * a.alpha();
    const double den = 2.0 * (a.one_minus_alpha_sq() - std::norm(config.r_a()));
    const double num = alpha2 * a.tau() * a.tau();
    if (den <= kCarSentinelThreshold * num) return std::numeric_limits<double>::infinity();
    return num / den;
}

ClosedFormRates closed_form_rates(const SystemConfig& config) {
    ClosedFormRates out;
    try {
        out.car = closed_form_car_symmetric(config);
    } catch (const ValidationError&) {
        out.car.reset();
    }
    const ModeParams& b = config.idler;
    const double ab2 = b.alpha() * b.alpha();
    const double num = ab2 * b.tau() * b.tau();
    // 1 - |r_b|^2 - alpha_b^2 rho_b^2 = (1 - alpha_b^2) + alpha_b^2 tau_b^2 - |r_b|^2
    const double den = b.one_minus_alpha_sq() + num - std::norm(config.r_b());
    out.herald = den == 0.0 ? 0.0 : num / den;
    return out;
}

RateRecord evaluate_rates(const SystemConfig& config, double omega, Location location) {
    RateRecord rec;
    rec.omega = omega;
    const CommutatorSet comms = commutators_closed_form(config);
    if (comms.c_aa < 0.0 || comms.c_bb < 0.0) rec.flags |= kRateNegativeCommutator;

    TransferPair pair;
    try {
        pair = transfer(config, omega, location);
    } catch (const Error&) {
        // D = 0, or tau = 0 inside the ring: the point is undefined.
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.psi2_sq = rec.pair_rate = rec.singles_a = rec.singles_b = nan;
        rec.car = rec.herald = nan;
        rec.populations = {nan, nan, nan, nan};
        rec.flags |= kRatePole;
        return rec;
    }
    const BiphotonState state = biphoton_state(pair, comms, config.pump.effective_phase());
    rec.psi2_sq = std::norm(state.psi2);
    rec.pair_rate = pair_rate(config, state);
    const SinglesRates s = singles_rates(config, state, comms);
    rec.singles_a = s.a;
    rec.singles_b = s.b;
    rec.car = car(state, comms);
    if (std::isinf(rec.car)) rec.flags |= kRateCarSentinel;
    rec.herald = herald(state, comms);
    rec.populations = populations(config, state, comms);
    return rec;
}

}  // namespace ringpair
