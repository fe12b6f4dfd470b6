#include "ringpair/highq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "ringpair/biphoton.hpp"
#include "ringpair/commutators.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/parallel.hpp"

namespace ringpair {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double relative_error(double x, double ref) {
    if (x == ref) return 0.0;  // covers matching infinities
    if (std::isinf(x) || std::isinf(ref)) return std::numeric_limits<double>::infinity();
    const double scale = ref != 0.0 ? std::abs(ref) : std::abs(x);
    return std::abs(x - ref) / scale;
}

double relative_error(cplx x, cplx ref) {
    if (x == ref) return 0.0;
    const double scale = std::abs(ref) != 0.0 ? std::abs(ref) : std::abs(x);
    return std::abs(x - ref) / scale;
}

double lorentzian_sq(double omega, double half_width) {
    return omega * omega + half_width * half_width;
}

}  // namespace

LangevinParams langevin_params(double gamma, double gamma_int) {
    return {gamma, gamma_int, gamma + gamma_int, gamma - gamma_int};
}

LangevinParams langevin_params(const ModeParams& mode) {
    return langevin_params(mode.gamma(), mode.gamma_int());
}

SingleModeLimit highq_single_mode(double gamma, double gamma_int, double omega) {
    const LangevinParams p = langevin_params(gamma, gamma_int);
    const cplx s = laplace_variable(omega);
    SingleModeLimit out;
    out.G = (-s + 0.5 * p.difference) / (s + 0.5 * p.total);
    out.h_sq = gamma * gamma_int / lorentzian_sq(omega, 0.5 * p.total);
    out.h_abs = std::sqrt(out.h_sq);
    return out;
}

TransferPair highq_matrices(const SystemConfig& config, double omega, HighQOrder order) {
    const LangevinParams a = langevin_params(config.signal);
    const LangevinParams b = langevin_params(config.idler);
    const double ta = config.signal.round_trip();
    const double tb = config.idler.round_trip();
    const cplx k = config.pump.coupling();
    const double k2 = std::norm(k);
    const cplx s = laplace_variable(omega);
    const cplx la = s + 0.5 * a.total;
    const cplx lb = s + 0.5 * b.total;
    const double ratio_ab = std::sqrt(ta / tb);
    const double ratio_ba = std::sqrt(tb / ta);
    const double gg = std::sqrt(a.gamma * b.gamma);

    TransferPair p;
    p.location = Location::output_bus;
    if (order == HighQOrder::first_order) {
        const cplx lab = la * lb;
        p.D = lab * ta * tb;
        p.G = Mat2{(-s + 0.5 * a.difference) / la, -kI * k * gg * ratio_ab / lab,
                   kI * std::conj(k) * gg * ratio_ba / lab, (-s + 0.5 * b.difference) / lb};
        p.H = Mat2{std::sqrt(a.gamma * a.gamma_int) / la,
                   -kI * k * std::sqrt(a.gamma * b.gamma_int) * ratio_ab / lab,
                   kI * std::conj(k) * std::sqrt(a.gamma_int * b.gamma) * ratio_ba / lab,
                   std::sqrt(b.gamma * b.gamma_int) / lb};
        return p;
    }

    const cplx dt = la * lb - k2;
    p.D = dt * ta * tb;
    p.G = Mat2{((-s + 0.5 * a.difference) * lb + k2 * (1.0 - 0.5 * a.gamma * ta)) / dt,
               -kI * k * gg * ratio_ab * (1.0 - (s + 0.5 * b.gamma_int) * tb) / dt,
               kI * std::conj(k) * gg * ratio_ba * (1.0 - (s + 0.5 * a.gamma_int) * ta) / dt,
               ((-s + 0.5 * b.difference) * la + k2 * (1.0 - 0.5 * b.gamma * tb)) / dt};
    p.H = Mat2{std::sqrt(a.gamma * a.gamma_int) * lb / dt,
               -kI * k * std::sqrt(a.gamma * b.gamma_int) * ratio_ab / dt,
               kI * std::conj(k) * std::sqrt(a.gamma_int * b.gamma) * ratio_ba / dt,
               std::sqrt(b.gamma * b.gamma_int) * la / dt};
    return p;
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::clean: return "clean";
        case Regime::marginal: return "marginal";
        case Regime::violated: return "violated";
    }
    return "?";
}

RegimeReport highq_regime(const SystemConfig& config, double omega) {
    struct Entry {
        const char* name;
        double value;
    };
    const ModeParams& a = config.signal;
    const ModeParams& b = config.idler;
    const Entry entries[] = {
        {"gamma_a T_a", a.gamma() * a.round_trip()},
        {"gamma'_a T_a", a.gamma_int() * a.round_trip()},
        {"|omega| T_a", std::abs(omega) * a.round_trip()},
        {"|r_a|", std::abs(config.r_a())},
        {"gamma_b T_b", b.gamma() * b.round_trip()},
        {"gamma'_b T_b", b.gamma_int() * b.round_trip()},
        {"|omega| T_b", std::abs(omega) * b.round_trip()},
        {"|r_b|", std::abs(config.r_b())},
    };
    RegimeReport out;
    for (const Entry& e : entries) {
        out.parameter = std::max(out.parameter, e.value);
        if (e.value >= kHighQWarn) {
            std::ostringstream os;
            os << "high-Q regime violated: " << e.name << " = " << e.value << " >= " << kHighQWarn;
            out.warnings.push_back(os.str());
        } else if (e.value >= kHighQClean) {
            std::ostringstream os;
            os << "high-Q regime marginal: " << e.name << " = " << e.value << " >= " << kHighQClean;
            out.warnings.push_back(os.str());
        }
    }
    if (out.parameter >= kHighQWarn) {
        out.regime = Regime::violated;
    } else if (out.parameter >= kHighQClean) {
        out.regime = Regime::marginal;
    }
    return out;
}

std::pair<double, double> quadratic_roots(double u_a, double u_b, double k2) {
    const double mean = 0.5 * (u_a + u_b);
    const double half = 0.5 * (u_a - u_b);
    const double rad = std::sqrt(half * half + k2);
    return {mean + rad, mean - rad};
}

cplx transcendental_d(const SystemConfig& config, cplx s) {
    const ModeParams& a = config.signal;
    const ModeParams& b = config.idler;
    const double xa = a.rho() * a.alpha();
    const double xb = b.rho() * b.alpha();
    const double k2 = std::norm(config.pump.coupling());
    return (1.0 - xa * std::exp(-s * a.round_trip())) * (1.0 - xb * std::exp(-s * b.round_trip())) -
           k2 * a.round_trip() * b.round_trip();
}

PoleSet poles(const SystemConfig& config) {
    const ModeParams& a = config.signal;
    const ModeParams& b = config.idler;
    const double k2 = std::norm(config.pump.coupling());
    const double xa = a.rho() * a.alpha();
    const double xb = b.rho() * b.alpha();
    const double ya = (1.0 - xa) / a.round_trip();
    const double yb = (1.0 - xb) / b.round_trip();

    PoleSet p;
    std::tie(p.s_plus, p.s_minus) = quadratic_roots(ya / xa, yb / xb, k2);

    const double ga = a.gamma() + a.gamma_int();
    const double gb = b.gamma() + b.gamma_int();
    const double quarter = 0.25 * (ga - gb);
    const double rad = std::sqrt(quarter * quarter + k2);
    p.pi_plus = 0.25 * (ga + gb) + rad;
    p.pi_minus = 0.25 * (ga + gb) - rad;

    p.residual_plus = std::abs(transcendental_d(config, -p.s_plus));
    p.residual_minus = std::abs(transcendental_d(config, -p.s_minus));
    p.d_at_zero = std::abs(transcendental_d(config, 0.0));
    return p;
}

std::string_view to_string(ChainStage stage) {
    switch (stage) {
        case ChainStage::pole_form: return "pole_form";
        case ChainStage::highQ_form: return "highQ_form";
        case ChainStage::lorentzian_product: return "lorentzian_product";
    }
    return "?";
}

double rate_highq_chain(const SystemConfig& config, double omega, ChainStage stage) {
    const ModeParams& a = config.signal;
    const ModeParams& b = config.idler;
    const double k2 = std::norm(config.pump.coupling());
    const double w2 = omega * omega;
    const LangevinParams la = langevin_params(a);
    const LangevinParams lb = langevin_params(b);

    switch (stage) {
        case ChainStage::pole_form: {
            const PoleSet p = poles(config);
            const double f = (w2 + p.s_plus * p.s_plus) * (w2 + p.s_minus * p.s_minus);
            const cplx xa = a.xi(omega);
            const cplx xb = b.xi(omega);
            const double ta = a.round_trip();
            const double tb = b.round_trip();
            const double fa = a.tau() * a.tau() / ta *
                              std::norm((1.0 - b.rho() * xb) / tb) * std::norm(xa) / f;
            const double fb = b.tau() * b.tau() / tb *
                              std::norm((1.0 - a.rho() * xa) / ta) * std::norm(xb) / f;
            return k2 * fa * fb;
        }
        case ChainStage::highQ_form: {
            const PoleSet p = poles(config);
            const double f = (w2 + p.pi_plus * p.pi_plus) * (w2 + p.pi_minus * p.pi_minus);
            const double fa = la.gamma * lorentzian_sq(omega, 0.5 * lb.total) / f;
            const double fb = lb.gamma * lorentzian_sq(omega, 0.5 * la.total) / f;
            return k2 * fa * fb;
        }
        case ChainStage::lorentzian_product:
            return k2 * la.gamma / lorentzian_sq(omega, 0.5 * la.total) * lb.gamma /
                   lorentzian_sq(omega, 0.5 * lb.total);
    }
    return kNaN;
}

double highq_car_intracavity(const SystemConfig& config) {
    const double ga = config.signal.gamma();
    const double gb = config.idler.gamma();
    return ga * gb / (ga * config.idler.gamma_int() + config.signal.gamma_int() * gb);
}

double highq_herald_intracavity(const SystemConfig& config) {
    const LangevinParams b = langevin_params(config.idler);
    return b.gamma / b.total;
}

double highq_car_output(const SystemConfig& config, double omega) {
    const LangevinParams a = langevin_params(config.signal);
    const LangevinParams b = langevin_params(config.idler);
    const double loss_a = a.gamma * a.gamma_int / lorentzian_sq(omega, 0.5 * a.difference);
    const double loss_b = b.gamma * b.gamma_int / lorentzian_sq(omega, 0.5 * b.difference);
    return 1.0 / (loss_a + loss_b);
}

double highq_herald_output(const SystemConfig& config, double omega) {
    const LangevinParams b = langevin_params(config.idler);
    return 1.0 / (1.0 + b.gamma * b.gamma_int / lorentzian_sq(omega, 0.5 * b.difference));
}

double langevin_boundary_residual(const ModeParams& mode, double omega) {
    SystemConfig c;
    c.signal = mode;
    c.idler = mode;
    c.pump_mode = mode;
    const TransferPair inside = intracavity_transfer(c, omega);
    const TransferPair out = output_transfer(c, omega);
    const double root = std::sqrt(mode.gamma() * mode.round_trip());
    return std::abs(root * inside.G.aa() - 1.0 - out.G.aa());
}

std::vector<LimitPoint> halving_grid(const RateSet& rates, double t0, int count) {
    if (!(t0 > 0.0)) throw ValidationError("grid start T0 must be positive");
    if (count < 1) throw ValidationError("grid needs at least one point");
    std::vector<LimitPoint> grid;
    grid.reserve(static_cast<std::size_t>(count));
    double ta = t0;
    for (int i = 0; i < count; ++i, ta *= 0.5) {
        const double tb = rates.t_ratio * ta;
        LimitPoint pt;
        pt.config.signal = ModeParams::from_rates(ModeLabel::signal, ta, rates.gamma_a, rates.gamma_int_a);
        pt.config.idler = ModeParams::from_rates(ModeLabel::idler, tb, rates.gamma_b, rates.gamma_int_b);
        pt.config.pump_mode = ModeParams::from_rates(ModeLabel::pump, ta, rates.gamma_a, 0.0);
        pt.config.pump.process = Process::spdc;
        pt.config.pump.g = std::abs(rates.coupling);
        pt.config.pump.amplitude = 1.0;
        pt.config.pump.phase = std::arg(rates.coupling);
        pt.omega = rates.omega;
        pt.scale = highq_regime(pt.config, pt.omega).parameter;
        grid.push_back(pt);
    }
    return grid;
}

double fit_order(const std::vector<double>& scales, const std::vector<double>& errors) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < scales.size() && i < errors.size(); ++i) {
        if (!(errors[i] > 0.0) || !std::isfinite(errors[i]) || !(scales[i] > 0.0)) continue;
        const double x = std::log(scales[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return kNaN;
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return kNaN;
    return (n * sxy - sx * sy) / den;
}

LimitReport limit_report(const std::vector<LimitPoint>& grid) {
    if (grid.size() < 3) {
        throw ValidationError("limit report needs at least 3 grid points to fit convergence orders");
    }
    LimitReport rep;
    rep.quantities = {"G_aa",  "G_ab",  "G_ba",  "G_bb",  "Ht_aa",   "Ht_ab",      "Ht_ba",
                      "Ht_bb", "C_aa",  "C_bb",  "car_mrr", "herald_mrr", "car_out",
                      "herald_out", "R_ab", "G",    "Ht",    "C_kk"};
    const std::size_t nq = rep.quantities.size();
    rep.errors.assign(grid.size(), std::vector<double>(nq, kNaN));
    rep.scales.resize(grid.size());

    parallel_for(grid.size(), [&](std::size_t i) {
        const SystemConfig& c = grid[i].config;
        const double w = grid[i].omega;
        std::vector<double>& e = rep.errors[i];
        rep.scales[i] = grid[i].scale;

        const TransferPair exact = output_transfer(c, w);
        const Mat2 ht = rescaled_noise_matrix(exact, c);
        const TransferPair lim = highq_matrices(c, w, HighQOrder::first_order);
        for (std::size_t k = 0; k < 4; ++k) {
            e[k] = relative_error(exact.G.m[k], lim.G.m[k]);
            e[4 + k] = relative_error(ht.m[k], lim.H.m[k]);
        }

        const CommutatorSet comms = commutators_closed_form(c);
        const DiagonalCommutators climit = highq_commutator_limit(c);
        e[8] = relative_error(comms.c_aa, climit.c_aa);
        e[9] = relative_error(comms.c_bb, climit.c_bb);

        const RateRecord inside = evaluate_rates(c, w, Location::intracavity);
        const RateRecord outside = evaluate_rates(c, w, Location::output_bus);
        e[10] = relative_error(inside.car, highq_car_intracavity(c));
        e[11] = relative_error(inside.herald, highq_herald_intracavity(c));
        e[12] = relative_error(outside.car, highq_car_output(c, w));
        e[13] = relative_error(outside.herald, highq_herald_output(c, w));
        e[14] = relative_error(inside.pair_rate,
                               rate_highq_chain(c, w, ChainStage::lorentzian_product));
        // Whole-matrix errors: the diagonal entries alone stall at |g alpha_p|^2 / Gamma^2,
        // the term the first-order form drops.
        e[15] = *std::max_element(e.begin(), e.begin() + 4);
        e[16] = *std::max_element(e.begin() + 4, e.begin() + 8);
        e[17] = std::max(e[8], e[9]);
    });

    rep.orders.resize(nq);
    rep.monotone.resize(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        std::vector<double> col(grid.size());
        bool mono = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            col[i] = rep.errors[i][q];
            if (i > 0 && !(col[i] <= col[i - 1] + 1e-14)) mono = false;
        }
        rep.orders[q] = fit_order(rep.scales, col);
        rep.monotone[q] = mono;
    }
    return rep;
}

}  // namespace ringpair
