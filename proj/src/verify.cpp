#include "ringpair/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "ringpair/biphoton.hpp"
#include "ringpair/commutators.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/highq.hpp"
#include "ringpair/parallel.hpp"

namespace ringpair {

namespace {

constexpr int kThetaPoints = 101;

double rel(double x, double ref) {
    if (x == ref) return 0.0;
    return std::abs(x - ref) / std::max(std::abs(x), std::abs(ref));
}

double rel(cplx x, cplx ref) {
    if (x == ref) return 0.0;
    return std::abs(x - ref) / std::max(std::abs(x), std::abs(ref));
}

// Per-config residuals, in the order of kRandomChecks.
enum Check {
    kIdentity,
    kComposedOutput,
    kComposedIntracavity,
    kClosedCommutators,
    kNumericCommutators,
    kPsiDualPath,
    kCarTheta,
    kHeraldTheta,
    kClosedHerald,
    kClosedCar,
    kDecoupledUnitarity,
    kRangeChecks,
    kTranscendentalD,
    kQuadraticRoots,
    kHighQRoots,
    kUnimodular,
    kCheckCount
};

struct CheckSpec {
    const char* name;
    double tolerance;
};

constexpr CheckSpec kRandomChecks[kCheckCount] = {
    {"G = H P_xi X_tau - T_rho (entrywise)", 1e-12},
    {"closed-form output G, H = composed route", 1e-12},
    {"closed-form intracavity G, H = composed route", 1e-12},
    {"closed-form commutators solve unitarity system", 1e-12},
    {"numeric 4x4 commutator solve = closed form", 1e-10},
    {"intracavity psi2: matrix path = closed form", 1e-10},
    {"intracavity CAR independent of theta", 1e-10},
    {"intracavity herald independent of theta_b", 1e-10},
    {"closed-form intracavity herald = pipeline", 1e-9},
    {"closed-form symmetric CAR = pipeline", 1e-9},
    {"decoupled |G_kk|^2 + (1 - alpha_k^2)|H_kk|^2 = 1, |G| <= 1", 1e-12},
    {"herald in [0, 1], populations in [0, 1], CAR > 0", 1e-12},
    {"transcendental D(-i omega) = transfer D", 1e-12},
    {"quadratic roots satisfy the quadratic", 1e-12},
    {"high-Q roots = quadratic roots at x -> 1, y -> Gamma/2", 1e-12},
    {"first-order G_kk unimodular at gamma' = 0", 1e-12},
};

std::array<double, kCheckCount> check_point(const RandomPoint& p, bool symmetric,
                                            const TransferEvaluator& output) {
    std::array<double, kCheckCount> r{};
    const SystemConfig& c = p.config;
    const double w = p.omega;

    const TransferPair out = output(c, w);
    const BuildingBlocks b = building_blocks(c, w);
    r[kIdentity] = max_relative_difference(out.G, out.H * b.P_xi * b.X_tau - b.T_rho);

    const TransferPair comp = output_transfer_composed(c, w);
    r[kComposedOutput] = std::max(max_relative_difference(out.G, comp.G),
                                  max_relative_difference(out.H, comp.H));
    const TransferPair in = intracavity_transfer(c, w);
    const TransferPair in_comp = intracavity_transfer_composed(c, w);
    r[kComposedIntracavity] =
        std::max(max_relative_difference(in.G, in_comp.G), max_relative_difference(in.H, in_comp.H));

    const CommutatorSet closed = commutators_closed_form(c);
    r[kClosedCommutators] = assemble_commutator_system(out).residual(closed);
    try {
        const CommutatorSolve num = solve_commutators_numeric(out, c);
        const double scale = std::max({std::abs(closed.c_aa), std::abs(closed.c_bb), std::abs(closed.d_ab)});
        r[kNumericCommutators] = std::max({std::abs(num.values.c_aa - closed.c_aa),
                                           std::abs(num.values.c_bb - closed.c_bb),
                                           std::abs(num.values.d_ab - closed.d_ab)}) /
                                 scale;
    } catch (const Error&) {
        r[kNumericCommutators] = std::numeric_limits<double>::infinity();
    }

    double car_min = std::numeric_limits<double>::infinity(), car_max = 0.0;
    double her_min = std::numeric_limits<double>::infinity(), her_max = 0.0;
    const double ta = c.signal.round_trip();
    for (int k = 0; k < kThetaPoints; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / kThetaPoints;
        const double wk = theta / ta;
        const BiphotonState s = biphoton_state(c, wk, Location::intracavity);
        r[kPsiDualPath] = std::max(r[kPsiDualPath], rel(s.psi2, psi2_intracavity_closed_form(c, wk)));
        const RateRecord rec = evaluate_rates(c, wk, Location::intracavity);
        car_min = std::min(car_min, rec.car);
        car_max = std::max(car_max, rec.car);
        her_min = std::min(her_min, rec.herald);
        her_max = std::max(her_max, rec.herald);
    }
    r[kCarTheta] = rel(car_max, car_min);
    r[kHeraldTheta] = rel(her_max, her_min);

    const ClosedFormRates cf = closed_form_rates(c);
    const RateRecord rec = evaluate_rates(c, w, Location::intracavity);
    r[kClosedHerald] = rel(rec.herald, cf.herald);
    if (symmetric) r[kClosedCar] = cf.car ? rel(rec.car, *cf.car) : 1.0;

    SystemConfig decoupled = c;
    decoupled.pump.g = 0.0;
    const TransferPair d = output(decoupled, w);
    const double ua = std::norm(d.G.aa()) + c.signal.one_minus_alpha_sq() * std::norm(d.H.aa());
    const double ub = std::norm(d.G.bb()) + c.idler.one_minus_alpha_sq() * std::norm(d.H.bb());
    const double g_cl = std::abs(classical_lossy_transfer(c.signal.rho(), c.signal.alpha(), c.signal.theta(w)));
    r[kDecoupledUnitarity] = std::max({std::abs(ua - 1.0), std::abs(ub - 1.0), std::max(0.0, g_cl - 1.0)});

    const RateRecord bus = evaluate_rates(c, w, Location::output_bus);
    double range = 0.0;
    for (const RateRecord* x : {&rec, &bus}) {
        range = std::max({range, std::max(0.0, -x->herald), std::max(0.0, x->herald - 1.0),
                          x->car > 0.0 ? 0.0 : 1.0});
        for (double pv : {x->populations.p0, x->populations.p1a, x->populations.p1b, x->populations.p2}) {
            range = std::max({range, std::max(0.0, -pv), std::max(0.0, pv - 1.0)});
        }
    }
    r[kRangeChecks] = range;

    r[kTranscendentalD] = rel(transcendental_d(c, laplace_variable(w)), out.D);

    const double k2 = std::norm(c.pump.coupling());
    const double xa = c.signal.rho() * c.signal.alpha();
    const double xb = c.idler.rho() * c.idler.alpha();
    const double ua_ = (1.0 - xa) / c.signal.round_trip() / xa;
    const double ub_ = (1.0 - xb) / c.idler.round_trip() / xb;
    const PoleSet ps = poles(c);
    const double qscale = std::max({ua_ * ua_, ub_ * ub_, k2});
    r[kQuadraticRoots] = std::max(std::abs((ps.s_plus - ua_) * (ps.s_plus - ub_) - k2),
                                  std::abs((ps.s_minus - ua_) * (ps.s_minus - ub_) - k2)) /
                         qscale;
    const LangevinParams la = langevin_params(c.signal);
    const LangevinParams lb = langevin_params(c.idler);
    const auto hq = quadratic_roots(0.5 * la.total, 0.5 * lb.total, k2);
    r[kHighQRoots] = std::max(rel(hq.first, ps.pi_plus), rel(hq.second, ps.pi_minus));

    SystemConfig lossless = c;
    lossless.signal = ModeParams::from_rates(ModeLabel::signal, c.signal.round_trip(), c.signal.gamma(), 0.0);
    lossless.idler = ModeParams::from_rates(ModeLabel::idler, c.idler.round_trip(), c.idler.gamma(), 0.0);
    const TransferPair fo = highq_matrices(lossless, w, HighQOrder::first_order);
    r[kUnimodular] = std::max(std::abs(std::abs(fo.G.aa()) - 1.0), std::abs(std::abs(fo.G.bb()) - 1.0));
    return r;
}

InvariantResult lossless_check() {
    InvariantResult res{"lossless limits: |G_kk| = 1, C = 0, CAR = inf, herald = 1", 0.0, 1e-12, 0, false};
    for (double rho : {0.3, 0.6, 0.9, 0.99}) {
        for (int k = 0; k < 16; ++k) {
            const double theta = 2.0 * std::numbers::pi * (k + 0.5) / 16;
            const SystemConfig c = symmetric_config(rho, 1.0, 0.0);
            const TransferPair p = output_transfer(c, theta);
            const CommutatorSet cs = commutators_closed_form(c);
            double worst = std::max({std::abs(std::abs(p.G.aa()) - 1.0), std::abs(std::abs(p.G.bb()) - 1.0),
                                     std::abs(cs.c_aa), std::abs(cs.c_bb), std::abs(cs.d_ab), std::abs(cs.c_ab)});
            for (Location loc : {Location::intracavity, Location::output_bus}) {
                const RateRecord r = evaluate_rates(c, theta, loc);
                worst = std::max({worst, std::isinf(r.car) && r.car > 0 ? 0.0 : 1.0, std::abs(r.herald - 1.0)});
            }
            res.max_residual = std::max(res.max_residual, worst);
            ++res.samples;
        }
    }
    res.passed = res.max_residual <= res.tolerance;
    return res;
}

// Rates shared by the high-Q studies.
RateSet study_rates() {
    RateSet r;
    r.gamma_a = 1.0;
    r.gamma_int_a = 0.4;
    r.gamma_b = 1.3;
    r.gamma_int_b = 0.6;
    r.coupling = {1e-3, 0.0};
    r.omega = 0.7;
    return r;
}

std::vector<InvariantResult> convergence_checks() {
    std::vector<InvariantResult> out;
    const LimitReport rep = limit_report(halving_grid(study_rates(), 1e-2, 4));
    for (const char* q : {"G", "Ht", "C_kk", "R_ab", "car_mrr", "herald_mrr"}) {
        const auto it = std::find(rep.quantities.begin(), rep.quantities.end(), q);
        const std::size_t i = static_cast<std::size_t>(it - rep.quantities.begin());
        InvariantResult r;
        const double order = rep.orders[i];
        char label[128];
        std::snprintf(label, sizeof label, "high-Q convergence of %s: order %.3f in [0.8, 2.2], monotone",
                      q, order);
        r.name = label;
        // Residual: distance of the fitted order outside [0.8, 2.2].
        r.max_residual = std::isnan(order) ? 1.0 : std::max({0.0, 0.8 - order, order - 2.2});
        r.tolerance = 0.0;
        r.samples = rep.scales.size();
        r.passed = r.max_residual <= r.tolerance && rep.monotone[i];
        out.push_back(r);
    }

    InvariantResult poles_r{"pole residual |D(-s)|/|D(0)| <= 1e-3, shrinking with T", 0.0, 1e-3, 0, true};
    double prev = std::numeric_limits<double>::infinity();
    for (const LimitPoint& pt : halving_grid(study_rates(), 1e-3, 4)) {
        const PoleSet p = poles(pt.config);
        const double v = std::max(p.residual_plus, p.residual_minus) / p.d_at_zero;
        poles_r.max_residual = std::max(poles_r.max_residual, v);
        if (!(v < prev)) poles_r.passed = false;
        prev = v;
        ++poles_r.samples;
    }
    poles_r.passed = poles_r.passed && poles_r.max_residual <= poles_r.tolerance;
    out.push_back(poles_r);

    InvariantResult lang{"Langevin boundary condition: residual O(gamma T)", 0.0, 0.0, 0, false};
    std::vector<double> scales, errs;
    for (double t = 1e-2; scales.size() < 4; t *= 0.5) {
        const ModeParams m = ModeParams::from_rates(ModeLabel::signal, t, 1.0, 0.4);
        scales.push_back(t);
        errs.push_back(langevin_boundary_residual(m, 0.7));
    }
    const double order = fit_order(scales, errs);
    char label[128];
    std::snprintf(label, sizeof label, "Langevin boundary condition: residual order %.3f in gamma T", order);
    lang.name = label;
    lang.max_residual = std::isnan(order) ? 1.0 : std::max({0.0, 0.8 - order, order - 2.2});
    lang.samples = scales.size();
    lang.passed = lang.max_residual <= lang.tolerance;
    out.push_back(lang);
    return out;
}

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

RandomPoint random_point(std::mt19937_64& rng, bool symmetric) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto pick = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

    RandomPoint p;
    const double ta = pick(0.5, 2.0);
    const double tb = symmetric ? ta : pick(0.5, 2.0);
    const double rho_a = pick(0.3, 0.995);
    const double alpha_a = pick(0.6, 0.999);
    const double rho_b = symmetric ? rho_a : pick(0.3, 0.995);
    const double alpha_b = symmetric ? alpha_a : pick(0.6, 0.999);
    SystemConfig& c = p.config;
    c.signal = ModeParams::from_coefficients(ModeLabel::signal, ta, rho_a, alpha_a);
    c.idler = ModeParams::from_coefficients(ModeLabel::idler, tb, rho_b, alpha_b);
    c.pump_mode = ModeParams::from_coefficients(ModeLabel::pump, ta, rho_a, 1.0);
    // Keep C_kk >= 0: |g alpha_p| T_k well below sqrt(1 - alpha_k^2).
    const double kmax = 0.3 * std::min(std::sqrt(c.signal.one_minus_alpha_sq()) / ta,
                                       std::sqrt(c.idler.one_minus_alpha_sq()) / tb);
    c.pump.process = u(rng) < 0.5 ? Process::spdc : Process::sfwm;
    c.pump.g = pick(0.0, kmax);
    c.pump.amplitude = 1.0;
    c.pump.phase = pick(0.0, 2.0 * std::numbers::pi);
    p.omega = pick(-std::numbers::pi, std::numbers::pi) / ta;
    return p;
}

VerifyReport verify(const VerifyOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = options.level == VerifyLevel::full ? 1000 : 100;
    std::mt19937_64 rng(options.seed);
    std::vector<RandomPoint> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back(random_point(rng, i % 4 == 0));

    std::vector<std::array<double, kCheckCount>> residuals(n);
    parallel_for(n, [&](std::size_t i) {
        try {
            residuals[i] = check_point(points[i], i % 4 == 0, options.output);
        } catch (const Error&) {
            residuals[i].fill(std::numeric_limits<double>::infinity());
        }
    });

    VerifyReport report;
    for (int k = 0; k < kCheckCount; ++k) {
        InvariantResult r;
        r.name = kRandomChecks[k].name;
        r.tolerance = kRandomChecks[k].tolerance;
        r.samples = k == kClosedCar ? (n + 3) / 4 : n;
        bool undefined = false;
        for (const auto& row : residuals) {
            if (std::isnan(row[k])) undefined = true;
            r.max_residual = std::max(r.max_residual, row[k]);
        }
        if (undefined) r.max_residual = std::numeric_limits<double>::quiet_NaN();
        r.passed = r.max_residual <= r.tolerance;
        report.results.push_back(r);
    }
    report.results.push_back(lossless_check());
    if (options.level == VerifyLevel::full) {
        for (InvariantResult& r : convergence_checks()) report.results.push_back(std::move(r));
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string format_report(const VerifyReport& report) {
    std::string out;
    char buf[256];
    for (const InvariantResult& r : report.results) {
        std::snprintf(buf, sizeof buf, "%s  %-62s max_residual=%.3e tol=%.1e n=%zu\n",
                      r.passed ? "PASS" : "FAIL", r.name.c_str(), r.max_residual, r.tolerance,
                      r.samples);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%s: %zu invariants, %.2f s\n", report.passed() ? "ok" : "FAILED",
                  report.results.size(), report.seconds);
    out += buf;
    return out;
}

}  // namespace ringpair
