#include <cmath>

#include "doctest.h"
#include "ringpair/commutators.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/highq.hpp"
#include "support.hpp"

using namespace ringpair;
using testing::rel_err;

namespace {

RateSet reference_rates() {
    RateSet r;
    r.gamma_a = 1.0;
    r.gamma_int_a = 0.4;
    r.gamma_b = 1.3;
    r.gamma_int_b = 0.6;
    r.coupling = 1e-3;
    r.omega = 0.7;
    return r;
}

SystemConfig rate_config(double t, double ga, double gia, double gb, double gib, cplx k,
                         double t_ratio = 1.0) {
    SystemConfig c;
    c.signal = ModeParams::from_rates(ModeLabel::signal, t, ga, gia);
    c.idler = ModeParams::from_rates(ModeLabel::idler, t * t_ratio, gb, gib);
    c.pump.g = std::abs(k);
    c.pump.amplitude = 1.0;
    c.pump.phase = std::arg(k);
    return c;
}

}  // namespace

TEST_SUITE("highq") {

TEST_CASE("single-mode limit") {
    // critical coupling on resonance: no transmission
    CHECK(std::abs(highq_single_mode(0.5, 0.5, 0.0).G) < 1e-16);
    // lossless: all-pass
    CHECK(rel_err(std::abs(highq_single_mode(0.8, 0.0, 0.3).G), 1.0) < 1e-15);
    const SingleModeLimit m = highq_single_mode(1.0, 0.4, 0.7);
    CHECK(std::abs(std::norm(m.G) + m.h_sq - 1.0) < 1e-15);
    CHECK(rel_err(m.h_abs * m.h_abs, m.h_sq) < 1e-15);
}

TEST_CASE("decoupled limit approaches the classical transfer at first order in T") {
    double prev = 1.0;
    for (double t : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
        const SystemConfig c = rate_config(t, 1.0, 0.4, 1.0, 0.4, 0.0);
        const double err = rel_err(output_transfer(c, 0.7).G.aa(), highq_single_mode(1.0, 0.4, 0.7).G);
        CHECK(err < 2.0 * t);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("first-order matrices") {
    const SystemConfig dec = rate_config(1e-3, 1.0, 0.4, 1.3, 0.6, 0.0);
    const TransferPair p = highq_matrices(dec, 0.7, HighQOrder::first_order);
    CHECK(p.G.ab() == cplx{});
    CHECK(p.H.ab() == cplx{});
    CHECK(rel_err(p.G.aa(), highq_single_mode(1.0, 0.4, 0.7).G) < 1e-15);

    // equal round trips: no sqrt(T) ratio left in the off-diagonals
    const cplx k{3e-4, 2e-4};
    const TransferPair e = highq_matrices(rate_config(1e-3, 1.0, 0.4, 1.3, 0.6, k), 0.7,
                                          HighQOrder::first_order);
    const TransferPair u = highq_matrices(rate_config(1e-3, 1.0, 0.4, 1.3, 0.6, k, 4.0), 0.7,
                                          HighQOrder::first_order);
    CHECK(rel_err(u.G.ab(), 0.5 * e.G.ab()) < 1e-14);
    CHECK(rel_err(u.G.ba(), 2.0 * e.G.ba()) < 1e-14);
}

TEST_CASE("full and first-order forms agree as |K| -> 0") {
    const SystemConfig c = rate_config(1e-4, 1.0, 0.4, 1.3, 0.6, cplx{1e-6, 0.0});
    const TransferPair f = highq_matrices(c, 0.7, HighQOrder::full_highQ);
    const TransferPair o = highq_matrices(c, 0.7, HighQOrder::first_order);
    CHECK(max_relative_difference(f.G, o.G) < 1e-3);
}

TEST_CASE("regime classification") {
    CHECK(highq_regime(rate_config(1e-4, 1.0, 0.4, 1.3, 0.6, 1e-4), 0.7).regime == Regime::clean);
    CHECK(highq_regime(rate_config(2e-2, 1.0, 0.4, 1.3, 0.6, 1e-4), 0.7).regime == Regime::marginal);
    const RegimeReport v = highq_regime(rate_config(0.2, 1.0, 0.4, 1.3, 0.6, 1e-4), 0.7);
    CHECK(v.regime == Regime::violated);
    CHECK_FALSE(v.warnings.empty());
}

TEST_CASE("quadratic roots") {
    const auto [p, m] = quadratic_roots(2.0, 1.0, 0.0);
    CHECK(p == 2.0);
    CHECK(m == 1.0);
    const auto [p2, m2] = quadratic_roots(1.0, 1.0, 0.25);
    CHECK(rel_err(p2, 1.5) < 1e-15);
    CHECK(rel_err(m2, 0.5) < 1e-15);
    // Vieta: sum and product
    const auto [a, b] = quadratic_roots(0.9, 0.4, 0.03);
    CHECK(rel_err(a + b, 1.3) < 1e-15);
    CHECK(rel_err(a * b, 0.9 * 0.4 - 0.03) < 1e-14);
}

TEST_CASE("poles at the reference grid point") {
    const std::vector<LimitPoint> grid = halving_grid(reference_rates(), 1e-2, 1);
    const PoleSet p = poles(grid[0].config);
    CHECK(rel_err(p.s_plus, 0.95453079065796262125) < 1e-12);
    CHECK(rel_err(p.s_minus, 0.70245175961257063152) < 1e-12);
}

TEST_CASE("symmetric high-Q roots are Gamma/2 +- |K|") {
    const SystemConfig c = rate_config(1e-3, 1.0, 0.4, 1.0, 0.4, cplx{0.0, 2e-3});
    const PoleSet p = poles(c);
    CHECK(rel_err(p.pi_plus, 0.7 + 2e-3) < 1e-12);
    CHECK(rel_err(p.pi_minus, 0.7 - 2e-3) < 1e-12);
}

TEST_CASE("uncoupled poles are the single-mode decay rates") {
    const SystemConfig c = rate_config(1e-2, 1.0, 0.4, 1.3, 0.6, 0.0);
    const PoleSet p = poles(c);
    const double xa = c.signal.rho() * c.signal.alpha();
    const double xb = c.idler.rho() * c.idler.alpha();
    CHECK(rel_err(p.s_plus, std::max((1 - xa) / (1e-2 * xa), (1 - xb) / (1e-2 * xb))) < 1e-14);
    CHECK(rel_err(p.s_minus, std::min((1 - xa) / (1e-2 * xa), (1 - xb) / (1e-2 * xb))) < 1e-14);
}

TEST_CASE("pole residual shrinks with T") {
    double prev = 1.0;
    for (const LimitPoint& pt : halving_grid(reference_rates(), 1e-2, 4)) {
        const PoleSet p = poles(pt.config);
        const double r = std::max(p.residual_plus, p.residual_minus) / p.d_at_zero;
        CHECK(r < prev);
        prev = r;
    }
    CHECK(prev < 5e-4);
}

TEST_CASE("transcendental D on the imaginary axis is the transfer denominator") {
    const SystemConfig c = rate_config(1e-2, 1.0, 0.4, 1.3, 0.6, cplx{1e-3, 5e-4}, 1.3);
    for (double w = -2.0; w <= 2.0; w += 0.4) {
        CHECK(rel_err(transcendental_d(c, laplace_variable(w)), output_transfer(c, w).D) < 1e-12);
    }
}

TEST_CASE("rate chain stages converge to each other") {
    const SystemConfig c = rate_config(1e-4, 1.0, 0.4, 1.3, 0.6, cplx{1e-3, 0.0});
    const double pf = rate_highq_chain(c, 0.7, ChainStage::pole_form);
    const double hq = rate_highq_chain(c, 0.7, ChainStage::highQ_form);
    const double lp = rate_highq_chain(c, 0.7, ChainStage::lorentzian_product);
    CHECK(rel_err(pf, hq) < 1e-3);
    CHECK(rel_err(hq, lp) < 1e-4);

    // each stage is proportional to |K|^2
    const SystemConfig d = rate_config(1e-4, 1.0, 0.4, 1.3, 0.6, cplx{2e-3, 0.0});
    CHECK(rel_err(rate_highq_chain(d, 0.7, ChainStage::lorentzian_product), 4.0 * lp) < 1e-14);
    CHECK(rate_highq_chain(rate_config(1e-4, 1.0, 0.4, 1.3, 0.6, 0.0), 0.7, ChainStage::pole_form) == 0.0);
}

TEST_CASE("high-Q observables") {
    const SystemConfig c = rate_config(1e-3, 1.0, 0.4, 1.3, 0.6, cplx{1e-4, 0.0});
    CHECK(rel_err(highq_car_intracavity(c), 1.3 / (0.6 + 0.4 * 1.3)) < 1e-12);
    CHECK(rel_err(highq_herald_intracavity(c), 1.3 / 1.9) < 1e-12);
    CHECK(highq_herald_output(c, 0.7) > 0.0);
    CHECK(highq_herald_output(c, 0.7) <= 1.0);
    CHECK(highq_car_output(c, 0.7) > 0.0);
}

TEST_CASE("Langevin boundary condition holds to first order") {
    double prev = 1.0;
    for (double t : {1e-2, 5e-3, 2.5e-3}) {
        const double r = langevin_boundary_residual(ModeParams::from_rates(ModeLabel::signal, t, 1.0, 0.4), 0.7);
        CHECK(r < prev);
        CHECK(r < 2.0 * t);
        prev = r;
    }
}

TEST_CASE("limit report") {
    CHECK_THROWS_AS(limit_report(halving_grid(reference_rates(), 1e-2, 2)), ValidationError);
    const LimitReport a = limit_report(halving_grid(reference_rates(), 1e-2, 4));
    const LimitReport b = limit_report(halving_grid(reference_rates(), 1e-2, 4));
    CHECK(a.errors == b.errors);
    REQUIRE(a.quantities.size() == a.orders.size());
    for (const char* q : {"G", "Ht", "C_kk", "R_ab"}) {
        const auto it = std::find(a.quantities.begin(), a.quantities.end(), q);
        REQUIRE(it != a.quantities.end());
        const std::size_t k = static_cast<std::size_t>(it - a.quantities.begin());
        CHECK(a.monotone[k]);
        CHECK(a.orders[k] > 0.8);
        CHECK(a.orders[k] < 2.2);
    }
}

TEST_CASE("lossless grid has no noise error") {
    RateSet r = reference_rates();
    r.gamma_int_a = 0.0;
    r.gamma_int_b = 0.0;
    r.coupling = 0.0;
    const LimitReport rep = limit_report(halving_grid(r, 1e-2, 3));
    const auto it = std::find(rep.quantities.begin(), rep.quantities.end(), "Ht");
    const std::size_t k = static_cast<std::size_t>(it - rep.quantities.begin());
    for (const auto& row : rep.errors) CHECK(row[k] == 0.0);
}

TEST_CASE("fit order") {
    CHECK(rel_err(fit_order({1.0, 0.5, 0.25}, {2.0, 0.5, 0.125}), 2.0) < 1e-14);
    CHECK(std::isnan(fit_order({1.0, 0.5}, {0.0, 0.0})));
}

}
