#include <cmath>
#include <random>

#include "doctest.h"
#include "ringpair/commutators.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/verify.hpp"
#include "support.hpp"

using namespace ringpair;
using testing::rel_err;

namespace {

SystemConfig asymmetric() {
    SystemConfig c;
    c.signal = ModeParams::from_coefficients(ModeLabel::signal, 1.0, 0.9, 0.97);
    c.idler = ModeParams::from_coefficients(ModeLabel::idler, 1.3, 0.8, 0.95);
    c.pump.g = 0.02;
    c.pump.amplitude = 1.0;
    c.pump.phase = 0.3;
    return c;
}

}  // namespace

TEST_SUITE("commutators") {

TEST_CASE("closed form at the asymmetric point") {
    const CommutatorSet cs = commutators_closed_form(asymmetric());
    CHECK(rel_err(cs.c_aa, 0.0587) < 1e-13);
    CHECK(rel_err(cs.c_bb, 0.096824) < 1e-13);
    CHECK(cs.c_ab == cplx{});
    CHECK(rel_err(cs.d_ab, cplx{-0.0017731212399680374506, 0.0057320189347536361179}) < 1e-13);
}

TEST_CASE("closed form satisfies the unitarity system at every detuning") {
    const SystemConfig c = asymmetric();
    const CommutatorSet cs = commutators_closed_form(c);
    for (double w = -3.0; w <= 3.0; w += 0.1) {
        const CommutatorSystem sys = assemble_commutator_system(output_transfer(c, w));
        CHECK(sys.residual(cs) < 1e-13);
    }
}

TEST_CASE("numeric solve reproduces the closed form on random configurations") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const RandomPoint p = random_point(rng, i % 4 == 0);
        const CommutatorSolve s =
            solve_commutators_numeric(output_transfer(p.config, p.omega), p.config);
        const CommutatorSet cf = commutators_closed_form(p.config);
        CHECK_FALSE(s.least_norm);
        CHECK(rel_err(s.values.c_aa, cf.c_aa) < 1e-9);
        CHECK(rel_err(s.values.c_bb, cf.c_bb) < 1e-9);
        CHECK(std::abs(s.values.d_ab - cf.d_ab) < 1e-9 * std::max(1.0, std::abs(cf.d_ab)));
    }
}

TEST_CASE("unequal round trips exercise the cross-commutator row") {
    // with Ta != Tb, |r_a| != |r_b| and a wrong sign in row 2 shows up directly
    const SystemConfig c = asymmetric();
    CHECK(std::abs(std::abs(c.r_a()) - std::abs(c.r_b())) > 1e-3);
    const CommutatorSolve s = solve_commutators_numeric(output_transfer(c, 0.4), c);
    CHECK(rel_err(s.values.d_ab, commutators_closed_form(c).d_ab) < 1e-10);
}

TEST_CASE("decoupled system is well posed while every H row survives") {
    SystemConfig c = asymmetric();
    c.pump.g = 0.0;
    const CommutatorSolve s = solve_commutators_numeric(output_transfer(c, 0.2), c);
    CHECK_FALSE(s.least_norm);
    CHECK(rel_err(s.values.c_aa, 1.0 - 0.97 * 0.97) < 1e-10);
    CHECK(rel_err(s.values.c_bb, 1.0 - 0.95 * 0.95) < 1e-10);
    CHECK(std::abs(s.values.d_ab) < 1e-12);
}

TEST_CASE("decoupled system with a blocked coupler takes the least-norm path") {
    SystemConfig c = asymmetric();
    c.pump.g = 0.0;
    c.signal = ModeParams::from_coefficients(ModeLabel::signal, 1.0, 1.0, 0.97);
    const CommutatorSolve s = solve_commutators_numeric(output_transfer(c, 0.2), c);
    CHECK(s.least_norm);
    CHECK(rel_err(s.values.c_bb, 1.0 - 0.95 * 0.95) < 1e-10);
    CHECK(std::abs(s.values.d_ab) < 1e-12);
}

TEST_CASE("lossless decoupled ring has vanishing noise") {
    const SystemConfig c = symmetric_config(0.9, 1.0, 0.0);
    const CommutatorSet cs = commutators_closed_form(c);
    CHECK(cs.c_aa == 0.0);
    CHECK(cs.c_bb == 0.0);
    CHECK(cs.d_ab == cplx{});
}

TEST_CASE("high-Q commutator limit") {
    for (double t : {1e-2, 5e-3, 2.5e-3}) {
        SystemConfig c;
        c.signal = ModeParams::from_rates(ModeLabel::signal, t, 1.0, 0.4);
        c.idler = ModeParams::from_rates(ModeLabel::idler, t, 1.3, 0.6);
        c.pump.g = 1e-3;
        c.pump.amplitude = 1.0;
        const CommutatorSet cs = commutators_closed_form(c);
        const DiagonalCommutators lim = highq_commutator_limit(c);
        // 1 - e^{-x} = x - x^2/2 + ...
        CHECK(std::abs(cs.c_aa - lim.c_aa) / lim.c_aa < 0.4 * t);
        CHECK(std::abs(cs.c_bb - lim.c_bb) / lim.c_bb < 0.4 * t);
    }
}

}
