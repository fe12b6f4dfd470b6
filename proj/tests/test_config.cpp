#include <string>

#include "doctest.h"
#include "ringpair/config.hpp"
#include "ringpair/errors.hpp"
#include "support.hpp"

using namespace ringpair;
using testing::rel_err;

namespace {

const std::string kBase =
    "sweep.quantity = car_mrr\n"
    "sweep.symmetric = true\n"
    "signal.T = 1\n"
    "pump.r = 1e-3\n"
    "axis1.name = rho\n"
    "axis1.min = 0.5\n"
    "axis1.max = 0.9\n"
    "axis1.count = 5\n";

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal valid config") {
    const ParsedConfig p = parse_config(kBase + "signal.alpha = 0.95\n");
    CHECK(p.warnings.empty());
    CHECK(p.spec.quantity == Quantity::car_mrr);
    CHECK(p.spec.symmetric);
    REQUIRE(p.spec.axes.size() == 1);
    const std::vector<double> pts = p.spec.axes[0].points();
    REQUIRE(pts.size() == 5);
    CHECK(pts.front() == 0.5);
    CHECK(pts.back() == 0.9);
    CHECK(rel_err(pts[2], 0.7) < 1e-15);

    const SystemConfig c = build_system(p.spec, {{"signal.rho", 0.8}});
    CHECK(c.signal.rho() == 0.8);
    CHECK(rel_err(c.idler.alpha(), 0.95) < 1e-15);
    CHECK(rel_err(c.r_ab_abs(), 1e-3) < 1e-14);
}

TEST_CASE("comments and blank lines are ignored; hash follows content") {
    const std::string a = kBase + "signal.alpha = 0.95\n";
    const std::string b = "# a comment\n\n" + kBase + "signal.alpha = 0.95  # trailing\n";
    CHECK(parse_config(a).spec.canonical == parse_config(b).spec.canonical);
    CHECK(fnv1a_hex(parse_config(a).spec.canonical) != fnv1a_hex(parse_config(kBase + "signal.alpha = 0.9\n").spec.canonical));
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("out-of-range value names the key") {
    const std::string e = error_of(kBase + "signal.alpha = 1.2\n");
    CHECK(contains(e, "signal.alpha"));
    CHECK(contains(e, "line 9"));
}

TEST_CASE("axis range outside the domain") {
    std::string text = kBase + "signal.alpha = 0.95\n";
    text.replace(text.find("axis1.max = 0.9"), 15, "axis1.max = 1.2");
    CHECK(contains(error_of(text), "axis1.max"));
}

TEST_CASE("duplicate key: last value wins with a warning") {
    const ParsedConfig p = parse_config(kBase + "signal.alpha = 0.9\nsignal.alpha = 0.95\n");
    REQUIRE(p.warnings.size() == 1);
    CHECK(contains(p.warnings[0], "duplicate key 'signal.alpha'"));
    CHECK(p.spec.fixed.at("signal.alpha") == 0.95);
}

TEST_CASE("unknown key reports its line") {
    const std::string e = error_of(kBase + "signal.alpha = 0.95\nsignal.colour = 3\n");
    CHECK(contains(e, "line 10"));
    CHECK(contains(e, "signal.colour"));
}

TEST_CASE("missing keys") {
    CHECK(contains(error_of(kBase), "signal.alpha"));
    std::string no_q = kBase + "signal.alpha = 0.95\n";
    no_q.erase(0, no_q.find('\n') + 1);
    CHECK(contains(error_of(no_q), "sweep.quantity"));
}

TEST_CASE("a key cannot be both fixed and swept") {
    CHECK(contains(error_of(kBase + "signal.alpha = 0.95\nsignal.rho = 0.8\n"), "both fixed and swept"));
}

TEST_CASE("axis needs at least two points") {
    std::string text = kBase + "signal.alpha = 0.95\n";
    text.replace(text.find("axis1.count = 5"), 15, "axis1.count = 1");
    CHECK_FALSE(error_of(text).empty());
}

TEST_CASE("exclusive and conflicting keys") {
    CHECK(contains(error_of(kBase + "signal.alpha = 0.95\nsignal.gamma_int_T = 0.1\n"), "both set"));
    CHECK(contains(error_of(kBase + "signal.alpha = 0.95\npump.g = 1\n"), "both set"));
    CHECK_FALSE(error_of(kBase + "signal.alpha = 0.95\npump.amplitude = 2\n").empty());
    CHECK(contains(error_of(kBase + "signal.alpha = 0.95\nidler.alpha = 0.95\n"), "symmetric"));
}

TEST_CASE("axis targets") {
    Axis a;
    a.name = "rho";
    CHECK(axis_targets(a, true) == std::vector<std::string>{"signal.rho"});
    CHECK(axis_targets(a, false) == std::vector<std::string>{"signal.rho", "idler.rho"});
    a.name = "idler.alpha";
    CHECK(axis_targets(a, false) == std::vector<std::string>{"idler.alpha"});
    a.name = "theta";
    CHECK(axis_targets(a, true) == std::vector<std::string>{"sweep.theta"});
}

TEST_CASE("log spacing") {
    Axis a;
    a.name = "r";
    a.min = 1e-6;
    a.max = 1e-3;
    a.count = 4;
    a.spacing = Spacing::log;
    const std::vector<double> p = a.points();
    CHECK(p.front() == 1e-6);
    CHECK(p.back() == 1e-3);
    CHECK(rel_err(p[1], 1e-5) < 1e-13);
}

TEST_CASE("detuning from theta") {
    const ParsedConfig p = parse_config(kBase + "signal.alpha = 0.95\nsweep.theta = 0.4\nsignal.T = 2\n");
    CHECK(rel_err(point_omega(p.spec), 0.2) < 1e-15);
}

TEST_CASE("limits section") {
    const ParsedConfig p = parse_config(
        "sweep.quantity = limit_report\nlimits.gamma_a = 1\nlimits.gamma_b = 1.3\n"
        "limits.gamma_int_a = 0.4\nlimits.gamma_int_b = 0.6\nlimits.g = 1e-3\nlimits.omega = 0.7\n");
    REQUIRE(p.spec.limits.has_value());
    CHECK(p.spec.limits->count == 4);
    CHECK(p.spec.limits->rates.gamma_b == 1.3);
    CHECK_THROWS_AS(parse_config("sweep.quantity = limit_report\nlimits.gamma_a = 1\nlimits.gamma_b = 1\n"
                                 "limits.count = 2\n"),
                    ValidationError);
}

}
