#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ringpair/biphoton.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/sweep.hpp"
#include "support.hpp"

using namespace ringpair;
using testing::rel_err;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const std::string kSmall =
    "sweep.quantity = pair_rate_mrr\n"
    "sweep.symmetric = true\n"
    "signal.T = 1\n"
    "pump.r = 1e-5\n"
    "sweep.theta = 0.1\n"
    "axis1.name = rho\n"
    "axis1.values = 0.8, 0.95\n"
    "axis2.name = alpha\n"
    "axis2.values = 0.99, 0.97\n";

std::size_t column(const Dataset& d, const std::string& name) {
    for (std::size_t i = 0; i < d.columns.size(); ++i) {
        if (d.columns[i] == name) return i;
    }
    FAIL("no column " << name);
    return 0;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("2x2 sweep equals direct evaluation") {
    const SweepSpec spec = parse_config(kSmall).spec;
    const Dataset d = run_sweep(spec);
    REQUIRE(d.rows.size() == 4);
    const std::size_t k = column(d, "rate_tilde");
    std::size_t row = 0;
    for (double rho : {0.8, 0.95}) {
        for (double alpha : {0.99, 0.97}) {
            const SystemConfig c = symmetric_config(rho, alpha, 1e-5);
            const double ref = evaluate_rates(c, 0.1, Location::intracavity).psi2_sq;
            CHECK(d.rows[row][0] == rho);
            CHECK(d.rows[row][1] == alpha);
            CHECK(rel_err(d.rows[row][k], ref) < 1e-14);
            ++row;
        }
    }
    // spot value at (0.95, 0.97)
    CHECK(rel_err(d.rows[3][k], 35.626448869648450276) < 1e-10);
}

TEST_CASE("each grid point is independent of the rest of the grid") {
    const SweepSpec spec = parse_config(kSmall).spec;
    const Dataset d = run_sweep(spec);
    const PointResult p = evaluate_point(spec, {0.95, 0.99});
    for (std::size_t i = 0; i < p.values.size(); ++i) CHECK(d.rows[2][2 + i] == p.values[i]);
}

TEST_CASE("repeated runs are byte identical") {
    const SweepSpec spec = parse_config(kSmall).spec;
    CHECK(emit_csv(run_sweep(spec)) == emit_csv(run_sweep(spec)));
    CHECK(emit_json(run_sweep(spec)) == emit_json(run_sweep(spec)));
}

TEST_CASE("JSON round trip, including non-finite cells") {
    Dataset d = run_sweep(parse_config(kSmall).spec);
    d.rows[0][2] = std::nan("");
    d.rows[1][3] = std::numeric_limits<double>::infinity();
    d.summary["order_G"] = 1.0;
    const Dataset back = dataset_from_json(emit_json(d));
    CHECK(same_dataset(d, back));
    CHECK(back.config_hash == d.config_hash);
}

TEST_CASE("CSV layout") {
    const Dataset d = run_sweep(parse_config(kSmall).spec);
    const std::string csv = emit_csv(d);
    CHECK(csv.rfind("# config-hash: " + d.config_hash + "\n", 0) == 0);
    CHECK(csv.find("rho,alpha,rate_tilde,pair_rate,flags\n") != std::string::npos);
}

TEST_CASE("pole rows are flagged with empty cells") {
    const std::string text = "sweep.quantity = pair_rate_mrr\nsweep.symmetric = true\nsignal.T = 1\n"
                             "pump.r = 1e-5\nsignal.alpha = 0.95\naxis1.name = rho\naxis1.min = 0.5\n"
                             "axis1.max = 1\naxis1.count = 3\n";
    const Dataset d = run_sweep(parse_config(text).spec);
    CHECK((d.flags[2] & kRatePole) != 0);
    CHECK(std::isnan(d.rows[2][1]));
    CHECK(emit_csv(d).find("\n1,,,1\n") != std::string::npos);
}

TEST_CASE("value columns per quantity") {
    CHECK(value_columns(Quantity::populations).size() == 4);
    CHECK(value_columns(Quantity::transfer_entry).size() == 16);
    CHECK(value_columns(Quantity::commutators).size() == 4);
}

TEST_CASE("golden on-resonance dataset") {
    const std::string dir = RINGPAIR_SOURCE_DIR;
    const Dataset d = run_sweep(load_config(dir + "/configs/rate_vs_rho_resonance.cfg").spec);
    CHECK(emit_csv(d) == read_file(dir + "/tests/golden/rate_vs_rho_resonance.csv"));
}

TEST_CASE("rate is ordered in alpha at every rho") {
    const std::string dir = RINGPAIR_SOURCE_DIR;
    const Dataset d = run_sweep(load_config(dir + "/configs/rate_vs_rho_resonance.cfg").spec);
    const std::size_t n_alpha = 5;
    const std::size_t k = column(d, "rate_tilde");
    for (std::size_t i = 0; i + n_alpha <= d.rows.size(); i += n_alpha) {
        if (d.flags[i] != kRateOk) continue;
        for (std::size_t j = 1; j < n_alpha; ++j) CHECK(d.rows[i + j][k] < d.rows[i + j - 1][k]);
    }
}

TEST_CASE("CAR is flat in theta") {
    const std::string text = "sweep.quantity = car_mrr\nsweep.symmetric = true\nsignal.T = 1\n"
                             "pump.r = 1e-3\nsignal.alpha = 0.95\nsignal.rho = 0.9\naxis1.name = theta\n"
                             "axis1.min = -3.14159\naxis1.max = 3.14159\naxis1.count = 41\n";
    const Dataset d = run_sweep(parse_config(text).spec);
    const double ref = closed_form_car_symmetric(symmetric_config(0.9, 0.95, 1e-3));
    for (const auto& row : d.rows) CHECK(rel_err(row[1], ref) < 1e-10);
}

TEST_CASE("limits dataset") {
    LimitSpec l;
    l.rates.gamma_int_a = 0.4;
    l.rates.gamma_b = 1.3;
    l.rates.gamma_int_b = 0.6;
    l.rates.coupling = 1e-3;
    l.rates.omega = 0.7;
    const Dataset d = run_limits(l);
    CHECK(d.rows.size() == 4);
    CHECK(d.summary.count("order_G") == 1);
    CHECK(d.summary.at("monotone_G") == 1.0);
}

}
