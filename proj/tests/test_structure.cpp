// Structural analyzer tests: extrema strings, contact points, one-sided
// variation control, tail limits, maximizing radii, the derivative identity,
// and the disconnecting set, on pinned instances plus randomized exact fuzz.

#include "maxlab/structure.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

namespace {

using maxlab::Beta;
using maxlab::CheckStatus;
using maxlab::ControlCase;
using maxlab::DiscreteBVFunction;
using maxlab::OperatorVariant;
using maxlab::PiecewiseLinearFunction;
using maxlab::Rational;
using maxlab::RootValue;

using RV = RootValue<Rational>;

Rational rat(long num, long den = 1) { return Rational(num) / Rational(den); }

DiscreteBVFunction<Rational> random_function(std::mt19937_64& rng, bool zero_tails) {
    std::uniform_int_distribution<long> val(-4, 4);
    std::uniform_int_distribution<long> den(1, 2);
    std::uniform_int_distribution<int> width(1, 7);
    std::uniform_int_distribution<long> shift(-2, 2);
    const int w = width(rng);
    std::vector<Rational> core;
    core.reserve(w);
    for (int i = 0; i < w; ++i) core.push_back(rat(val(rng), den(rng)));
    const Rational lt = zero_tails ? rat(0) : rat(val(rng), den(rng));
    const Rational rt = zero_tails ? rat(0) : rat(val(rng), den(rng));
    return DiscreteBVFunction<Rational>(shift(rng), core, lt, rt);
}

} // namespace

TEST_CASE("extrema strings of the delta maximal profile") {
    const auto delta = maxlab::delta_at_origin<Rational>();
    const auto analysis = maxlab::maximal_extrema_strings(delta);
    CHECK_FALSE(analysis.constant);
    REQUIRE(analysis.strings.size() == 1);
    const auto& peak = analysis.strings.front();
    CHECK(peak.is_max);
    REQUIRE(peak.left.has_value());
    REQUIRE(peak.right.has_value());
    CHECK(*peak.left == 0);
    CHECK(*peak.right == 0);
    CHECK(RV::compare(peak.level, RV(rat(1))) == 0);
    CHECK(maxlab::strings_alternate(analysis));
}

TEST_CASE("extrema strings stay ordered and alternating on random input") {
    std::mt19937_64 rng(0x57a70001);
    for (int trial = 0; trial < 150; ++trial) {
        const auto f = random_function(rng, trial % 2 == 0);
        const auto analysis = maxlab::maximal_extrema_strings(f);
        CHECK(maxlab::strings_alternate(analysis));
        if (analysis.constant) CHECK(analysis.strings.empty());
    }
}

TEST_CASE("constant input yields the constant flag") {
    const auto f = DiscreteBVFunction<Rational>::constant(rat(3, 2));
    const auto analysis = maxlab::maximal_extrema_strings(f);
    CHECK(analysis.constant);
    CHECK(analysis.strings.empty());
}

TEST_CASE("maximal function touches the input at max-string endpoints") {
    const auto delta = maxlab::delta_at_origin<Rational>();
    const auto report = maxlab::check_contact(delta);
    CHECK(report.passed());
    REQUIRE(report.contact_points.size() == 1);
    CHECK(report.contact_points.front() == 0);

    std::mt19937_64 rng(0x57a70002);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = random_function(rng, trial % 2 == 0);
        CHECK(maxlab::check_contact(f).passed());
    }
}

TEST_CASE("one-sided variation control, delta instance") {
    const auto delta = maxlab::delta_at_origin<Rational>();
    const auto report = maxlab::one_sided_control_check(delta, 0);
    CHECK(report.applicable_case == ControlCase::right_of_min_string);
    CHECK(report.var_maximal == rat(1));
    CHECK(report.var_input == rat(1));
    CHECK(report.holds);
    CHECK(std::string(maxlab::control_case_name(report.applicable_case)) ==
          "right_of_min_string");
}

TEST_CASE("one-sided variation control never fails where it applies") {
    std::mt19937_64 rng(0x57a70003);
    std::uniform_int_distribution<long> point(-8, 8);
    int applicable = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = random_function(rng, trial % 2 == 0);
        const auto report = maxlab::one_sided_control_check(f, point(rng));
        if (report.applicable_case != ControlCase::not_applicable) {
            ++applicable;
            CHECK(report.holds);
        }
    }
    CHECK(applicable > 20); // the check must actually fire on random data
}

TEST_CASE("exact one-sided variation of the maximal function") {
    const auto delta = maxlab::delta_at_origin<Rational>();
    // profile is 1, 1/2, 1/3, ... from 0: total drop to the floor 0 is 1
    CHECK(maxlab::var_maximal_from(delta, 0) == rat(1));
    CHECK(maxlab::var_maximal_upto(delta, 0) == rat(1));
    // from 1: drop from 1/2 to 0
    CHECK(maxlab::var_maximal_from(delta, 1) == rat(1, 2));
}

TEST_CASE("tail limits and the global floor") {
    const auto delta = maxlab::delta_at_origin<Rational>();
    const auto r0 = maxlab::tail_limits(delta);
    CHECK(r0.left_limit == rat(0));
    CHECK(r0.right_limit == rat(0));
    CHECK(r0.floor_value == rat(0));
    CHECK(r0.min_bound_holds);
    CHECK(r0.far_field_matches);

    const DiscreteBVFunction<Rational> f(0, {rat(5)}, rat(-2), rat(1));
    const auto r1 = maxlab::tail_limits(f);
    CHECK(r1.left_limit == rat(2));
    CHECK(r1.right_limit == rat(1));
    CHECK(r1.floor_value == rat(2));
    CHECK(r1.min_bound_holds);
    CHECK(r1.far_field_matches);

    std::mt19937_64 rng(0x57a70004);
    for (int trial = 0; trial < 120; ++trial) {
        const auto g = random_function(rng, trial % 2 == 0);
        const auto rep = maxlab::tail_limits(g);
        CHECK(rep.min_bound_holds);
        CHECK(rep.far_field_matches);
    }
}

TEST_CASE("good radii of the tent") {
    const PiecewiseLinearFunction<double> tent({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});

    const auto at0 = maxlab::good_radii(tent, 0.0);
    CHECK(at0.value == Catch::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
    REQUIRE(at0.radii.size() == 1);
    CHECK(at0.radii.front() == Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));

    const auto at_peak = maxlab::good_radii(tent, 1.0);
    CHECK(at_peak.value == Catch::Approx(2.0).epsilon(1e-12));
    REQUIRE(at_peak.radii.size() == 1);
    CHECK(at_peak.radii.front() == 0.0); // shrinking-window limit

    CHECK_THROWS_AS(maxlab::good_radii(PiecewiseLinearFunction<double>({0.0, 1.0}, {0.0, 1.0}),
                                       0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(maxlab::good_radii(PiecewiseLinearFunction<double>({0.0, 1.0}, {0.0, 0.0}),
                                       0.0),
                    std::invalid_argument);
}

TEST_CASE("derivative identity on a fixed instance sweep") {
    const PiecewiseLinearFunction<double> tent({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    int passed = 0;
    for (const double x : {-1.5, -0.5, 0.3, 0.6, 1.3, 1.7, 2.5, 3.5}) {
        const auto report = maxlab::derivative_formula_check(tent, x);
        CHECK(report.status != CheckStatus::failed);
        if (report.status == CheckStatus::passed) {
            ++passed;
            REQUIRE_FALSE(report.formula_values.empty());
            for (const double v : report.formula_values)
                CHECK(v == Catch::Approx(report.derivative).margin(1e-4));
        }
    }
    CHECK(passed >= 5);
    CHECK(std::string(maxlab::check_status_name(CheckStatus::passed)) == "passed");
}

TEST_CASE("derivative identity holds on random instances") {
    std::mt19937_64 rng(0x57a70005);
    std::uniform_real_distribution<double> gap(0.4, 1.6);
    std::uniform_real_distribution<double> level(-2.5, 2.5);
    std::uniform_real_distribution<double> at(-2.0, 7.0);
    int passed = 0, applicable = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs{0.0};
        std::vector<double> ys{0.0};
        const int inner = 2 + trial % 3;
        for (int i = 0; i < inner; ++i) {
            xs.push_back(xs.back() + gap(rng));
            ys.push_back(level(rng));
        }
        xs.push_back(xs.back() + gap(rng));
        ys.push_back(0.0);
        const PiecewiseLinearFunction<double> f(xs, ys);
        const auto report = maxlab::derivative_formula_check(f, at(rng));
        if (report.status == CheckStatus::not_applicable) continue;
        ++applicable;
        if (report.status == CheckStatus::passed) ++passed;
    }
    REQUIRE(applicable > 10);
    CHECK(passed >= (applicable * 95 + 99) / 100);
}

TEST_CASE("disconnecting set of the tent") {
    const PiecewiseLinearFunction<double> tent({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    const auto report = maxlab::disconnecting_set(tent, -3.0, 5.0, 0.01);
    CHECK(report.passed());
    CHECK(report.d_interior_points > 0);
    CHECK(report.c_interior_points > 0);
    // strict inequality holds left of the peak and nowhere right of it
    REQUIRE(report.components.size() == 1);
    CHECK(report.components.front().first == Catch::Approx(-3.0).margin(0.02));
    CHECK(report.components.front().second == Catch::Approx(1.0).margin(0.05));

    CHECK_THROWS_AS(maxlab::disconnecting_set(tent, 2.0, -2.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(maxlab::disconnecting_set(tent, -1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("sign facts hold on random piecewise-linear instances") {
    std::mt19937_64 rng(0x57a70006);
    std::uniform_real_distribution<double> gap(0.5, 1.5);
    std::uniform_real_distribution<double> level(-2.0, 2.0);
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<double> xs{0.0};
        std::vector<double> ys{0.0};
        for (int i = 0; i < 3; ++i) {
            xs.push_back(xs.back() + gap(rng));
            ys.push_back(level(rng));
        }
        xs.push_back(xs.back() + gap(rng));
        ys.push_back(0.0);
        const PiecewiseLinearFunction<double> f(xs, ys);
        const auto report = maxlab::disconnecting_set(f, -2.0, xs.back() + 2.0, 0.02);
        CHECK(report.d_sign_violations == 0);
        CHECK(report.c_sign_violations == 0);
    }
}

TEST_CASE("instance digests and report envelopes") {
    const auto delta = maxlab::delta_at_origin<Rational>();
    const std::string d1 = maxlab::instance_digest(delta);
    const std::string d2 = maxlab::instance_digest(delta);
    CHECK(d1 == d2);
    CHECK(d1.size() == 16);
    CHECK(d1 != maxlab::instance_digest(DiscreteBVFunction<Rational>::constant(rat(0))));

    const auto j = maxlab::make_report_json("contact", d1, true, {});
    CHECK(j.at("check") == "contact");
    CHECK(j.at("verdict") == "pass");
    CHECK(j.at("violations").empty());
}
