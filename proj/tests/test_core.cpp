// Core scalar, root-value, function-class, and JSON round-trip tests.

#include "maxlab/functions.hpp"
#include "maxlab/json_io.hpp"
#include "maxlab/root_value.hpp"
#include "maxlab/scalar.hpp"

#include <catch2/catch_amalgamated.hpp>

namespace {

using maxlab::Beta;
using maxlab::BigInt;
using maxlab::DiscreteBVFunction;
using maxlab::PiecewiseLinearFunction;
using maxlab::Rational;
using maxlab::RootValue;
using maxlab::SignedRootSum;
using maxlab::StepFunction;

using RT = maxlab::scalar_traits<Rational>;

Rational rat(long num, long den = 1) { return Rational(num) / Rational(den); }

} // namespace

TEST_CASE("rational parse and print round-trip") {
    for (const std::string text : {"0", "-2", "3/4", "7/3", "-5/8", "1000000000000000000000/7"}) {
        const Rational v = RT::parse(text);
        CHECK(RT::to_string(v) == text);
    }
    CHECK(RT::parse("4/8") == rat(1, 2));
    CHECK(RT::parse("1/-2") == rat(-1, 2));
    CHECK_THROWS_AS(RT::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(RT::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(RT::parse("1.5"), std::invalid_argument);
}

TEST_CASE("subtraction of rationals stays in type") {
    // et_off matters: a - b must be Rational, not an expression template
    const Rational a = rat(3, 4), b = rat(1, 4);
    static_assert(std::is_same_v<decltype(a - b), Rational>);
    CHECK(a - b == rat(1, 2));
}

TEST_CASE("beta parsing accepts fractions and decimals") {
    CHECK(Beta::parse("0") == Beta(0, 1));
    CHECK(Beta::parse("1/2") == Beta(1, 2));
    CHECK(Beta::parse("0.25") == Beta(1, 4));
    CHECK(Beta::parse("0.75") == Beta(3, 4));
    CHECK(Beta::parse("2/4") == Beta(1, 2));
    CHECK_THROWS_AS(Beta::parse("1"), std::invalid_argument);
    CHECK_THROWS_AS(Beta::parse("-1/2"), std::invalid_argument);
    CHECK_THROWS_AS(Beta::parse("5/4"), std::invalid_argument);
}

TEST_CASE("beta exposes q = 1/(1 - beta)") {
    const Beta half(1, 2);
    CHECK(half.q_num() == 2);
    CHECK(half.q_den() == 1);
    CHECK(half.q_value() == 2.0);
    const Beta quarter(1, 4);
    CHECK(quarter.q_num() == 4);
    CHECK(quarter.q_den() == 3);
    const Beta three_quarters(3, 4);
    CHECK(three_quarters.q_value() == 4.0);
}

TEST_CASE("root values order exactly across indices") {
    using RV = RootValue<Rational>;
    const RV sqrt3(rat(1), rat(3), 2);
    const RV cbrt5(rat(1), rat(5), 3);
    // 3^(1/2) = 27^(1/6) > 25^(1/6) = 5^(1/3)
    CHECK(RV::compare(sqrt3, cbrt5) > 0);
    // 2^(1/2) = 8^(1/6)
    const RV sqrt2(rat(1), rat(2), 2);
    const RV sixth8(rat(1), rat(8), 6);
    CHECK(RV::compare(sqrt2, sixth8) == 0);
    // coefficients fold in: 2 * 2^(1/2) = 8^(1/2)
    const RV two_sqrt2(rat(2), rat(2), 2);
    const RV sqrt8(rat(1), rat(8), 2);
    CHECK(RV::compare(two_sqrt2, sqrt8) == 0);
    CHECK(RV::compare(RV(rat(1)), sqrt2) < 0);
}

TEST_CASE("window value mass * len^(beta - 1)") {
    using RV = RootValue<Rational>;
    // classical: plain average
    const RV avg = RV::window(rat(3), rat(2), Beta(0, 1));
    CHECK(RV::compare(avg, RV(rat(3, 2))) == 0);
    // beta = 1/2: 1 * 2^(-1/2)
    const RV half = RV::window(rat(1), rat(2), Beta(1, 2));
    CHECK(RV::compare(half, RV(rat(1), rat(1, 2), 2)) == 0);
    CHECK(half.value() == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    // beta = 3/4: len^(-1/4); 16^(-1/4) = 1/2
    const RV q = RV::window(rat(1), rat(16), Beta(3, 4));
    CHECK(RV::compare(q, RV(rat(1, 2))) == 0);
}

TEST_CASE("signed root sums detect exact cancellation") {
    using RV = RootValue<Rational>;
    using Sum = SignedRootSum<Rational>;
    // 2^(1/2) + 2^(1/2) - 8^(1/2) = 0
    Sum s;
    s.pos.push_back(RV(rat(1), rat(2), 2));
    s.pos.push_back(RV(rat(1), rat(2), 2));
    s.neg.push_back(RV(rat(1), rat(8), 2));
    CHECK(s.sign() == 0);

    // sqrt(2) - 1 > 0 and 1 - sqrt(2) < 0
    Sum pos = Sum::difference(RV(rat(1), rat(2), 2), RV(rat(1)));
    CHECK(pos.sign() > 0);
    Sum neg = Sum::difference(RV(rat(1)), RV(rat(1), rat(2), 2));
    CHECK(neg.sign() < 0);
}

TEST_CASE("discrete functions canonicalize and evaluate") {
    // leading/trailing samples equal to the tails are absorbed
    const DiscreteBVFunction<Rational> f(-2, {rat(5), rat(5), rat(1), rat(3), rat(3)}, rat(5),
                                         rat(3));
    CHECK(f.core_lo() == 0);
    CHECK(f.core_hi() == 0);
    CHECK(f.evaluate(-10) == rat(5));
    CHECK(f.evaluate(0) == rat(1));
    CHECK(f.evaluate(7) == rat(3));

    const auto delta = maxlab::delta_at_origin<Rational>();
    CHECK(delta.evaluate(0) == rat(1));
    CHECK(delta.evaluate(1) == rat(0));
    CHECK(delta == DiscreteBVFunction<Rational>(0, {rat(1)}, rat(0), rat(0)));
}

TEST_CASE("discrete arithmetic aligns cores") {
    const DiscreteBVFunction<Rational> f(0, {rat(1), rat(2)}, rat(0), rat(0));
    const DiscreteBVFunction<Rational> g(1, {rat(10)}, rat(0), rat(4));
    const auto sum = f + g;
    CHECK(sum.evaluate(0) == rat(1));
    CHECK(sum.evaluate(1) == rat(12));
    CHECK(sum.evaluate(2) == rat(4));
    CHECK(sum.right_tail() == rat(4));

    const auto diff = f - f;
    CHECK(diff == DiscreteBVFunction<Rational>::constant(rat(0)));

    const DiscreteBVFunction<Rational> h(0, {rat(-3)}, rat(0), rat(0));
    CHECK(h.abs().evaluate(0) == rat(3));
    CHECK(h.reflected().evaluate(0) == rat(-3));

    const DiscreteBVFunction<Rational> asym(0, {rat(1), rat(2)}, rat(-1), rat(7));
    const auto r = asym.reflected();
    CHECK(r.left_tail() == rat(7));
    CHECK(r.right_tail() == rat(-1));
    CHECK(r.evaluate(0) == rat(1));
    CHECK(r.evaluate(-1) == rat(2));
    CHECK(r.reflected() == asym);
}

TEST_CASE("add_indicator bumps a closed integer range") {
    const auto zero = DiscreteBVFunction<Rational>::constant(rat(0));
    const auto f = maxlab::add_indicator(zero, -1, 2, rat(1, 4));
    CHECK(f.evaluate(-2) == rat(0));
    CHECK(f.evaluate(-1) == rat(1, 4));
    CHECK(f.evaluate(2) == rat(1, 4));
    CHECK(f.evaluate(3) == rat(0));
    CHECK_THROWS_AS(maxlab::add_indicator(zero, 2, 1, rat(1)), std::invalid_argument);
}

TEST_CASE("step functions merge equal pieces and evaluate right-continuously") {
    const StepFunction<Rational> f({rat(0), rat(1), rat(2)}, {rat(0), rat(3), rat(3), rat(0)});
    CHECK(f.piece_count() == 3); // the two equal middle pieces merged
    CHECK(f.evaluate(rat(-1)) == rat(0));
    CHECK(f.evaluate(rat(0)) == rat(3));
    CHECK(f.evaluate(rat(3, 2)) == rat(3));
    CHECK(f.evaluate(rat(2)) == rat(0));

    const auto ind = StepFunction<Rational>::indicator(rat(0), rat(1), rat(2));
    CHECK(ind.evaluate(rat(1, 2)) == rat(2));
    CHECK_THROWS_AS(StepFunction<Rational>::indicator(rat(1), rat(1), rat(2)),
                    std::invalid_argument);

    const auto sum = ind + StepFunction<Rational>::indicator(rat(1, 2), rat(2), rat(1));
    CHECK(sum.evaluate(rat(1, 4)) == rat(2));
    CHECK(sum.evaluate(rat(3, 4)) == rat(3));
    CHECK(sum.evaluate(rat(3, 2)) == rat(1));
}

TEST_CASE("piecewise linear evaluation and zero-tail detection") {
    const PiecewiseLinearFunction<double> tent({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    CHECK(tent.has_zero_tails());
    CHECK(tent.evaluate(0.5) == 1.0);
    CHECK(tent.evaluate(1.0) == 2.0);
    CHECK(tent.evaluate(1.75) == 0.5);
    CHECK(tent.evaluate(-3.0) == 0.0);

    const auto scaled = tent.scaled(0.5);
    CHECK(scaled.evaluate(1.0) == 1.0);
    const auto sum = tent + scaled;
    CHECK(sum.evaluate(1.0) == 3.0);

    const PiecewiseLinearFunction<double> vee({-1.0, 0.0, 1.0}, {1.0, -1.0, 1.0});
    const auto av = vee.abs();
    CHECK(av.evaluate(-0.5) == 0.0); // node inserted at the sign crossing
    CHECK(av.evaluate(-0.75) == 0.5);
    CHECK(av.evaluate(0.0) == 1.0);
    CHECK_FALSE(av.has_zero_tails());

    CHECK_THROWS_AS(PiecewiseLinearFunction<double>({1.0, 0.0}, {0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("json round-trips every function kind in both modes") {
    const DiscreteBVFunction<Rational> d(-1, {rat(1), rat(-2, 3)}, rat(1, 7), rat(0));
    CHECK(maxlab::discrete_from_json<Rational>(maxlab::to_json(d)) == d);

    const StepFunction<Rational> s({rat(0), rat(3, 2)}, {rat(0), rat(5, 4), rat(0)});
    CHECK(maxlab::step_from_json<Rational>(maxlab::to_json(s)) == s);

    const PiecewiseLinearFunction<double> p({0.0, 0.5, 2.0}, {0.0, 1.25, 0.0});
    const auto p2 = maxlab::pwl_from_json<double>(maxlab::to_json(p));
    CHECK(p2.node_x() == p.node_x());
    CHECK(p2.node_y() == p.node_y());

    const auto loaded = maxlab::function_from_json<Rational>(maxlab::to_json(d));
    REQUIRE(loaded.discrete.has_value());
    CHECK(loaded.kind() == "discrete");
    CHECK(*loaded.discrete == d);
}

TEST_CASE("json rejects mode mismatches and malformed input") {
    const DiscreteBVFunction<Rational> d(0, {rat(1)}, rat(0), rat(0));
    auto j = maxlab::to_json(d);
    CHECK_THROWS_AS(maxlab::discrete_from_json<double>(j), std::invalid_argument);
    j["kind"] = "nonsense";
    CHECK_THROWS_AS(maxlab::function_from_json<Rational>(j), std::invalid_argument);
    CHECK_THROWS_AS(maxlab::scalar_from_json<Rational>(maxlab::Json(1.5)),
                    std::invalid_argument);
}

TEST_CASE("operator variants guard the one-sided combination") {
    using maxlab::OperatorVariant;
    using maxlab::Side;
    CHECK_NOTHROW(OperatorVariant::one_sided(Side::right));
    CHECK_THROWS_AS(OperatorVariant(true, Beta(0, 1), Side::left), std::invalid_argument);
    CHECK_THROWS_AS(OperatorVariant(false, Beta(1, 2), Side::right), std::invalid_argument);
    CHECK(OperatorVariant::centered_op(Beta(1, 2)).centered);
    CHECK(OperatorVariant::uncentered().beta.is_zero());
}

TEST_CASE("bigint integer kth roots") {
    CHECK(maxlab::kth_root_floor(BigInt(26), 2) == BigInt(5));
    CHECK(maxlab::kth_root_floor(BigInt(27), 3) == BigInt(3));
    CHECK(maxlab::kth_root_floor(BigInt(26), 3) == BigInt(2));
}
