// Variation functional tests: discrete/continuous total variation, BV norms,
// q-variation, and Riesz partition sums, each checked against small
// hand-computed instances and brute-force refinements.

#include "maxlab/functions.hpp"
#include "maxlab/root_value.hpp"
#include "maxlab/variation.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

namespace {

using maxlab::DiscreteBVFunction;
using maxlab::IntervalZ;
using maxlab::PiecewiseLinearFunction;
using maxlab::Rational;
using maxlab::StepFunction;

Rational rat(long num, long den = 1) { return Rational(num) / Rational(den); }

// Direct scan oracle over a window wide enough to include every jump.
Rational var_discrete_scan(const DiscreteBVFunction<Rational>& f) {
    Rational total(0);
    for (long n = f.core_lo() - 3; n <= f.core_hi() + 2; ++n)
        total += maxlab::scalar_traits<Rational>::abs(f.evaluate(n + 1) - f.evaluate(n));
    return total;
}

double root_sum_value(const std::vector<maxlab::RootValue<Rational>>& terms) {
    double sum = 0;
    for (const auto& t : terms) sum += t.value();
    return sum;
}

} // namespace

TEST_CASE("discrete variation on pinned instances") {
    const auto delta = maxlab::delta_at_origin<Rational>();
    CHECK(maxlab::var_discrete(delta) == rat(2));
    CHECK(maxlab::bvnorm_discrete(delta) == rat(2));

    // 0, 1, 3, 2, 0: |1| + |2| + |1| + |2| = 6
    const DiscreteBVFunction<Rational> f(0, {rat(1), rat(3), rat(2)}, rat(0), rat(0));
    CHECK(maxlab::var_discrete(f) == rat(6));

    const DiscreteBVFunction<Rational> shelf(0, {rat(5)}, rat(2), rat(-1));
    CHECK(maxlab::var_discrete(shelf) == rat(9));
    CHECK(maxlab::bvnorm_discrete(shelf) == rat(11));

    CHECK(maxlab::var_discrete(DiscreteBVFunction<Rational>::constant(rat(7))) == rat(0));
}

TEST_CASE("windowed discrete variation counts only interior jumps") {
    const auto delta = maxlab::delta_at_origin<Rational>();
    CHECK(maxlab::var_discrete(delta, IntervalZ::closed(-1, 0)) == rat(1));
    CHECK(maxlab::var_discrete(delta, IntervalZ::closed(0, 1)) == rat(1));
    CHECK(maxlab::var_discrete(delta, IntervalZ::closed(-1, 1)) == rat(2));
    CHECK(maxlab::var_discrete(delta, IntervalZ::closed(2, 9)) == rat(0));
    CHECK(maxlab::var_discrete(delta, IntervalZ::from(0)) == rat(1));
    CHECK(maxlab::var_discrete(delta, IntervalZ::upto(0)) == rat(1));
    CHECK_THROWS_AS(IntervalZ::closed(2, 1), std::invalid_argument);
}

TEST_CASE("discrete variation agrees with a direct scan on random functions") {
    std::mt19937_64 rng(20260814);
    std::uniform_int_distribution<long> val(-5, 5);
    std::uniform_int_distribution<int> len(1, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> core;
        const int w = len(rng);
        core.reserve(w);
        for (int i = 0; i < w; ++i) core.push_back(rat(val(rng), 1 + trial % 3));
        const DiscreteBVFunction<Rational> f(-(w / 2), core, rat(val(rng)), rat(val(rng)));
        CHECK(maxlab::var_discrete(f) == var_discrete_scan(f));
    }
}

TEST_CASE("discrete q-variation") {
    const auto delta = maxlab::delta_at_origin<Rational>();
    // two unit jumps: (1^2 + 1^2)^(1/2) = sqrt(2)
    CHECK(maxlab::varq_discrete(delta, 2.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(maxlab::varq_discrete(delta, 1.0) == Catch::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(maxlab::varq_discrete(delta, 0.5), std::invalid_argument);

    const auto terms = maxlab::varq_discrete_terms(delta, 2, 1);
    REQUIRE(terms.size() == 2);
    CHECK(root_sum_value(terms) == Catch::Approx(2.0).epsilon(1e-14)); // sum of |jump|^q
}

TEST_CASE("step function variation") {
    const auto ind = StepFunction<Rational>::indicator(rat(0), rat(1), rat(3));
    CHECK(maxlab::var_continuous(ind) == rat(6));
    CHECK(maxlab::bvnorm_continuous(ind) == rat(6));

    const StepFunction<Rational> shelf({rat(0)}, {rat(2), rat(-1)});
    CHECK(maxlab::var_continuous(shelf) == rat(3));
    CHECK(maxlab::bvnorm_continuous(shelf) == rat(5));

    // window that sees only the first breakpoint
    const auto windowed =
        maxlab::var_continuous(ind, std::make_pair(rat(-1), rat(1, 2)));
    CHECK(windowed == rat(3));
}

TEST_CASE("piecewise linear variation") {
    const PiecewiseLinearFunction<Rational> tent({rat(0), rat(1), rat(2)},
                                                 {rat(0), rat(2), rat(0)});
    CHECK(maxlab::var_continuous(tent) == rat(4));
    CHECK(maxlab::bvnorm_continuous(tent) == rat(4));

    // clipped window [1/2, 3/2]: slope 2 on half a unit plus slope -2 on half
    const auto clipped = maxlab::var_continuous(tent, std::make_pair(rat(1, 2), rat(3, 2)));
    CHECK(clipped == rat(2));

    const PiecewiseLinearFunction<double> tent_d({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    CHECK(maxlab::var_continuous(tent_d) == 4.0);
}

TEST_CASE("riesz q-variation closed form for the tent") {
    const PiecewiseLinearFunction<double> tent({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    // (2^2 * 1 + 2^2 * 1)^(1/2) = sqrt(8)
    CHECK(maxlab::varq_riesz(tent, 2.0) == Catch::Approx(std::sqrt(8.0)).epsilon(1e-14));
    CHECK_THROWS_AS(maxlab::varq_riesz(tent, 1.0), std::invalid_argument);

    const PiecewiseLinearFunction<Rational> tent_q({rat(0), rat(1), rat(2)},
                                                   {rat(0), rat(2), rat(0)});
    const auto terms = maxlab::riesz_closed_form_terms(tent_q, 2, 1);
    REQUIRE(terms.size() == 2);
    CHECK(root_sum_value(terms) == Catch::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("partition sums never exceed the closed form") {
    const PiecewiseLinearFunction<double> tent({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    const double q = 2.0;
    const double closed = maxlab::varq_riesz(tent, q);
    for (int pieces : {3, 7, 19, 64}) {
        maxlab::SampledProfile<double> sample;
        for (int i = 0; i <= pieces; ++i) {
            const double x = 2.0 * i / pieces;
            sample.push(x, tent.evaluate(x));
        }
        const double partition = maxlab::varq_riesz(sample, q);
        CHECK(partition <= closed + 1e-12);
    }
    // refining through the nodes reproduces the closed form exactly
    maxlab::SampledProfile<double> nodes;
    for (double x : {0.0, 1.0, 2.0}) nodes.push(x, tent.evaluate(x));
    CHECK(maxlab::varq_riesz(nodes, q) == Catch::Approx(closed).epsilon(1e-14));
}

TEST_CASE("rational riesz partition terms compare exactly") {
    // samples of the tent at 0, 1/2, 1: terms (1/2)*(2)^2 each... dg=1, dx=1/2
    const std::vector<Rational> xs{rat(0), rat(1, 2), rat(1)};
    const std::vector<Rational> ys{rat(0), rat(1), rat(2)};
    const auto terms = maxlab::riesz_partition_terms<Rational>(xs, ys, 2, 1);
    REQUIRE(terms.size() == 2);
    // each term is |1|^2 / (1/2) = 2
    for (const auto& t : terms)
        CHECK(maxlab::RootValue<Rational>::compare(t, maxlab::RootValue<Rational>(rat(2))) == 0);
    CHECK_THROWS_AS(maxlab::riesz_partition_terms<Rational>(xs, ys, 1, 1),
                    std::invalid_argument);
}

TEST_CASE("variation of sampled values") {
    CHECK(maxlab::var_of_samples({1.0, 3.0, 2.0}) == 3.0);
    CHECK(maxlab::var_of_samples({}) == 0.0);
    CHECK(maxlab::var_of_samples({5.5}) == 0.0);
}
