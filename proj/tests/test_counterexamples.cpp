// Record-search and construction tests: frozen h chains, exact tie
// rejections, binary-search vs linear-scan agreement, builder shapes, and the
// optimizer-backed verification verdicts.

#include "maxlab/counterexamples.hpp"

#include <catch2/catch_amalgamated.hpp>

namespace {

using maxlab::Beta;
using maxlab::Rational;
using maxlab::RecordFamily;
using maxlab::RecordFunction;
using maxlab::RootValue;

using RV = RootValue<Rational>;

Rational rat(long num, long den = 1) { return Rational(num) / Rational(den); }

} // namespace

TEST_CASE("record function guards") {
    CHECK_THROWS_AS(RecordFunction(RecordFamily::L_uncentered_discrete, 0, Beta(1, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(RecordFunction(RecordFamily::L_uncentered_discrete, 1, Beta(0, 1)),
                    std::invalid_argument);
    const RecordFunction l(RecordFamily::L_uncentered_discrete, 1, Beta(1, 2));
    CHECK_THROWS_AS(l(-1), std::invalid_argument);
    const RecordFunction fc(RecordFamily::F_uncentered_continuous, 1, Beta(1, 2));
    CHECK_THROWS_AS(fc(0), std::invalid_argument);
    CHECK_THROWS_AS(maxlab::first_strict_record(fc, 0), std::invalid_argument);
}

TEST_CASE("exact ties never count as records") {
    const Beta half(1, 2);

    // discrete uncentered family at j = 1: value 3/2 at both 0 and 3
    const RecordFunction l(RecordFamily::L_uncentered_discrete, 1, half);
    CHECK(RV::compare(l(0), RV(rat(3, 2))) == 0);
    CHECK(RV::compare(l(3), l(0)) == 0);
    CHECK(maxlab::first_strict_record(l, 0) == 4);
    CHECK(maxlab::first_strict_record_by_scan(l, 0) == 4);

    // continuous uncentered: 3/2 at both 1 and 4
    const RecordFunction f3(RecordFamily::F_uncentered_continuous, 1, half);
    CHECK(RV::compare(f3(1), RV(rat(3, 2))) == 0);
    CHECK(RV::compare(f3(4), f3(1)) == 0);

    // continuous centered: 3/(2 sqrt 2) at both 1 and 4
    const RecordFunction f4(RecordFamily::F_centered_continuous, 1, half);
    CHECK(RV::compare(f4(1), RV(rat(3, 2), rat(1, 2), 2)) == 0);
    CHECK(RV::compare(f4(4), f4(1)) == 0);

    // discrete centered: F ties 3/2 at 0 and 12, G ties 2 at 0 and 24
    const RecordFunction f6(RecordFamily::F_centered_discrete, 1, half);
    CHECK(RV::compare(f6(0), RV(rat(3, 2))) == 0);
    CHECK(RV::compare(f6(12), f6(0)) == 0);
    const RecordFunction g6(RecordFamily::G_centered_discrete, 1, half);
    CHECK(RV::compare(g6(0), RV(rat(2))) == 0);
    CHECK(RV::compare(g6(24), g6(0)) == 0);
}

TEST_CASE("binary record search agrees with the literal scan") {
    for (const Beta beta : {Beta(1, 2), Beta(1, 4), Beta(3, 4)}) {
        for (long j = 1; j <= 3; ++j) {
            for (const RecordFamily fam :
                 {RecordFamily::L_uncentered_discrete, RecordFamily::F_centered_discrete,
                  RecordFamily::G_centered_discrete}) {
                const RecordFunction rf(fam, j, beta);
                const long fast = maxlab::first_strict_record(rf, 0);
                const long slow = maxlab::first_strict_record_by_scan(rf, 0);
                CHECK(fast == slow);
                // lower bounds push the answer strictly past them
                const long bounded = maxlab::first_strict_record(rf, fast + 5);
                CHECK(bounded > fast + 5);
            }
        }
    }
}

TEST_CASE("frozen h chains at beta = 1/2") {
    const Beta half(1, 2);
    CHECK(maxlab::h_sequence_thm5(half, 6) == std::vector<long>{4, 16, 36, 64, 100, 144});
    CHECK(maxlab::h_sequence_thm3(half, 10) ==
          std::vector<long>{5, 17, 37, 65, 101, 145, 197, 257, 325, 401});
    CHECK(maxlab::h_sequence_thm6(half, 4) == std::vector<long>{26, 62, 114, 182});
    CHECK(maxlab::h_sequence_thm4(half, 4) == std::vector<long>{11, 21, 37, 65});
}

TEST_CASE("h chains are strictly increasing for every admissible beta") {
    for (const Beta beta : {Beta(1, 4), Beta(1, 2), Beta(3, 4)}) {
        for (const auto& hs :
             {maxlab::h_sequence_thm5(beta, 5), maxlab::h_sequence_thm6(beta, 5),
              maxlab::h_sequence_thm3(beta, 5), maxlab::h_sequence_thm4(beta, 5)}) {
            REQUIRE(hs.size() == 5);
            for (std::size_t i = 0; i + 1 < hs.size(); ++i) CHECK(hs[i] < hs[i + 1]);
            CHECK(hs.front() >= 1);
        }
    }
}

TEST_CASE("builders produce the advertised perturbations") {
    const auto d = maxlab::build_discrete_counterexample(2, 16);
    CHECK(d.h == 16);
    CHECK(d.perturbed.evaluate(0) == rat(5, 4));  // 1 + 1/4
    CHECK(d.perturbed.evaluate(16) == rat(1, 4));
    CHECK(d.perturbed.evaluate(17) == rat(0));
    CHECK(d.perturbed.evaluate(-1) == rat(0));
    CHECK(maxlab::bvnorm_discrete(d.perturbed - d.base) == rat(1, 2));
    CHECK_THROWS_AS(maxlab::build_discrete_counterexample(1, 2000000), std::length_error);

    const auto c = maxlab::build_continuous_counterexample(2, 5);
    CHECK(c.h == 5);
    CHECK(c.perturbed.evaluate(rat(1, 2)) == rat(5, 4));
    CHECK(c.perturbed.evaluate(rat(3)) == rat(1, 4));
    CHECK(c.perturbed.evaluate(rat(6)) == rat(0));
}

TEST_CASE("verification verdicts pass at beta = 1/2") {
    const Beta half(1, 2);
    for (long j = 1; j <= 3; ++j) {
        for (const std::string setting : {"thm3", "thm4", "thm5", "thm6"}) {
            const auto v = maxlab::verify_setting(setting, j, half);
            INFO(setting << " j=" << j << ": "
                         << (v.failures.empty() ? "ok" : v.failures.front()));
            CHECK(v.verified);
            CHECK_FALSE(v.skipped);
            CHECK(v.failures.empty());
            CHECK(v.bv_distance == rat(1, j));
        }
    }
}

TEST_CASE("verification verdicts pass at other fractional exponents") {
    for (const std::string setting : {"thm3", "thm4", "thm6"}) {
        for (long j = 1; j <= 2; ++j) {
            const auto a = maxlab::verify_setting(setting, j, Beta(1, 4));
            INFO(setting << " beta=1/4 j=" << j << ": "
                         << (a.failures.empty() ? "ok" : a.failures.front()));
            CHECK(a.verified);
            const auto b = maxlab::verify_setting(setting, j, Beta(3, 4));
            INFO(setting << " beta=3/4 j=" << j << ": "
                         << (b.failures.empty() ? "ok" : b.failures.front()));
            CHECK(b.verified);
        }
    }
    // the uncentered discrete search is quadratic in h, so keep h small here
    const auto v14 = maxlab::verify_setting("thm5", 1, Beta(1, 4));
    CHECK(v14.verified);
    const auto v34 = maxlab::verify_setting("thm5", 2, Beta(3, 4));
    CHECK(v34.verified);
}

TEST_CASE("oversized cores are skipped, not verified") {
    const auto v = maxlab::verify_setting("thm5", 3, Beta(1, 2), 10);
    CHECK(v.skipped);
    CHECK_FALSE(v.verified);
    CHECK_FALSE(v.skip_reason.empty());
    CHECK(v.h == 36);
    CHECK(v.failures.empty());
}

TEST_CASE("derivative gaps carry the expected constants at beta = 1/2") {
    const Beta half(1, 2);
    const double gap_2 = 1.0 - std::pow(2.0, -0.5); // 0.2928932...
    const double gap_4_2 = std::pow(2.0, -0.5) - 0.5;

    const auto t5 = maxlab::reproduce_rows("thm5", half, 4);
    const auto t3 = maxlab::reproduce_rows("thm3", half, 4);
    for (const auto& row : t5) CHECK(row.derivative_gap == Catch::Approx(gap_2).epsilon(1e-14));
    for (const auto& row : t3) CHECK(row.derivative_gap == Catch::Approx(gap_2).epsilon(1e-14));

    // centered settings approach their base slopes from above as j grows
    const auto t6 = maxlab::reproduce_rows("thm6", half, 6);
    const double base_3 = 1.0 - std::pow(3.0, -0.5); // 0.4226497...
    for (std::size_t i = 0; i < t6.size(); ++i) {
        CHECK(t6[i].derivative_gap > base_3);
        if (i > 0) CHECK(t6[i].derivative_gap < t6[i - 1].derivative_gap);
    }

    const auto t4 = maxlab::reproduce_rows("thm4", half, 6);
    for (std::size_t i = 0; i < t4.size(); ++i) {
        CHECK(t4[i].derivative_gap > gap_4_2);
        if (i > 0) CHECK(t4[i].derivative_gap < t4[i - 1].derivative_gap);
    }
}

TEST_CASE("reproduce rows mirror the closed forms") {
    const Beta half(1, 2);
    const auto rows = maxlab::reproduce_rows("thm5", half, 6);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        CHECK(row.setting == "thm5");
        CHECK(row.beta_str == "1/2");
        CHECK(row.j == static_cast<long>(i) + 1);
        CHECK(row.h == 4 * row.j * row.j);
        const RecordFunction rf(RecordFamily::L_uncentered_discrete, row.j, half);
        CHECK(row.value_at_0 == Catch::Approx(rf(row.h).value()).epsilon(1e-14));
        CHECK(row.value_at_1_or_2 == row.value_at_0);
        CHECK(row.bv_distance == Catch::Approx(1.0 / row.j).epsilon(1e-14));
    }
    CHECK_THROWS_AS(maxlab::reproduce_rows("thm9", half, 2), std::invalid_argument);
}

TEST_CASE("flat-spot values exceed the base values by a bounded-away gap") {
    // value_at_0 of the perturbed function stays >= 1 + something; what the
    // continuity obstruction needs is that the perturbed maximal value at the
    // probe point moved by ~ the full derivative gap although the input moved
    // by only 1/j in norm.
    const Beta half(1, 2);
    for (long j = 1; j <= 6; ++j) {
        const auto v = maxlab::verify_thm3(j, half);
        REQUIRE(v.verified);
        CHECK(v.varq_lower_bound >= 0.207);
        CHECK(v.value_at_0 > 1.0);
        CHECK(v.value_at_0 == v.value_at_probe);
    }
}
