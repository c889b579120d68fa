#pragma once

// Convergence demonstrations, inequality fuzzing, open-question probes, and
// the deterministic random instance generator.
//
// Everything here is reproducible: random instances come from an explicit
// splitmix64 stream (identical seed + spec => identical function), parallel
// execution writes results keyed by index, and report serialization is
// byte-stable so identical runs produce identical files. Verdicts follow
// fixed, published decision rules restated in each report; the thresholds
// are desk-scale conventions, not quantities from the underlying theory.

#include "maxlab/counterexamples.hpp"
#include "maxlab/functions.hpp"
#include "maxlab/json_io.hpp"
#include "maxlab/maximal_continuous.hpp"
#include "maxlab/maximal_discrete.hpp"
#include "maxlab/scalar.hpp"
#include "maxlab/structure.hpp"
#include "maxlab/tail_analysis.hpp"
#include "maxlab/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace maxlab {

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64): implementation-defined std:: distributions
// would break cross-platform reproducibility of reports.
// ---------------------------------------------------------------------------

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi]; modulo bias is irrelevant at these range sizes and
    // keeps the stream layout trivial to document.
    long next_in(long lo, long hi) {
        if (lo > hi) throw std::invalid_argument("SplitMix64::next_in: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next() % span);
    }
};

// Stream for trial k of a run seeded with `seed`, independent of how trials
// are scheduled across threads.
inline SplitMix64 trial_stream(std::uint64_t seed, long trial) {
    SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(trial + 1)));
    mixer.next();
    return mixer;
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

struct RandomBVSpec {
    std::uint64_t seed = 1;
    long width_min = 1;
    long width_max = 12;
    long numerator_max = 8; // values are k / value_den with |k| <= numerator_max
    long value_den = 4;
    Rational tail_left = Rational(0);
    Rational tail_right = Rational(0);

    void validate() const {
        if (width_min < 1 || width_max < width_min)
            throw std::invalid_argument("RandomBVSpec: empty width range");
        if (numerator_max < 0 || value_den < 1)
            throw std::invalid_argument("RandomBVSpec: empty value range");
    }
};

inline DiscreteBVFunction<Rational> random_bv(const RandomBVSpec& spec) {
    spec.validate();
    SplitMix64 gen(spec.seed);
    const long width = gen.next_in(spec.width_min, spec.width_max);
    std::vector<Rational> core;
    core.reserve(static_cast<std::size_t>(width));
    for (long i = 0; i < width; ++i) {
        const long numer = gen.next_in(-spec.numerator_max, spec.numerator_max);
        core.push_back(Rational(numer) / Rational(spec.value_den));
    }
    const long lo = -width / 2;
    return DiscreteBVFunction<Rational>(lo, std::move(core), spec.tail_left, spec.tail_right);
}

inline StepFunction<Rational> random_step(const RandomBVSpec& spec) {
    spec.validate();
    SplitMix64 gen(spec.seed);
    const long pieces = gen.next_in(spec.width_min, spec.width_max);
    // breakpoints on the quarter-integer grid, strictly increasing
    std::vector<Rational> bps;
    Rational x = Rational(-pieces) / Rational(2);
    for (long i = 0; i <= pieces; ++i) {
        x = x + Rational(gen.next_in(1, 4)) / Rational(4);
        bps.push_back(x);
    }
    std::vector<Rational> vals;
    vals.push_back(spec.tail_left);
    for (long i = 1; i < static_cast<long>(bps.size()); ++i) {
        const long numer = gen.next_in(-spec.numerator_max, spec.numerator_max);
        vals.push_back(Rational(numer) / Rational(spec.value_den));
    }
    vals.push_back(spec.tail_right);
    return StepFunction<Rational>(std::move(bps), std::move(vals));
}

// Piecewise-linear analogue with zero tails (the W^{1,1}-style experiments
// require them), nodes on a rational grid mapped to float64.
inline PiecewiseLinearFunction<double> random_pwl(const RandomBVSpec& spec) {
    spec.validate();
    SplitMix64 gen(spec.seed);
    const long segments = std::max<long>(2, gen.next_in(spec.width_min, spec.width_max));
    std::vector<double> xs, ys;
    double x = -static_cast<double>(segments) / 2.0;
    xs.push_back(x);
    ys.push_back(0.0);
    for (long i = 1; i < segments; ++i) {
        x += static_cast<double>(gen.next_in(1, 4)) / 4.0;
        xs.push_back(x);
        ys.push_back(static_cast<double>(gen.next_in(-spec.numerator_max, spec.numerator_max)) /
                     static_cast<double>(spec.value_den));
    }
    x += static_cast<double>(gen.next_in(1, 4)) / 4.0;
    xs.push_back(x);
    ys.push_back(0.0);
    return PiecewiseLinearFunction<double>(std::move(xs), std::move(ys));
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ExperimentReport {
    std::string name;
    // insertion-ordered key/value metadata (seed, beta, grid step, ranges...)
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows; // ordered by j / trial
    std::string verdict;
    std::string decision_rule;
    std::vector<std::string> notes;

    void add_parameter(const std::string& key, const std::string& value) {
        parameters.emplace_back(key, value);
    }
    void add_parameter(const std::string& key, double value) {
        parameters.emplace_back(key, format_double(value));
    }
    void add_parameter(const std::string& key, long value) {
        parameters.emplace_back(key, std::to_string(value));
    }

    static std::string format_double(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    std::string to_csv() const {
        std::string out;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ",";
            out += columns[c];
        }
        out += "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ",";
                out += format_double(row[c]);
            }
            out += "\n";
        }
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json params = nlohmann::json::object();
        for (const auto& [k, v] : parameters) params[k] = v;
        return nlohmann::json{{"name", name},
                              {"parameters", params},
                              {"columns", columns},
                              {"rows", rows},
                              {"verdict", verdict},
                              {"decision_rule", decision_rule},
                              {"notes", notes}};
    }
};

// {name}-{seed}-{timestamp}.{ext}; the timestamp is injectable so tests can
// demand byte-identical artifacts.
inline std::string report_basename(const ExperimentReport& report, const std::string& timestamp) {
    std::string seed = "0";
    for (const auto& [k, v] : report.parameters)
        if (k == "seed") seed = v;
    return report.name + "-" + seed + "-" + timestamp;
}

inline std::pair<std::string, std::string> write_report_files(const ExperimentReport& report,
                                                              const std::string& directory,
                                                              const std::string& timestamp) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    const std::string base = (fs::path(directory) / report_basename(report, timestamp)).string();
    const std::string csv_path = base + ".csv";
    const std::string json_path = base + ".json";
    std::ofstream csv(csv_path);
    csv << report.to_csv();
    std::ofstream js(json_path);
    js << report.to_json().dump(2) << "\n";
    return {csv_path, json_path};
}

// Published convergence rule (desk-scale convention): converges iff the last
// distance is below the threshold and the second half of the sequence is
// non-increasing; diverges iff the last distance is >= 10x threshold, not
// below the first, and the second half is non-decreasing; else inconclusive.
inline std::string convergence_verdict(const std::vector<double>& distances, double threshold) {
    if (distances.empty()) return "inconclusive";
    const std::size_t n = distances.size();
    const std::size_t start = n / 2;
    bool tail_down = true, tail_up = true;
    for (std::size_t i = start + 1; i < n; ++i) {
        if (distances[i] > distances[i - 1] + 1e-15) tail_down = false;
        if (distances[i] < distances[i - 1] - 1e-15) tail_up = false;
    }
    if (distances.back() < threshold && tail_down) return "converges";
    if (distances.back() >= 10 * threshold && tail_up && distances.back() >= distances.front())
        return "diverges";
    return "inconclusive";
}

inline std::string convergence_rule_text(double threshold) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "converges iff final distance < %g and the second half of the sequence is "
                  "non-increasing; diverges iff final >= %g, >= first, and the second half is "
                  "non-decreasing; otherwise inconclusive. Thresholds are artifact conventions.",
                  threshold, 10 * threshold);
    return buf;
}

// ---------------------------------------------------------------------------
// Deterministic parallelism: tasks write into index-keyed slots, so the
// result is independent of scheduling. Thread count from MAXLAB_THREADS.
// ---------------------------------------------------------------------------

namespace detail {

inline long thread_budget() {
    if (const char* env = std::getenv("MAXLAB_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return std::min<long>(n, 64);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min<long>(static_cast<long>(hw), 8);
}

template <class Fn>
void parallel_for(long count, Fn&& fn) {
    const long threads = std::min<long>(thread_budget(), std::max<long>(count, 1));
    if (threads <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    pool.reserve(static_cast<std::size_t>(threads));
    for (long t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (long i = t; i < count; i += threads) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Theorem-2-style discrete convergence runs (classical uncentered operator,
// exact distances through the certified difference engine).
// ---------------------------------------------------------------------------

struct DiscreteConvergenceCase {
    std::string label;
    DiscreteBVFunction<Rational> base;
    std::function<DiscreteBVFunction<Rational>(long)> offset; // j -> g_j
};

inline ExperimentReport converge_thm2(const DiscreteBVFunction<Rational>& f,
                                      const std::function<DiscreteBVFunction<Rational>(long)>& offset,
                                      long j_max, const std::string& label = "discrete") {
    if (j_max < 1) throw std::invalid_argument("converge_thm2: j_max must be positive");
    const Rational var_mf = exact_var_of_maximal(f, false);

    struct RowData {
        double bv_distance, dist_var, var_gap, sup_diff, bl_residual, uniform_ok;
    };
    std::vector<RowData> data(static_cast<std::size_t>(j_max));
    detail::parallel_for(j_max, [&](long idx) {
        const long j = idx + 1;
        const auto g = offset(j);
        const Rational bound = Rational(1) / Rational(j);
        const Rational bv = bvnorm_discrete(g);
        // the family contract is bvnorm(g_j) = 1/j; smaller (including zero)
        // perturbations are accepted, larger ones are a caller error
        if (bv > bound) throw std::invalid_argument("converge_thm2: perturbation norm mismatch");
        const auto fj = f + g;
        const auto stats = exact_difference_stats(fj, f, false);
        const Rational var_mfj = exact_var_of_maximal(fj, false);
        const Rational gap_exact =
            var_mfj > var_mf ? Rational(var_mfj - var_mf) : Rational(var_mf - var_mfj);
        const Rational residual_base = var_mfj - stats.variation - var_mf;
        const Rational residual =
            residual_base < Rational(0) ? Rational(-residual_base) : residual_base;
        RowData& row = data[static_cast<std::size_t>(idx)];
        row.bv_distance = scalar_traits<Rational>::to_double(bv);
        row.dist_var = scalar_traits<Rational>::to_double(stats.variation);
        row.var_gap = scalar_traits<Rational>::to_double(gap_exact);
        row.sup_diff = scalar_traits<Rational>::to_double(stats.sup_abs);
        row.bl_residual = scalar_traits<Rational>::to_double(residual);
        row.uniform_ok = stats.sup_abs <= bv ? 1.0 : 0.0;
    });

    ExperimentReport report;
    report.name = "converge-thm2";
    report.add_parameter("family", label);
    report.add_parameter("beta", std::string("0"));
    report.add_parameter("operator", std::string("uncentered discrete"));
    report.add_parameter("j_max", j_max);
    report.add_parameter("var_maximal_base",
                         scalar_traits<Rational>::to_double(var_mf));
    report.columns = {"j",        "bv_distance", "dist_var",    "var_gap",
                      "sup_diff", "bl_residual", "uniform_ok"};
    std::vector<double> distances;
    for (long idx = 0; idx < j_max; ++idx) {
        const RowData& row = data[static_cast<std::size_t>(idx)];
        report.rows.push_back({static_cast<double>(idx + 1), row.bv_distance, row.dist_var,
                               row.var_gap, row.sup_diff, row.bl_residual, row.uniform_ok});
        distances.push_back(row.dist_var);
    }
    report.verdict = convergence_verdict(distances, 1e-3);
    report.decision_rule = convergence_rule_text(1e-3);
    return report;
}

// Default cases: exactly analyzable fast-converging families with
// bvnorm(g_j) = 1/j. Constant shifts and scalings commute with the classical
// operator on nonnegative input, so distances and residuals are exact small
// rationals (zero for the pure shift).
inline std::vector<DiscreteConvergenceCase> default_thm2_cases() {
    std::vector<DiscreteConvergenceCase> cases;
    const auto delta = delta_at_origin<Rational>();
    cases.push_back({"delta-shift", delta, [](long j) {
                         return DiscreteBVFunction<Rational>::constant(Rational(1) / Rational(j));
                     }});
    cases.push_back({"delta-spike-shift", delta, [](long j) {
                         auto g = DiscreteBVFunction<Rational>::constant(Rational(199) /
                                                                         Rational(200 * j));
                         return add_indicator(g, 0, 0, Rational(1) / Rational(400 * j));
                     }});
    std::vector<Rational> hat_values = {Rational(1), Rational(2), Rational(3), Rational(2),
                                        Rational(1)};
    const DiscreteBVFunction<Rational> hat(-2, hat_values, Rational(0), Rational(0));
    cases.push_back({"hat-scale-shift", hat, [hat](long j) {
                         auto g = hat.scaled(Rational(1) / Rational(1200 * j));
                         return g + DiscreteBVFunction<Rational>::constant(Rational(199) /
                                                                           Rational(200 * j));
                     }});
    return cases;
}

// g_j = (1/(2j)) * indicator[lo, hi]; bvnorm = 1/j exactly (zero tails).
inline std::function<DiscreteBVFunction<Rational>(long)> indicator_offset_family(long lo, long hi) {
    return [lo, hi](long j) {
        const auto zero = DiscreteBVFunction<Rational>::constant(Rational(0));
        return add_indicator(zero, lo, hi, Rational(1) / Rational(2 * j));
    };
}

// The fractional-divergence family evaluated under the classical operator:
// distances decay like 1/j instead of stalling. h values from the
// record chain for the given fractional beta.
inline std::vector<double> thm5_classical_distances(long j_max, const Beta& record_beta) {
    const auto hs = h_sequence_thm5(record_beta, j_max);
    const auto f = delta_at_origin<Rational>();
    std::vector<double> out;
    for (long j = 1; j <= j_max; ++j) {
        const auto zero = DiscreteBVFunction<Rational>::constant(Rational(0));
        const auto g = add_indicator(zero, 0, hs[static_cast<std::size_t>(j - 1)],
                                     Rational(1) / Rational(2 * j));
        const auto stats = exact_difference_stats(f + g, f, false);
        out.push_back(scalar_traits<Rational>::to_double(stats.variation));
    }
    return out;
}

// Same idea for the centered construction under the centered classical
// operator (exact distances, expected to decrease).
inline std::vector<double> thm6_classical_distances(long j_max, const Beta& record_beta) {
    const auto hs = h_sequence_thm6(record_beta, j_max);
    const auto f = delta_at_origin<Rational>();
    std::vector<double> out;
    for (long j = 1; j <= j_max; ++j) {
        const auto zero = DiscreteBVFunction<Rational>::constant(Rational(0));
        const auto g = add_indicator(zero, 0, hs[static_cast<std::size_t>(j - 1)],
                                     Rational(1) / Rational(2 * j));
        const auto stats = exact_difference_stats(f + g, f, true);
        out.push_back(scalar_traits<Rational>::to_double(stats.variation));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Theorem-1-style continuous convergence runs (classical operator on
// piecewise-linear functions, grid-approximated derivative-L1 distances).
// ---------------------------------------------------------------------------

struct ContinuousConvergenceCase {
    std::string label;
    PiecewiseLinearFunction<double> base;
    std::function<PiecewiseLinearFunction<double>(long)> offset; // j -> g_j
};

namespace detail {

inline std::vector<double> dense_grid(double lo, double hi, double step) {
    std::vector<double> xs;
    const long count = static_cast<long>(std::floor((hi - lo) / step)) + 1;
    xs.reserve(static_cast<std::size_t>(count) + 1);
    for (long i = 0; i < count; ++i) xs.push_back(lo + static_cast<double>(i) * step);
    if (xs.back() < hi) xs.push_back(hi);
    return xs;
}

// Sum |delta u - delta v| over consecutive grid points: the telescoped
// grid approximation of the L1 norm of the difference of derivatives.
inline double derivative_l1_gap(const std::vector<double>& u, const std::vector<double>& v) {
    double total = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i) {
        total += std::abs((u[i] - u[i - 1]) - (v[i] - v[i - 1]));
    }
    return total;
}

} // namespace detail

inline ExperimentReport converge_thm1(const PiecewiseLinearFunction<double>& f,
                                      const std::function<PiecewiseLinearFunction<double>(long)>& offset,
                                      double grid_step, long j_max,
                                      bool one_sided_right = false,
                                      const std::string& label = "continuous") {
    if (j_max < 1) throw std::invalid_argument("converge_thm1: j_max must be positive");
    if (grid_step <= 0) throw std::invalid_argument("converge_thm1: grid step must be positive");
    if (!f.has_zero_tails()) throw std::invalid_argument("converge_thm1: nonzero tails");

    const OperatorVariant variant = one_sided_right ? OperatorVariant::one_sided(Side::right)
                                                    : OperatorVariant::uncentered();
    const double pad = 4.0;
    const double lo = f.node_x().front() - pad;
    const double hi = f.node_x().back() + pad;
    const auto grid = detail::dense_grid(lo, hi, grid_step);
    const auto base_profile = profile_continuous(f, grid, variant);

    // fixed interior sample points for the witness-radius accumulation check
    std::vector<double> samples;
    {
        const double a = f.node_x().front(), b = f.node_x().back();
        for (int k = 1; k <= 5; ++k)
            samples.push_back(a + (b - a) * (static_cast<double>(k) - 0.43) / 5.0);
    }
    std::vector<std::vector<double>> base_radii;
    for (double x : samples) {
        try {
            base_radii.push_back(good_radii(f, x).radii);
        } catch (const std::exception&) {
            base_radii.push_back({});
        }
    }

    struct RowData {
        double deriv_l1_in, deriv_l1_max, witness_radius_gap;
    };
    std::vector<RowData> data(static_cast<std::size_t>(j_max));
    detail::parallel_for(j_max, [&](long idx) {
        const long j = idx + 1;
        const auto g = offset(j);
        if (!g.has_zero_tails()) throw std::invalid_argument("converge_thm1: nonzero tails");
        const auto fj = f + g;
        const auto profile = profile_continuous(fj, grid, variant);
        RowData& row = data[static_cast<std::size_t>(idx)];
        row.deriv_l1_in = var_continuous(g);
        row.deriv_l1_max = detail::derivative_l1_gap(profile.values, base_profile.values);
        double worst = 0.0;
        for (std::size_t s = 0; s < samples.size(); ++s) {
            if (base_radii[s].empty()) continue;
            const auto ev = one_sided_max(fj, samples[s], Side::right);
            const double radius = ev.window.right - samples[s];
            double best = std::abs(radius - base_radii[s].front());
            for (double r : base_radii[s]) best = std::min(best, std::abs(radius - r));
            worst = std::max(worst, best);
        }
        row.witness_radius_gap = worst;
    });

    ExperimentReport report;
    report.name = one_sided_right ? "converge-thm1-right" : "converge-thm1";
    report.add_parameter("family", label);
    report.add_parameter("beta", std::string("0"));
    report.add_parameter("operator", one_sided_right ? std::string("one-sided right continuous")
                                                     : std::string("uncentered continuous"));
    report.add_parameter("grid_step", grid_step);
    report.add_parameter("grid_pad", pad);
    report.add_parameter("j_max", j_max);
    report.columns = {"j", "deriv_l1_in", "deriv_l1_max", "witness_radius_gap"};
    std::vector<double> distances;
    for (long idx = 0; idx < j_max; ++idx) {
        const RowData& row = data[static_cast<std::size_t>(idx)];
        report.rows.push_back({static_cast<double>(idx + 1), row.deriv_l1_in, row.deriv_l1_max,
                               row.witness_radius_gap});
        distances.push_back(row.deriv_l1_max);
    }
    report.verdict = convergence_verdict(distances, 1e-2);
    report.decision_rule = convergence_rule_text(1e-2);
    return report;
}

inline ContinuousConvergenceCase default_thm1_case() {
    PiecewiseLinearFunction<double> tent({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    return {"tent-scale", tent, [tent](long j) {
                return tent.scaled(1.0 / (2.0 * static_cast<double>(j) * static_cast<double>(j)));
            }};
}

// ---------------------------------------------------------------------------
// Inequality fuzzing
// ---------------------------------------------------------------------------

enum class InequalityKind {
    discrete_classical_var,    // Var(max f) <= Var(f), exact
    discrete_fractional_varq,  // Var_q <= 4^(1/q) Var(f), tolerance 1e-9
    continuous_classical_var,  // Var(max f) <= Var(f), sampled lower bound
    continuous_fractional_varq // Var_q <= 8^(1/q) Var(f), sampled lower bound
};

inline const char* inequality_name(InequalityKind k) {
    switch (k) {
    case InequalityKind::discrete_classical_var: return "discrete_classical_var";
    case InequalityKind::discrete_fractional_varq: return "discrete_fractional_varq";
    case InequalityKind::continuous_classical_var: return "continuous_classical_var";
    case InequalityKind::continuous_fractional_varq: return "continuous_fractional_varq";
    }
    return "unknown";
}

inline std::vector<InequalityKind> all_inequalities() {
    return {InequalityKind::discrete_classical_var, InequalityKind::discrete_fractional_varq,
            InequalityKind::continuous_classical_var,
            InequalityKind::continuous_fractional_varq};
}

// Greedy minimizer for a violating instance: halve the core from either end,
// then coarsen values to lower-denominator rationals, keeping each step only
// if the violation persists.
inline DiscreteBVFunction<Rational>
shrink_violation(DiscreteBVFunction<Rational> f,
                 const std::function<bool(const DiscreteBVFunction<Rational>&)>& violates) {
    if (!violates(f)) return f;
    bool progressed = true;
    while (progressed) {
        progressed = false;
        const long width = f.core_hi() - f.core_lo() + 1;
        if (width > 1) {
            for (bool cut_right : {true, false}) {
                const long keep = (width + 1) / 2;
                std::vector<Rational> vals;
                const long start = cut_right ? f.core_lo() : f.core_hi() - keep + 1;
                for (long n = start; n < start + keep; ++n) vals.push_back(f.evaluate(n));
                DiscreteBVFunction<Rational> candidate(start, std::move(vals), f.left_tail(),
                                                       f.right_tail());
                if (violates(candidate)) {
                    f = candidate;
                    progressed = true;
                    break;
                }
            }
        }
        if (!progressed) {
            for (long coarse_den : {2L, 1L}) {
                std::vector<Rational> vals;
                for (long n = f.core_lo(); n <= f.core_hi(); ++n) {
                    const Rational v = f.evaluate(n) * Rational(coarse_den);
                    const BigInt rounded =
                        static_cast<BigInt>(boost::multiprecision::numerator(v)) /
                        static_cast<BigInt>(boost::multiprecision::denominator(v));
                    vals.push_back(Rational(rounded) / Rational(coarse_den));
                }
                DiscreteBVFunction<Rational> candidate(f.core_lo(), std::move(vals),
                                                       f.left_tail(), f.right_tail());
                if (!(candidate == f) && violates(candidate)) {
                    f = candidate;
                    progressed = true;
                    break;
                }
            }
        }
    }
    return f;
}

namespace detail {

// Riesz q-sum of a discrete profile over the window plus a reported (not
// certified) remainder estimate for the monotone far field.
struct DiscreteVarqEstimate {
    double partial;
    double remainder_estimate;
};

inline DiscreteVarqEstimate discrete_varq_lower(const DiscreteBVFunction<Rational>& f,
                                                const Beta& beta, double q) {
    const long width = f.core_hi() - f.core_lo() + 1;
    const long margin = 4 * width + 64;
    const auto profile = maximal_profile_discrete(f, f.core_lo() - margin, f.core_hi() + margin,
                                                  OperatorVariant::uncentered(beta));
    std::vector<double> vals;
    for (long n = profile.lo; n <= profile.hi(); ++n) vals.push_back(profile.at(n).value.value());
    double qsum = 0.0;
    for (std::size_t i = 1; i < vals.size(); ++i) qsum += std::pow(std::abs(vals[i] - vals[i - 1]), q);
    // beyond the window the profile decays monotonically to zero; the drop
    // sums telescoped against the largest drop give the estimate
    double rem = 0.0;
    if (vals.size() >= 2) {
        const double edge_drop =
            std::max(std::abs(vals[1] - vals[0]), std::abs(vals[vals.size() - 1] - vals[vals.size() - 2]));
        rem = std::pow(edge_drop, q - 1.0) * (vals.front() + vals.back());
    }
    return {std::pow(qsum, 1.0 / q), rem};
}

inline Rational rational_grid_step(long den) { return Rational(1) / Rational(den); }

inline std::vector<Rational> rational_grid(const Rational& lo, const Rational& hi, long den) {
    std::vector<Rational> xs;
    const Rational step = rational_grid_step(den);
    for (Rational x = lo; !(hi < x); x = x + step) xs.push_back(x);
    return xs;
}

inline double sampled_var(const std::vector<double>& vals) {
    double total = 0.0;
    for (std::size_t i = 1; i < vals.size(); ++i) total += std::abs(vals[i] - vals[i - 1]);
    return total;
}

} // namespace detail

inline ExperimentReport fuzz_inequalities(const RandomBVSpec& spec, long trials,
                                          std::vector<InequalityKind> which = all_inequalities(),
                                          const Beta& fractional_beta = Beta{1, 2}) {
    if (trials < 1) throw std::invalid_argument("fuzz_inequalities: trials must be >= 1");
    if (fractional_beta.is_zero())
        throw std::invalid_argument("fuzz_inequalities: fractional beta must be positive");
    const double q = static_cast<double>(fractional_beta.den) /
                     static_cast<double>(fractional_beta.den - fractional_beta.num);

    struct TrialResult {
        std::vector<std::vector<double>> rows;
        std::vector<std::string> reproducers;
    };
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));

    detail::parallel_for(trials, [&](long trial) {
        TrialResult& res = results[static_cast<std::size_t>(trial)];
        RandomBVSpec trial_spec = spec;
        trial_spec.seed = trial_stream(spec.seed, trial).next();
        for (InequalityKind kind : which) {
            double lhs = 0.0, rhs = 0.0, ratio = 0.0;
            bool violation = false;
            if (kind == InequalityKind::discrete_classical_var) {
                // trial 0 pins the sharpness witness: Var(max delta) = Var(delta)
                const auto f =
                    trial == 0 ? delta_at_origin<Rational>() : random_bv(trial_spec);
                const Rational var_f = var_discrete(f);
                const Rational var_m = exact_var_of_maximal(f, false);
                lhs = scalar_traits<Rational>::to_double(var_m);
                rhs = scalar_traits<Rational>::to_double(var_f);
                violation = var_m > var_f;
                ratio = var_f > Rational(0) ? lhs / rhs : 0.0;
                if (violation) {
                    const auto shrunk = shrink_violation(f, [](const DiscreteBVFunction<Rational>& g) {
                        return exact_var_of_maximal(g, false) > var_discrete(g);
                    });
                    res.reproducers.push_back(to_json(shrunk).dump());
                }
            } else if (kind == InequalityKind::discrete_fractional_varq) {
                RandomBVSpec zero_tails = trial_spec;
                zero_tails.tail_left = Rational(0);
                zero_tails.tail_right = Rational(0);
                const auto f = random_bv(zero_tails);
                const auto est = detail::discrete_varq_lower(f, fractional_beta, q);
                const double var_f = scalar_traits<Rational>::to_double(var_discrete(f));
                lhs = est.partial;
                rhs = std::pow(4.0, 1.0 / q) * var_f;
                violation = lhs > rhs + 1e-9;
                ratio = rhs > 0 ? lhs / rhs : 0.0;
                if (violation) res.reproducers.push_back(to_json(f).dump());
            } else if (kind == InequalityKind::continuous_classical_var) {
                const auto f = random_step(trial_spec);
                const double var_f = scalar_traits<Rational>::to_double(var_continuous(f));
                const auto& bps = f.breakpoints();
                const auto grid = detail::rational_grid(bps.front() - Rational(3),
                                                        bps.back() + Rational(3), 16);
                const auto profile = profile_continuous(f, grid, OperatorVariant::uncentered());
                lhs = detail::sampled_var(profile.values);
                rhs = var_f;
                violation = lhs > rhs + 1e-9;
                ratio = rhs > 0 ? lhs / rhs : 0.0;
                if (violation) res.reproducers.push_back(to_json(f).dump());
            } else {
                RandomBVSpec zero_tails = trial_spec;
                zero_tails.tail_left = Rational(0);
                zero_tails.tail_right = Rational(0);
                const auto f = random_step(zero_tails);
                const double var_f = scalar_traits<Rational>::to_double(var_continuous(f));
                const auto& bps = f.breakpoints();
                const auto grid = detail::rational_grid(bps.front() - Rational(4),
                                                        bps.back() + Rational(4), 16);
                const auto profile =
                    profile_continuous(f, grid, OperatorVariant::uncentered(fractional_beta));
                SampledProfile<Rational> sp;
                sp.xs = grid;
                sp.values = profile.values;
                lhs = varq_riesz(sp, q);
                rhs = std::pow(8.0, 1.0 / q) * var_f;
                violation = lhs > rhs + 1e-9;
                ratio = rhs > 0 ? lhs / rhs : 0.0;
                if (violation) res.reproducers.push_back(to_json(f).dump());
            }
            res.rows.push_back({static_cast<double>(trial),
                                static_cast<double>(static_cast<int>(kind)), ratio, lhs, rhs,
                                violation ? 1.0 : 0.0});
        }
    });

    ExperimentReport report;
    report.name = "fuzz-inequalities";
    report.add_parameter("seed", std::to_string(spec.seed));
    report.add_parameter("trials", trials);
    report.add_parameter("beta", fractional_beta.str());
    report.add_parameter("q", q);
    report.columns = {"trial", "kind", "ratio", "lhs", "rhs", "violation"};
    long violations = 0;
    std::map<int, double> max_ratio;
    for (const auto& res : results) {
        for (const auto& row : res.rows) {
            report.rows.push_back(row);
            violations += row[5] > 0.5 ? 1 : 0;
            auto& best = max_ratio[static_cast<int>(row[1])];
            best = std::max(best, row[2]);
        }
        for (const auto& rep : res.reproducers) report.notes.push_back("reproducer: " + rep);
    }
    double overall = 0.0;
    for (InequalityKind kind : which) {
        const double r = max_ratio[static_cast<int>(kind)];
        report.add_parameter(std::string("max_ratio_") + inequality_name(kind), r);
        overall = std::max(overall, r);
    }
    report.add_parameter("violations", violations);
    report.add_parameter("max_ratio", overall);
    for (InequalityKind kind : which) {
        report.notes.push_back(std::string("kind ") +
                               std::to_string(static_cast<int>(kind)) + " = " +
                               inequality_name(kind));
    }
    report.verdict = violations == 0 ? "inconclusive" : "candidate-violation";
    report.decision_rule =
        "the checked inequalities are theorems; any violation indicates an implementation "
        "bug and is emitted as a minimized reproducer. Sampled lower bounds are used on the "
        "continuous side; the discrete fractional check reports a far-field remainder "
        "estimate separately.";
    return report;
}

// ---------------------------------------------------------------------------
// Open-question probes (centered analogues of the convergence runs)
// ---------------------------------------------------------------------------

enum class OpenQuestion { A, B, C, D };

inline const char* open_question_name(OpenQuestion q) {
    switch (q) {
    case OpenQuestion::A: return "A";
    case OpenQuestion::B: return "B";
    case OpenQuestion::C: return "C";
    case OpenQuestion::D: return "D";
    }
    return "?";
}

// A: centered continuous, derivative-flavor distance (grid telescoping).
// B: uncentered continuous, BV distance (sampled variation).
// C: centered continuous, BV distance (sampled variation).
// D: centered discrete, BV distance (exact certified variation).
// A and C coincide numerically on step instances at desk scale; they differ
// in which open problem the metadata attributes the run to.
inline ExperimentReport probe_open_questions(OpenQuestion question, const RandomBVSpec& spec,
                                             long trials, long j_max = 10) {
    if (trials < 1) throw std::invalid_argument("probe_open_questions: trials must be >= 1");
    if (j_max < 2) throw std::invalid_argument("probe_open_questions: j_max must be >= 2");

    struct TrialResult {
        std::vector<double> distances;
        bool supporting = true;
        std::string reproducer;
    };
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));

    detail::parallel_for(trials, [&](long trial) {
        TrialResult& res = results[static_cast<std::size_t>(trial)];
        RandomBVSpec trial_spec = spec;
        trial_spec.seed = trial_stream(spec.seed, trial).next();
        SplitMix64 pick(trial_stream(spec.seed, trial).next() ^ 0xA5A5A5A5A5A5A5A5ULL);

        if (question == OpenQuestion::D) {
            const auto f = random_bv(trial_spec);
            const long lo = pick.next_in(f.core_lo() - 2, f.core_hi());
            const long hi = pick.next_in(lo, f.core_hi() + 2);
            for (long j = 1; j <= j_max; ++j) {
                const auto zero = DiscreteBVFunction<Rational>::constant(Rational(0));
                const auto g = add_indicator(zero, lo, hi, Rational(1) / Rational(2 * j));
                const auto stats = exact_difference_stats(f + g, f, true);
                res.distances.push_back(scalar_traits<Rational>::to_double(stats.variation));
            }
            res.reproducer = to_json(f).dump();
        } else {
            const bool centered = question != OpenQuestion::B;
            const OperatorVariant variant =
                centered ? OperatorVariant::centered_op() : OperatorVariant::uncentered();
            const auto f = random_step(trial_spec);
            const auto& bps = f.breakpoints();
            const Rational span = bps.back() - bps.front();
            const long quarters =
                std::max<long>(1, static_cast<long>(4 * scalar_traits<Rational>::to_double(span)));
            const long a4 = pick.next_in(-4, quarters + 4);
            const long b4 = pick.next_in(a4 + 1, quarters + 8);
            const Rational a = bps.front() + Rational(a4) / Rational(4);
            const Rational b = bps.front() + Rational(b4) / Rational(4);
            const auto grid =
                detail::rational_grid(std::min(bps.front(), a) - Rational(3),
                                      std::max(bps.back(), b) + Rational(3), 16);
            const auto base_profile = profile_continuous(f, grid, variant);
            for (long j = 1; j <= j_max; ++j) {
                const auto g =
                    StepFunction<Rational>::indicator(a, b, Rational(1) / Rational(2 * j));
                const auto profile = profile_continuous(f + g, grid, variant);
                std::vector<double> diff(profile.values.size());
                for (std::size_t i = 0; i < diff.size(); ++i)
                    diff[i] = profile.values[i] - base_profile.values[i];
                res.distances.push_back(detail::sampled_var(diff));
            }
            res.reproducer = to_json(f).dump();
        }

        const std::size_t n = res.distances.size();
        for (std::size_t i = n / 2 + 1; i < n; ++i) {
            if (res.distances[i] > res.distances[i - 1] + 1e-12) res.supporting = false;
        }
        if (res.distances.back() > res.distances.front() + 1e-12) res.supporting = false;
        if (res.supporting) res.reproducer.clear();
    });

    ExperimentReport report;
    report.name = std::string("probe-question-") + open_question_name(question);
    report.add_parameter("seed", std::to_string(spec.seed));
    report.add_parameter("question", open_question_name(question));
    report.add_parameter("trials", trials);
    report.add_parameter("j_max", j_max);
    report.columns = {"trial", "j", "distance", "supporting"};
    bool all_supporting = true;
    for (long trial = 0; trial < trials; ++trial) {
        const TrialResult& res = results[static_cast<std::size_t>(trial)];
        for (long j = 1; j <= j_max; ++j) {
            report.rows.push_back({static_cast<double>(trial), static_cast<double>(j),
                                   res.distances[static_cast<std::size_t>(j - 1)],
                                   res.supporting ? 1.0 : 0.0});
        }
        if (!res.supporting) {
            all_supporting = false;
            if (!res.reproducer.empty())
                report.notes.push_back("candidate: " + res.reproducer);
        }
    }
    report.verdict = all_supporting ? "inconclusive-supporting" : "candidate-violation";
    report.decision_rule =
        "supporting iff every trial's distance sequence is non-increasing over its second "
        "half and ends no higher than it starts (slack 1e-12); a probe can never prove the "
        "open question either way.";
    return report;
}

} // namespace maxlab
