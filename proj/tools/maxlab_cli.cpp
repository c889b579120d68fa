/// \file maxlab_cli.cpp
/// maxlab: exact maximal-operator computations, divergence-family
/// reproduction, inequality fuzzing, and convergence experiments.
///
/// Exit codes: 0 success, 1 usage or input error, 2 verification failure or
/// inequality violation.  Reports are byte-identical for identical configs;
/// the filename timestamp is injectable via --timestamp.

#include "maxlab/counterexamples.hpp"
#include "maxlab/experiments.hpp"
#include "maxlab/json_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using maxlab::Beta;
using maxlab::ExperimentReport;
using maxlab::OperatorVariant;
using maxlab::Rational;
using maxlab::RootValue;
using maxlab::Side;

struct RunConfig {
    std::string command;
    Beta beta;
    bool centered = false;
    std::string side = "none"; // none | left | right
    std::string mode = "rational";
    std::uint64_t seed = 1;
    long j_max = 0;
    long trials = 0;
    double grid_step = 1e-3;
    std::string out_dir;
    std::string format = "both"; // csv | json | both
    std::string timestamp;       // empty: current UTC
};

std::string fmt(double v) { return ExperimentReport::format_double(v); }

std::string now_timestamp_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

void stamp_config(ExperimentReport& report, const RunConfig& config) {
    report.add_parameter("config_command", config.command);
    report.add_parameter("config_beta", config.beta.str());
    report.add_parameter("config_centered", std::string(config.centered ? "true" : "false"));
    report.add_parameter("config_side", config.side);
    report.add_parameter("config_mode", config.mode);
    report.add_parameter("config_seed", std::to_string(config.seed));
    report.add_parameter("config_j_max", config.j_max);
    report.add_parameter("config_trials", config.trials);
    report.add_parameter("config_grid_step", config.grid_step);
    report.add_parameter("config_format", config.format);
}

void emit_report(const ExperimentReport& report, const RunConfig& config) {
    if (config.out_dir.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const std::string ts = config.timestamp.empty() ? now_timestamp_utc() : config.timestamp;
    const std::string base =
        (fs::path(config.out_dir) / maxlab::report_basename(report, ts)).string();
    if (config.format != "json") {
        std::ofstream out(base + ".csv");
        out << report.to_csv();
        std::cout << "wrote " << base << ".csv\n";
    }
    if (config.format != "csv") {
        std::ofstream out(base + ".json");
        out << report.to_json().dump(2) << "\n";
        std::cout << "wrote " << base << ".json\n";
    }
}

void print_report_rows(const ExperimentReport& report) {
    std::string head;
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        if (c) head += "  ";
        head += report.columns[c];
    }
    std::cout << head << "\n";
    for (const auto& row : report.rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            line += fmt(row[c]);
        }
        std::cout << line << "\n";
    }
}

OperatorVariant make_variant(const RunConfig& config) {
    if (config.side == "left") return OperatorVariant::one_sided(Side::left);
    if (config.side == "right") return OperatorVariant::one_sided(Side::right);
    return config.centered ? OperatorVariant::centered_op(config.beta)
                           : OperatorVariant::uncentered(config.beta);
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        std::string piece = text.substr(start, comma - start);
        const auto a = piece.find_first_not_of(" \t");
        const auto b = piece.find_last_not_of(" \t");
        if (a == std::string::npos) {
            throw std::invalid_argument("--points: empty entry");
        }
        out.push_back(piece.substr(a, b - a + 1));
        start = comma + 1;
    }
    return out;
}

long parse_integer_point(const std::string& text) {
    std::size_t used = 0;
    const long n = std::stol(text, &used);
    if (used != text.size())
        throw std::invalid_argument("points for discrete functions must be integers, got \"" +
                                    text + "\"");
    return n;
}

/// Accepts "p/q", decimals like "-1.25", and integers.
Rational parse_rational_point(const std::string& text) {
    if (text.find('/') != std::string::npos)
        return maxlab::scalar_traits<Rational>::parse(text);
    const auto dot = text.find('.');
    if (dot == std::string::npos) return maxlab::scalar_traits<Rational>::parse(text);
    const bool negative = !text.empty() && text[0] == '-';
    const std::string whole = text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("not a decimal point value: \"" + text + "\"");
    Rational den(1);
    for (std::size_t i = 0; i < frac.size(); ++i) den = den * Rational(10);
    Rational value = Rational(maxlab::BigInt(whole.empty() ? "0" : whole)) +
                     Rational(maxlab::BigInt(frac)) / den;
    return negative ? Rational(-value) : value;
}

std::string exact_str(const RootValue<Rational>& v) {
    const std::string c = maxlab::scalar_traits<Rational>::to_string(v.coeff);
    if (v.index == 1) return c;
    return c + " * (" + maxlab::scalar_traits<Rational>::to_string(v.radicand) + ")^(1/" +
           std::to_string(v.index) + ")";
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

template <class S>
int run_compute_typed(const RunConfig& config, const maxlab::Json& parsed,
                      const std::vector<std::string>& points) {
    const auto loaded = maxlab::function_from_json<S>(parsed);
    const OperatorVariant variant = make_variant(config);
    std::vector<std::string> final_values;

    if (loaded.discrete) {
        const auto& f = *loaded.discrete;
        for (const auto& text : points) {
            const long n = parse_integer_point(text);
            const auto ev = maxlab::maximal_discrete(f, n, variant);
            if (ev.divergent) {
                std::cout << "point " << n << ": infinite (fractional operator, nonzero tail)\n";
                final_values.push_back("infinite");
                continue;
            }
            std::string line = "point " + std::to_string(n) + ": value " + fmt(ev.value.value());
            if constexpr (maxlab::scalar_traits<S>::exact) line += " = " + exact_str(ev.value);
            if (ev.attained) {
                line += " window [" + std::to_string(ev.window_l) + ", " +
                        std::to_string(ev.window_r) + "] attained";
            } else {
                line += std::string(" tail-limit ") + maxlab::tail_side_name(*ev.tail_limit);
            }
            std::cout << line << "\n";
            final_values.push_back(fmt(ev.value.value()));
        }
    } else if (loaded.step) {
        const auto& f = *loaded.step;
        for (const auto& text : points) {
            const S x = [&] {
                if constexpr (maxlab::scalar_traits<S>::exact) return parse_rational_point(text);
                else return std::stod(text);
            }();
            const auto ev = maxlab::step_max_continuous(f, x, variant);
            if (ev.divergent) {
                std::cout << "point " << text << ": infinite (fractional operator, nonzero tail)\n";
                final_values.push_back("infinite");
                continue;
            }
            std::string line = "point " + text + ": value " + fmt(ev.value.value());
            if constexpr (maxlab::scalar_traits<S>::exact) line += " = " + exact_str(ev.value);
            line += " window [" + fmt(maxlab::scalar_traits<S>::to_double(ev.window.left)) +
                    ", " + fmt(maxlab::scalar_traits<S>::to_double(ev.window.right)) + "] " +
                    maxlab::window_kind_name(ev.window.kind);
            std::cout << line << "\n";
            final_values.push_back(fmt(ev.value.value()));
        }
    } else {
        const auto& f = *loaded.pwl;
        if (!config.beta.is_zero())
            throw std::invalid_argument(
                "compute: fractional operators on piecewise-linear inputs are not supported");
        if (config.centered)
            throw std::invalid_argument(
                "compute: the centered operator on piecewise-linear inputs is not supported");
        for (const auto& text : points) {
            const S x = [&] {
                if constexpr (maxlab::scalar_traits<S>::exact) return parse_rational_point(text);
                else return std::stod(text);
            }();
            const auto ev = variant.side == Side::two_sided
                                ? maxlab::uncentered_max_continuous(f, x)
                                : maxlab::one_sided_max(f, x, variant.side);
            std::cout << "point " << text << ": value " << fmt(ev.value) << " window ["
                      << fmt(ev.window.left) << ", " << fmt(ev.window.right) << "] "
                      << maxlab::window_kind_name(ev.window.kind) << "\n";
            final_values.push_back(fmt(ev.value));
        }
    }

    std::string joined;
    for (std::size_t i = 0; i < final_values.size(); ++i) {
        if (i) joined += ", ";
        joined += final_values[i];
    }
    if (!config.out_dir.empty()) {
        std::ofstream out(config.out_dir);
        out << joined << "\n";
    }
    std::cout << joined << "\n";
    return 0;
}

int run_compute(const RunConfig& config, const std::string& file, const std::string& points_csv) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open function file: " + file);
    maxlab::Json parsed;
    in >> parsed;
    const auto points = split_csv(points_csv);
    if (config.mode == "f64") return run_compute_typed<double>(config, parsed, points);
    return run_compute_typed<Rational>(config, parsed, points);
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

int run_reproduce(const RunConfig& config, const std::string& setting) {
    if (config.beta.is_zero())
        throw std::invalid_argument("reproduce: beta must satisfy 0 < beta < 1");
    const auto rows = maxlab::reproduce_rows(setting, config.beta, config.j_max);

    ExperimentReport report;
    report.name = "reproduce-" + setting;
    report.add_parameter("setting", setting);
    report.add_parameter("beta", config.beta.str());
    report.add_parameter("j_max", config.j_max);
    report.columns = {"j", "h", "value_at_0", "value_at_probe", "derivative_gap", "bv_distance"};
    for (const auto& row : rows) {
        report.rows.push_back({static_cast<double>(row.j), static_cast<double>(row.h),
                               row.value_at_0, row.value_at_1_or_2, row.derivative_gap,
                               row.bv_distance});
    }
    print_report_rows(report);

    bool all_ok = true;
    long verified = 0, skipped = 0;
    for (long j = 1; j <= config.j_max; ++j) {
        const auto verdict = maxlab::verify_setting(setting, j, config.beta);
        std::string line = "verify j=" + std::to_string(j) + " h=" + std::to_string(verdict.h);
        if (verdict.skipped) {
            ++skipped;
            line += ": SKIP (" + verdict.skip_reason + ")";
        } else if (verdict.verified) {
            ++verified;
            line += ": PASS";
        } else {
            all_ok = false;
            line += ": FAIL";
            for (const auto& failure : verdict.failures) line += "; " + failure;
        }
        std::cout << line << "\n";
        report.notes.push_back(line);
    }
    report.add_parameter("verified", verified);
    report.add_parameter("skipped", skipped);
    report.verdict = all_ok ? "PASS" : "FAIL";
    report.decision_rule =
        "PASS iff every non-skipped j passes all exact verifier assertions (witness windows, "
        "record values, closed-form derivative gaps, BV distance = 1/j).";
    stamp_config(report, config);
    emit_report(report, config);
    std::cout << (all_ok ? "PASS" : "FAIL") << "\n";
    return all_ok ? 0 : 2;
}

// ---------------------------------------------------------------------------
// fuzz
// ---------------------------------------------------------------------------

std::vector<maxlab::InequalityKind> kinds_for(const std::string& which) {
    using maxlab::InequalityKind;
    if (which == "var-bound") return {InequalityKind::discrete_classical_var};
    if (which == "varq-bound") return {InequalityKind::discrete_fractional_varq};
    if (which == "cont-var-bound") return {InequalityKind::continuous_classical_var};
    if (which == "cont-varq-bound") return {InequalityKind::continuous_fractional_varq};
    return maxlab::all_inequalities();
}

int run_fuzz(const RunConfig& config, const std::string& which) {
    const auto kinds = kinds_for(which);
    const Beta beta = config.beta.is_zero() ? Beta(1, 2) : config.beta;
    maxlab::RandomBVSpec spec;
    spec.seed = config.seed;
    auto report = maxlab::fuzz_inequalities(spec, config.trials, kinds, beta);
    stamp_config(report, config);

    long violations = 0;
    double max_ratio = 0.0;
    for (const auto& [key, value] : report.parameters) {
        if (key == "violations") violations = std::stol(value);
        if (key == "max_ratio") max_ratio = std::stod(value);
    }
    std::cout << "fuzz " << which << ": trials=" << config.trials << " seed=" << config.seed
              << " beta=" << beta.str() << "\n";
    for (const auto& [key, value] : report.parameters) {
        if (key.rfind("max_ratio_", 0) == 0)
            std::cout << "  " << key.substr(10) << ": max ratio " << value << "\n";
    }
    for (const auto& note : report.notes) {
        if (note.rfind("reproducer:", 0) == 0) std::cout << note << "\n";
    }
    emit_report(report, config);

    std::string attained = "no positive-variation instance";
    for (const auto& row : report.rows) {
        if (row[2] == max_ratio && max_ratio > 0.0) {
            const auto kind = static_cast<maxlab::InequalityKind>(static_cast<int>(row[1]));
            attained = std::string(maxlab::inequality_name(kind)) + " trial " +
                       std::to_string(static_cast<long>(row[0]));
            if (kind == maxlab::InequalityKind::discrete_classical_var &&
                static_cast<long>(row[0]) == 0)
                attained += " (delta sharpness witness)";
            break;
        }
    }
    std::cout << violations << " violations; max ratio " << fmt(max_ratio) << " attained by "
              << attained << "\n";
    return violations == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

int verdict_rank(const std::string& verdict) {
    if (verdict == "converges") return 0;
    if (verdict == "inconclusive") return 1;
    return 2; // diverges
}

int run_converge(const RunConfig& config, const std::string& which) {
    if (which == "thm2") {
        std::string worst = "converges";
        bool uniform_violation = false;
        for (const auto& family : maxlab::default_thm2_cases()) {
            auto report = maxlab::converge_thm2(family.base, family.offset, config.j_max,
                                                family.label);
            report.name += "-" + family.label;
            stamp_config(report, config);
            std::cout << "family " << family.label << ":\n";
            print_report_rows(report);
            std::cout << "  verdict(" << family.label << "): " << report.verdict << "\n";
            for (const auto& row : report.rows)
                if (row[6] < 0.5) uniform_violation = true;
            if (verdict_rank(report.verdict) > verdict_rank(worst)) worst = report.verdict;
            emit_report(report, config);
        }
        if (uniform_violation) {
            std::cout << "sup-norm control violated (sup|diff| > bv distance)\n";
            std::cout << "verdict: candidate-violation\n";
            return 2;
        }
        std::cout << "verdict: " << worst << "\n";
        return 0;
    }
    if (which == "thm1") {
        const auto family = maxlab::default_thm1_case();
        std::string worst = "converges";
        for (const bool right_only : {false, true}) {
            auto report = maxlab::converge_thm1(family.base, family.offset, config.grid_step,
                                                config.j_max, right_only, family.label);
            stamp_config(report, config);
            std::cout << (right_only ? "one-sided right:\n" : "uncentered:\n");
            print_report_rows(report);
            std::cout << "  verdict(" << (right_only ? "right" : "uncentered")
                      << "): " << report.verdict << "\n";
            if (verdict_rank(report.verdict) > verdict_rank(worst)) worst = report.verdict;
            emit_report(report, config);
        }
        std::cout << "verdict: " << worst << "\n";
        return 0;
    }
    // open-question probes
    maxlab::OpenQuestion question;
    if (which == "questionA") question = maxlab::OpenQuestion::A;
    else if (which == "questionB") question = maxlab::OpenQuestion::B;
    else if (which == "questionC") question = maxlab::OpenQuestion::C;
    else question = maxlab::OpenQuestion::D;
    maxlab::RandomBVSpec spec;
    spec.seed = config.seed;
    auto report = maxlab::probe_open_questions(question, spec, config.trials, config.j_max);
    stamp_config(report, config);
    std::cout << "question " << maxlab::open_question_name(question)
              << ": trials=" << config.trials << " j_max=" << config.j_max
              << " seed=" << config.seed << "\n";
    for (const auto& note : report.notes) std::cout << note << "\n";
    emit_report(report, config);
    std::cout << "verdict: " << report.verdict << "\n";
    return report.verdict == "candidate-violation" ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"maxlab: an exact laboratory for one-dimensional maximal operators"};
    app.require_subcommand(1);

    RunConfig config;
    std::string beta_text = "0";
    std::string file, points_csv, setting, which;
    bool flag_centered = false, flag_uncentered = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--beta", beta_text, "exponent beta as a decimal or \"p/q\"");
        sub->add_option("--mode", config.mode, "scalar mode")
            ->check(CLI::IsMember({"rational", "f64"}))
            ->capture_default_str();
        sub->add_option("--seed", config.seed, "random seed")->capture_default_str();
        sub->add_option("--out", config.out_dir, "output directory (file for compute)");
        sub->add_option("--format", config.format, "report format")
            ->check(CLI::IsMember({"csv", "json", "both"}))
            ->capture_default_str();
        sub->add_option("--timestamp", config.timestamp,
                        "timestamp for report filenames (default: current UTC)");
    };

    auto* compute = app.add_subcommand("compute", "evaluate a maximal operator on a function file");
    compute->add_option("file", file, "function JSON file")->required();
    compute->add_option("--points", points_csv, "comma-separated evaluation points")->required();
    auto* opt_centered = compute->add_flag("--centered", flag_centered, "centered operator");
    compute->add_flag("--uncentered", flag_uncentered, "uncentered operator (default)")
        ->excludes(opt_centered);
    compute->add_option("--side", config.side, "one-sided operator (classical continuous)")
        ->check(CLI::IsMember({"left", "right"}));
    add_common(compute);

    auto* reproduce = app.add_subcommand("reproduce", "build and verify a divergence family");
    reproduce->add_option("setting", setting, "which construction")
        ->required()
        ->check(CLI::IsMember({"thm3", "thm4", "thm5", "thm6"}));
    reproduce->add_option("--jmax", config.j_max, "largest family index j")
        ->check(CLI::PositiveNumber);
    add_common(reproduce);

    auto* fuzz = app.add_subcommand("fuzz", "randomized inequality checks");
    fuzz->add_option("which", which, "which inequality family")
        ->check(CLI::IsMember(
            {"var-bound", "varq-bound", "cont-var-bound", "cont-varq-bound", "all"}));
    fuzz->add_option("--trials", config.trials, "number of random instances")
        ->check(CLI::PositiveNumber);
    add_common(fuzz);

    auto* converge = app.add_subcommand("converge", "convergence experiments and probes");
    converge->add_option("which", which, "which experiment")
        ->required()
        ->check(CLI::IsMember(
            {"thm1", "thm2", "questionA", "questionB", "questionC", "questionD"}));
    converge->add_option("--jmax", config.j_max, "largest family index j")
        ->check(CLI::PositiveNumber);
    converge->add_option("--trials", config.trials, "trial count for question probes")
        ->check(CLI::PositiveNumber);
    converge->add_option("--grid-step", config.grid_step, "grid step for continuous runs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(converge);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        config.beta = Beta::parse(beta_text);
        config.centered = flag_centered;
        if (config.side != "none" && (config.centered || !config.beta.is_zero()))
            throw std::invalid_argument(
                "--side requires the classical uncentered setting (beta = 0, no --centered)");

        if (compute->parsed()) {
            config.command = "compute";
            return run_compute(config, file, points_csv);
        }
        if (reproduce->parsed()) {
            config.command = "reproduce";
            if (config.j_max == 0) config.j_max = 10;
            return run_reproduce(config, setting);
        }
        if (fuzz->parsed()) {
            config.command = "fuzz";
            if (which.empty()) which = "all";
            if (config.trials == 0) config.trials = 1000;
            return run_fuzz(config, which);
        }
        config.command = "converge";
        if (config.j_max == 0) config.j_max = which == "thm1" ? 30 : (which == "thm2" ? 50 : 10);
        if (config.trials == 0) config.trials = 100;
        return run_converge(config, which);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
