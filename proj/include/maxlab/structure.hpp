#pragma once

// Structural analyzers for maximal-function profiles: alternating strings of
// local extrema, contact points where the maximal function touches |f|,
// one-sided variation control, tail limits, maximizing ("good") radii, a
// derivative identity for the one-sided operator, and the set where the
// one-sided maximal function strictly exceeds |f|.
//
// Discrete analyzers are exact; continuous analyzers are grid-resolved with
// explicit tolerances, because continuous profiles are only pointwise
// evaluable.

#include "maxlab/functions.hpp"
#include "maxlab/json_io.hpp"
#include "maxlab/maximal_continuous.hpp"
#include "maxlab/maximal_discrete.hpp"
#include "maxlab/root_value.hpp"
#include "maxlab/scalar.hpp"
#include "maxlab/tail_analysis.hpp"
#include "maxlab/variation.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace maxlab {

// A maximal run of equal profile values that is strictly above (is_max) or
// strictly below (min) its neighbors. nullopt endpoints encode -infinity /
// +infinity for runs that merge into an exactly-constant tail.
template <class S>
struct ExtremaString {
    bool is_max = true;
    std::optional<long> left;
    std::optional<long> right;
    RootValue<S> level;
};

template <class S>
struct ExtremaAnalysis {
    bool constant = false;
    std::vector<ExtremaString<S>> strings;
};

namespace detail {

// Extracts the scalar from a RootValue known to carry no root part.
template <class S>
S plain_value(const RootValue<S>& v) {
    if (v.index != 1 && !scalar_eq<S>(v.radicand, scalar_traits<S>::from_long(1))) {
        throw std::logic_error("plain_value: value carries a nontrivial root");
    }
    return v.coeff;
}

inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace detail

template <class S>
std::string instance_digest(const DiscreteBVFunction<S>& f) {
    return detail::fnv1a_hex(to_json(f).dump());
}

template <class S>
std::string instance_digest(const StepFunction<S>& f) {
    return detail::fnv1a_hex(to_json(f).dump());
}

template <class S>
std::string instance_digest(const PiecewiseLinearFunction<S>& f) {
    return detail::fnv1a_hex(to_json(f).dump());
}

inline Json make_report_json(const std::string& check, const std::string& digest,
                             bool passed, const std::vector<std::string>& violations) {
    return Json{{"check", check},
                {"instance_digest", digest},
                {"verdict", passed ? "pass" : "fail"},
                {"violations", violations}};
}

// Decomposes a sampled profile (with its exact tail limits) into the ordered,
// alternating strings of local maxima and minima. A run whose value equals
// the adjacent tail limit extends to the corresponding infinity, since a
// monotone sequence that attains its limit is eventually constant. A profile
// that is constant and equal to both tail values yields the constant flag and
// no strings.
template <class S>
ExtremaAnalysis<S> extrema_strings(const DiscreteProfile<S>& profile) {
    const long lo = profile.lo;
    const long hi = profile.hi();
    if (profile.entries.empty()) throw std::invalid_argument("extrema_strings: empty profile");

    std::vector<RootValue<S>> vals;
    vals.reserve(profile.entries.size());
    for (const auto& e : profile.entries) vals.push_back(e.value);
    const RootValue<S>& tail_left = profile.tail_value_left;
    const RootValue<S>& tail_right = profile.tail_value_right;

    ExtremaAnalysis<S> out;
    bool all_equal = true;
    for (const auto& v : vals) {
        if (RootValue<S>::compare(v, vals.front()) != 0) {
            all_equal = false;
            break;
        }
    }
    if (all_equal && RootValue<S>::compare(tail_left, vals.front()) == 0 &&
        RootValue<S>::compare(tail_right, vals.front()) == 0) {
        out.constant = true;
        return out;
    }

    // Runs of equal values over [lo, hi].
    struct Run {
        long first;
        long last;
        RootValue<S> level;
    };
    std::vector<Run> runs;
    for (long n = lo; n <= hi; ++n) {
        const RootValue<S>& v = vals[static_cast<std::size_t>(n - lo)];
        if (!runs.empty() && RootValue<S>::compare(runs.back().level, v) == 0) {
            runs.back().last = n;
        } else {
            runs.push_back(Run{n, n, v});
        }
    }

    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Run& run = runs[i];
        const bool merges_left =
            i == 0 && RootValue<S>::compare(run.level, tail_left) == 0;
        const bool merges_right =
            i + 1 == runs.size() && RootValue<S>::compare(run.level, tail_right) == 0;
        const RootValue<S>& left_nbr = i == 0 ? tail_left : runs[i - 1].level;
        const RootValue<S>& right_nbr = i + 1 == runs.size() ? tail_right : runs[i + 1].level;

        const int cl = merges_left ? 0 : RootValue<S>::compare(left_nbr, run.level);
        const int cr = merges_right ? 0 : RootValue<S>::compare(right_nbr, run.level);

        ExtremaString<S> s;
        s.level = run.level;
        s.left = merges_left ? std::nullopt : std::optional<long>(run.first);
        s.right = merges_right ? std::nullopt : std::optional<long>(run.last);
        if (merges_left && merges_right) continue;
        if (merges_left) {
            if (cr < 0) s.is_max = true;
            else if (cr > 0) s.is_max = false;
            else continue;
        } else if (merges_right) {
            if (cl < 0) s.is_max = true;
            else if (cl > 0) s.is_max = false;
            else continue;
        } else {
            if (cl < 0 && cr < 0) s.is_max = true;
            else if (cl > 0 && cr > 0) s.is_max = false;
            else continue;
        }
        out.strings.push_back(std::move(s));
    }
    return out;
}

// Ordered + strictly alternating, as required of extrema strings.
template <class S>
bool strings_alternate(const ExtremaAnalysis<S>& a) {
    for (std::size_t i = 0; i + 1 < a.strings.size(); ++i) {
        const auto& cur = a.strings[i];
        const auto& nxt = a.strings[i + 1];
        if (cur.is_max == nxt.is_max) return false;
        if (!cur.right || !nxt.left) return false; // infinite endpoint inside the order
        if (*cur.right >= *nxt.left) return false;
    }
    return true;
}

namespace detail {

inline long structure_margin(long core_lo, long core_hi) {
    return (core_hi - core_lo + 1) + 8;
}

} // namespace detail

// Extrema strings of the classical uncentered maximal function, computed over
// the core plus a margin wide enough that everything beyond is monotone.
template <class S>
ExtremaAnalysis<S> maximal_extrema_strings(const DiscreteBVFunction<S>& f) {
    const long w = detail::structure_margin(f.core_lo(), f.core_hi());
    const auto profile = maximal_profile_discrete(f, f.core_lo() - w, f.core_hi() + w,
                                                  OperatorVariant::uncentered(Beta{0, 1}));
    return extrema_strings(profile);
}

// Verifies that the classical uncentered maximal function touches |f| at the
// leftmost and rightmost point of every string of local maxima.
template <class S>
struct ContactReport {
    std::vector<long> contact_points;
    std::vector<long> violations;
    bool passed() const { return violations.empty(); }
};

template <class S>
ContactReport<S> check_contact(const DiscreteBVFunction<S>& f) {
    const OperatorVariant variant = OperatorVariant::uncentered(Beta{0, 1});
    const auto analysis = maximal_extrema_strings(f);
    ContactReport<S> report;
    auto check_at = [&](long n) {
        report.contact_points.push_back(n);
        const S value = detail::plain_value(maximal_discrete(f, n, variant).value);
        const S fn = scalar_traits<S>::abs(f.evaluate(n));
        if (!scalar_eq<S>(value, fn)) report.violations.push_back(n);
    };
    for (const auto& s : analysis.strings) {
        if (!s.is_max) continue;
        if (s.left) check_at(*s.left);
        if (s.right && (!s.left || *s.right != *s.left)) check_at(*s.right);
    }
    return report;
}

// Exact variation of the classical uncentered maximal function over [n, oo)
// and (-oo, n], using monotone decay to the tail floor beyond the core.
template <class S>
S var_maximal_from(const DiscreteBVFunction<S>& f, long n) {
    static_assert(scalar_traits<S>::exact, "exact variation requires rational mode");
    const OperatorVariant variant = OperatorVariant::uncentered(Beta{0, 1});
    const S c = detail::plain_value(profile_tail_value(f, variant, Side::right));
    const long top = std::max(n, f.core_hi());
    S total = scalar_traits<S>::from_long(0);
    S prev = detail::plain_value(maximal_discrete(f, n, variant).value);
    for (long k = n + 1; k <= top; ++k) {
        const S cur = detail::plain_value(maximal_discrete(f, k, variant).value);
        total = total + scalar_traits<S>::abs(cur - prev);
        prev = cur;
    }
    return total + (prev - c);
}

template <class S>
S var_maximal_upto(const DiscreteBVFunction<S>& f, long n) {
    return var_maximal_from(f.reflected(), -n);
}

enum class ControlCase {
    right_of_min_string, // right-variation control applies
    left_of_max_string,  // left-variation control applies
    not_applicable,
};

inline const char* control_case_name(ControlCase c) {
    switch (c) {
    case ControlCase::right_of_min_string: return "right_of_min_string";
    case ControlCase::left_of_max_string: return "left_of_max_string";
    case ControlCase::not_applicable: return "not_applicable";
    }
    return "?";
}

template <class S>
struct OneSidedControlReport {
    ControlCase applicable_case = ControlCase::not_applicable;
    S var_maximal{};
    S var_input{};
    bool holds = true;
};

// Positional one-sided variation control for the classical uncentered
// operator. If n lies between the start of a min-string and the end of the
// following max-string (or left of the first string when that one is a
// max-string), the maximal function's variation over [n, oo) is controlled by
// the input's; symmetrically on the left.
template <class S>
OneSidedControlReport<S> one_sided_control_check(const DiscreteBVFunction<S>& f, long n) {
    const auto analysis = maximal_extrema_strings(f);
    OneSidedControlReport<S> report;

    bool right_ok = false;
    bool left_ok = false;
    if (analysis.constant) {
        right_ok = true;
    } else {
        const auto& strings = analysis.strings;
        if (!strings.empty() && strings.front().is_max && strings.front().right &&
            n <= *strings.front().right) {
            right_ok = true; // non-decreasing all the way up to the first max-string
        }
        if (!strings.empty() && strings.back().is_max && strings.back().left &&
            n >= *strings.back().left) {
            left_ok = true; // non-increasing from the last max-string onward
        }
        for (std::size_t i = 0; i + 1 < strings.size(); ++i) {
            const auto& cur = strings[i];
            const auto& nxt = strings[i + 1];
            if (!cur.is_max && nxt.is_max && nxt.right) {
                const bool above = !cur.left || n >= *cur.left;
                if (above && n <= *nxt.right) right_ok = true;
            }
            if (cur.is_max && !nxt.is_max && cur.left) {
                const bool below = !nxt.right || n <= *nxt.right;
                if (below && n >= *cur.left) left_ok = true;
            }
        }
    }

    if (right_ok) {
        report.applicable_case = ControlCase::right_of_min_string;
        report.var_maximal = var_maximal_from(f, n);
        report.var_input = var_discrete(f, IntervalZ::from(n));
    } else if (left_ok) {
        report.applicable_case = ControlCase::left_of_max_string;
        report.var_maximal = var_maximal_upto(f, n);
        report.var_input = var_discrete(f, IntervalZ::upto(n));
    } else {
        report.applicable_case = ControlCase::not_applicable;
        return report;
    }
    report.holds = !scalar_lt<S>(report.var_input, report.var_maximal);
    return report;
}

// Tail limits |a|, |b| and the floor c = max(|a|, |b|): the classical
// uncentered maximal function stays >= c everywhere and tends to c at both
// infinities.
template <class S>
struct TailLimitsReport {
    S left_limit{};
    S right_limit{};
    S floor_value{};
    bool min_bound_holds = false;
    bool far_field_matches = false;
};

template <class S>
TailLimitsReport<S> tail_limits(const DiscreteBVFunction<S>& f) {
    const OperatorVariant variant = OperatorVariant::uncentered(Beta{0, 1});
    TailLimitsReport<S> report;
    report.left_limit = scalar_traits<S>::abs(f.left_tail());
    report.right_limit = scalar_traits<S>::abs(f.right_tail());
    report.floor_value = std::max(report.left_limit, report.right_limit,
                                  [](const S& a, const S& b) { return scalar_lt<S>(a, b); });

    const auto profile =
        maximal_profile_discrete(f, f.core_lo() - 50, f.core_hi() + 50, variant);
    report.min_bound_holds = true;
    for (const auto& e : profile.entries) {
        if (scalar_lt<S>(detail::plain_value(e.value), report.floor_value)) {
            report.min_bound_holds = false;
            break;
        }
    }
    if constexpr (scalar_traits<S>::exact) {
        const S right_lim = right_tail_model(f, false).limit();
        const S left_lim = right_tail_model(f.reflected(), false).limit();
        report.far_field_matches =
            scalar_eq<S>(right_lim, report.floor_value) &&
            scalar_eq<S>(left_lim, report.floor_value);
    } else {
        report.far_field_matches =
            scalar_eq<S>(detail::plain_value(profile.tail_value_left), report.floor_value) &&
            scalar_eq<S>(detail::plain_value(profile.tail_value_right), report.floor_value);
    }
    return report;
}

// The set of maximizing radii for the right-sided maximal function at x:
// every candidate radius whose average attains the supremum within tolerance.
// Radius 0 denotes the shrinking limit |f|(x).
struct GoodRadiiResult {
    double value = 0.0;
    std::vector<double> radii;
};

template <class S>
GoodRadiiResult good_radii(const PiecewiseLinearFunction<S>& f, const S& x) {
    if (!f.has_zero_tails()) {
        throw std::invalid_argument("good_radii: input must vanish at infinity");
    }
    const auto g = detail::make_abs_view(f);
    bool all_zero = true;
    for (const double y : g.ys) {
        if (y != 0.0) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) throw std::invalid_argument("good_radii: zero function");

    const double xd = scalar_traits<S>::to_double(x);
    const double ix = g.integral_from_front(xd);
    std::vector<std::pair<double, double>> cands; // (radius, average)
    cands.emplace_back(0.0, g.value_at(xd));
    for (const double r : detail::right_candidate_radii(g, xd)) {
        if (r > 0.0) cands.emplace_back(r, (g.integral_from_front(xd + r) - ix) / r);
    }
    double best = cands.front().second;
    for (const auto& [r, v] : cands) best = std::max(best, v);

    GoodRadiiResult out;
    out.value = best;
    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    for (const auto& [r, v] : cands) {
        if (v >= best - tol) out.radii.push_back(r);
    }
    std::sort(out.radii.begin(), out.radii.end());
    out.radii.erase(std::unique(out.radii.begin(), out.radii.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                    out.radii.end());
    return out;
}

enum class CheckStatus { passed, failed, not_applicable };

inline const char* check_status_name(CheckStatus s) {
    switch (s) {
    case CheckStatus::passed: return "passed";
    case CheckStatus::failed: return "failed";
    case CheckStatus::not_applicable: return "not_applicable";
    }
    return "?";
}

struct DerivativeCheckReport {
    CheckStatus status = CheckStatus::not_applicable;
    double derivative = 0.0;
    std::vector<double> formula_values;
};

// At differentiability points of the right-sided maximal function, its
// derivative equals the averaged derivative of |f| over any maximizing
// window: (1/r)(|f|(x+r) - |f|(x)), and |f|'(x) for the shrinking radius.
template <class S>
DerivativeCheckReport derivative_formula_check(const PiecewiseLinearFunction<S>& f,
                                               const S& x) {
    constexpr double kStep = 1e-6;
    constexpr double kDiffTol = 1e-3;  // two-sided difference agreement
    constexpr double kMatchTol = 1e-4; // formula agreement
    if (!f.has_zero_tails()) {
        throw std::invalid_argument("derivative_formula_check: input must vanish at infinity");
    }
    const auto g = detail::make_abs_view(f);
    const double xd = scalar_traits<S>::to_double(x);
    auto mr = [&](double t) { return detail::one_sided_right_max(g, t).value; };

    const double here = mr(xd);
    const double fwd = (mr(xd + kStep) - here) / kStep;
    const double bwd = (here - mr(xd - kStep)) / kStep;
    DerivativeCheckReport report;
    if (std::abs(fwd - bwd) > kDiffTol) {
        report.status = CheckStatus::not_applicable;
        return report;
    }
    report.derivative = (mr(xd + kStep) - mr(xd - kStep)) / (2.0 * kStep);

    GoodRadiiResult good = good_radii(f, x);
    bool all_match = true;
    for (const double r : good.radii) {
        double formula = 0.0;
        if (r < 1e-12) {
            // need |f|'(x): skip instances sitting on a corner of |f|
            for (const double node : g.xs) {
                if (std::abs(node - xd) < 1e-9) {
                    report.status = CheckStatus::not_applicable;
                    return report;
                }
            }
            const double h = 1e-7;
            formula = (g.value_at(xd + h) - g.value_at(xd - h)) / (2.0 * h);
        } else {
            formula = (g.value_at(xd + r) - g.value_at(xd)) / r;
        }
        report.formula_values.push_back(formula);
        if (std::abs(formula - report.derivative) > kMatchTol) all_match = false;
    }
    report.status = all_match ? CheckStatus::passed : CheckStatus::failed;
    return report;
}

// Grid-resolved decomposition into the set D where the right-sided maximal
// function strictly exceeds |f| and its complement C, with the two sign
// facts: the maximal function is non-decreasing on D, and on C its slope
// agrees with |f|' which is non-positive. Grid points within two steps of a
// corner of |f| are exempt from the slope checks (the statements hold almost
// everywhere).
struct DisconnectingSetReport {
    std::vector<std::pair<double, double>> components;
    long d_interior_points = 0;
    long c_interior_points = 0;
    long d_sign_violations = 0;
    long c_sign_violations = 0;
    bool passed() const { return d_sign_violations == 0 && c_sign_violations == 0; }
};

template <class S>
DisconnectingSetReport disconnecting_set(const PiecewiseLinearFunction<S>& f, double lo,
                                         double hi, double step) {
    constexpr double kContactTol = 1e-9;
    constexpr double kSignTol = 1e-6;
    if (!f.has_zero_tails()) {
        throw std::invalid_argument("disconnecting_set: input must vanish at infinity");
    }
    if (!(step > 0.0) || !(lo < hi)) {
        throw std::invalid_argument("disconnecting_set: bad grid");
    }
    const auto g = detail::make_abs_view(f);
    std::vector<double> xs;
    for (double t = lo; t <= hi + step / 2; t += step) xs.push_back(t);

    std::vector<double> mr(xs.size()), ga(xs.size());
    std::vector<bool> in_d(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mr[i] = detail::one_sided_right_max(g, xs[i]).value;
        ga[i] = g.value_at(xs[i]);
        in_d[i] = mr[i] > ga[i] + kContactTol;
    }

    DisconnectingSetReport report;
    for (std::size_t i = 0; i < xs.size();) {
        if (!in_d[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < xs.size() && in_d[j + 1]) ++j;
        report.components.emplace_back(xs[i], xs[j]);
        i = j + 1;
    }

    auto near_corner = [&](double t) {
        for (const double node : g.xs) {
            if (std::abs(node - t) <= 2.0 * step) return true;
        }
        return false;
    };
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        if (near_corner(xs[i])) continue;
        const double slope_mr = (mr[i + 1] - mr[i - 1]) / (2.0 * step);
        if (in_d[i - 1] && in_d[i] && in_d[i + 1]) {
            ++report.d_interior_points;
            if (slope_mr < -kSignTol) ++report.d_sign_violations;
        } else if (!in_d[i - 1] && !in_d[i] && !in_d[i + 1]) {
            ++report.c_interior_points;
            const double slope_g = (ga[i + 1] - ga[i - 1]) / (2.0 * step);
            if (std::abs(slope_mr - slope_g) > kSignTol || slope_g > kSignTol) {
                ++report.c_sign_violations;
            }
        }
    }
    return report;
}

} // namespace maxlab
