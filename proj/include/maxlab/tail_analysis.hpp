#pragma once

/// \file tail_analysis.hpp
/// Exact far-field analysis of discrete classical maximal profiles.
///
/// Beyond the core hull the candidate reduction collapses: at n >= core_hi+1
/// the profile is the max of finitely many constants and hyperbolas
///   base + mu_l / (sigma*(n - l) + 1),   mu_l > 0 rational,
/// (sigma = 1 uncentered, 2 centered).  This module turns that shape into
/// exact quantities over the infinite tails: total variation and sup-norm of
/// a difference of two profiles over all of Z, with no truncation error.
/// Method: collect integer breakpoints bracketing every winner crossing and
/// every sign change of the forward difference (roots of integer quadratics,
/// bracketed by integer square roots), then exploit that between consecutive
/// breakpoints the difference is monotone, and any unit-length segment is
/// exact by definition.

#include "maxlab/maximal_discrete.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

namespace maxlab {

inline long rational_floor_long(const Rational& x) {
    BigInt n = boost::multiprecision::numerator(x);
    const BigInt d = boost::multiprecision::denominator(x);
    BigInt q = n / d;
    if (q * d != n && n < 0) --q;
    if (q > std::numeric_limits<long>::max() / 4 || q < std::numeric_limits<long>::min() / 4)
        throw std::overflow_error("tail analysis: breakpoint out of long range");
    return q.convert_to<long>();
}

/// Exact model of a classical maximal profile on n >= start.
template <class S>
struct TailModel {
    long start = 0;
    long sigma = 1;
    S base = scalar_traits<S>::from_long(0);
    std::vector<std::pair<long, S>> hyperbolas;  // (l, mu_l) with mu_l > 0
    std::vector<S> constants;                    // candidate plateau values

    S evaluate(long n) const {
        if (n < start) throw std::invalid_argument("tail model: point before start");
        S best = constants.front();
        for (const auto& c : constants)
            if (scalar_traits<S>::compare(best, c) < 0) best = c;
        for (const auto& [l, mu] : hyperbolas) {
            const S v = base + mu / scalar_traits<S>::from_long(sigma * (n - l) + 1);
            if (scalar_traits<S>::compare(best, v) < 0) best = v;
        }
        return best;
    }

    S limit() const {
        S best = constants.front();
        for (const auto& c : constants)
            if (scalar_traits<S>::compare(best, c) < 0) best = c;
        return best;
    }
};

/// Model of the profile of the classical (beta = 0) operator on the right
/// tail n >= core_hi + 1.  For the left tail, model the reflected function.
template <class S>
TailModel<S> right_tail_model(const DiscreteBVFunction<S>& f, bool centered) {
    AbsMassIndex<S> index(f);
    const long lo = index.core_lo(), hi = index.core_hi();
    const S a = index.abs_left_tail(), b = index.abs_right_tail();
    TailModel<S> model;
    model.start = hi + 1;
    model.sigma = centered ? 2 : 1;
    model.base = b;
    model.constants = {a, b};
    if (centered) {
        model.constants = {b, S((a + b) / scalar_traits<S>::from_long(2))};
    }
    for (long l = lo; l <= hi; ++l) {
        const S mu = index.mass(l, hi) - b * scalar_traits<S>::from_long(hi - l + 1);
        if (scalar_traits<S>::compare(mu, scalar_traits<S>::from_long(0)) > 0)
            model.hyperbolas.emplace_back(l, mu);
    }
    return model;
}

namespace detail {

/// Append every integer in [floor(lo)-1, ceil(hi)+1] to out (used to bracket
/// real roots so that any segment not cut here is root-free).
inline void append_integer_bracket(const Rational& lo, const Rational& hi,
                                   std::vector<long>& out) {
    const long first = rational_floor_long(lo) - 1;
    const long last = rational_floor_long(hi) + 2;
    for (long n = first; n <= last; ++n) out.push_back(n);
}

/// Roots of A n^2 + B n + C with rational coefficients: append bracketing
/// integers.  Coefficients are scaled to integers first so the bracket from
/// the integer square root has width <= 1/2.
inline void append_quadratic_root_brackets(const Rational& A, const Rational& B,
                                           const Rational& C, std::vector<long>& out) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    BigInt scale = denominator(A);
    scale = scale / boost::multiprecision::gcd(scale, denominator(B)) * denominator(B);
    scale = scale / boost::multiprecision::gcd(scale, denominator(C)) * denominator(C);
    const Rational rs(scale);
    const BigInt a = numerator(Rational(A * rs));
    const BigInt b = numerator(Rational(B * rs));
    const BigInt c = numerator(Rational(C * rs));
    if (a == 0) {
        if (b == 0) return;
        // boost::rational rejects negative denominators at construction.
        const Rational root = b > 0 ? Rational(-c, b) : Rational(c, -b);
        append_integer_bracket(root, root, out);
        return;
    }
    const BigInt disc = b * b - 4 * a * c;
    if (disc < 0) return;
    const BigInt s_lo = boost::multiprecision::sqrt(disc);
    const BigInt s_hi = s_lo + 1;
    for (const int sign : {-1, 1}) {
        const Rational r1 = Rational(-b + sign * s_lo) / Rational(2 * a);
        const Rational r2 = Rational(-b + sign * s_hi) / Rational(2 * a);
        append_integer_bracket(std::min(r1, r2), std::max(r1, r2), out);
    }
}

/// Linear crossing points among one model's candidates (where the winning
/// candidate can change).
template <class S>
void append_winner_crossings(const TailModel<S>& m, std::vector<long>& out) {
    const long sg = m.sigma;
    for (std::size_t i = 0; i < m.hyperbolas.size(); ++i) {
        const auto& [li, mi] = m.hyperbolas[i];
        // Hyperbola vs hyperbola: mu_i * d_j(n) = mu_j * d_i(n), linear in n.
        for (std::size_t j = i + 1; j < m.hyperbolas.size(); ++j) {
            const auto& [lj, mj] = m.hyperbolas[j];
            const Rational slope = Rational(sg) * Rational(mi - mj);
            const Rational icept =
                Rational(mi) * Rational(1 - sg * lj) - Rational(mj) * Rational(1 - sg * li);
            if (slope == 0) continue;
            const Rational root = -icept / slope;
            append_integer_bracket(root, root, out);
        }
        // Hyperbola vs constant k: only k > base can cross.
        for (const auto& k : m.constants) {
            if (!(scalar_traits<S>::compare(m.base, k) < 0)) continue;
            const Rational dn = Rational(mi) / Rational(k - m.base);  // sigma(n-l)+1 = dn
            const Rational root = (dn - 1 + Rational(sg) * Rational(li)) / Rational(sg);
            append_integer_bracket(root, root, out);
        }
    }
}

/// Sign-change points of the forward difference of P1 - P2 for every pair of
/// candidates; only hyperbola x hyperbola pairs produce non-monotone spans.
template <class S>
void append_difference_roots(const TailModel<S>& m1, const TailModel<S>& m2,
                             std::vector<long>& out) {
    for (const auto& [l1, mu1] : m1.hyperbolas) {
        for (const auto& [l2, mu2] : m2.hyperbolas) {
            const Rational s1(m1.sigma), s2(m2.sigma);
            const Rational c1(1 - m1.sigma * l1), c2(1 - m2.sigma * l2);
            const Rational w1 = Rational(mu2) * s2;  // weight of d1(n)d1(n+1)
            const Rational w2 = Rational(mu1) * s1;  // weight of d2(n)d2(n+1)
            const Rational A = w1 * s1 * s1 - w2 * s2 * s2;
            const Rational B =
                w1 * s1 * (2 * c1 + s1) - w2 * s2 * (2 * c2 + s2);
            const Rational C = w1 * c1 * (c1 + s1) - w2 * c2 * (c2 + s2);
            append_quadratic_root_brackets(A, B, C, out);
        }
    }
}

}  // namespace detail

template <class S>
struct TailDifferenceStats {
    S variation;  // Var_{[start, infinity)}(P1 - P2)
    S sup_abs;    // sup_{n >= start} |P1(n) - P2(n)|
    S limit;      // lim (P1 - P2)
};

/// Exact variation and sup of P1 - P2 over [start, infinity).
template <class S>
TailDifferenceStats<S> analyze_tail_difference(const TailModel<S>& m1, const TailModel<S>& m2,
                                               long start) {
    static_assert(scalar_traits<S>::exact, "tail analysis is certificate-grade only");
    if (start < m1.start || start < m2.start)
        throw std::invalid_argument("analyze_tail_difference: start before model validity");
    std::vector<long> cuts{start};
    detail::append_winner_crossings(m1, cuts);
    detail::append_winner_crossings(m2, cuts);
    detail::append_difference_roots(m1, m2, cuts);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](long n) { return n < start; }),
               cuts.end());

    const S limit = m1.limit() - m2.limit();
    S var = scalar_traits<S>::from_long(0);
    S sup = scalar_traits<S>::abs(limit);
    S prev = m1.evaluate(cuts.front()) - m2.evaluate(cuts.front());
    sup = std::max(sup, scalar_traits<S>::abs(prev),
                   [](const S& x, const S& y) { return scalar_traits<S>::compare(x, y) < 0; });
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const S here = m1.evaluate(cuts[i]) - m2.evaluate(cuts[i]);
        var = var + scalar_traits<S>::abs(here - prev);
        prev = here;
        sup = std::max(sup, scalar_traits<S>::abs(here),
                       [](const S& x, const S& y) { return scalar_traits<S>::compare(x, y) < 0; });
    }
    // Beyond the last cut the difference is monotone toward its limit.
    var = var + scalar_traits<S>::abs(limit - prev);
    return {var, sup, limit};
}

/// Exact Var, sup-norm, and tail limits of (M f) - (M g) over all of Z for
/// the classical operator (centered or uncentered); also usable against the
/// zero function to get exact Var(M f) for the centered operator.
template <class S>
struct DifferenceStats {
    S variation;
    S sup_abs;
    S limit_left;
    S limit_right;
};

template <class S>
DifferenceStats<S> exact_difference_stats(const DiscreteBVFunction<S>& f,
                                          const DiscreteBVFunction<S>& g, bool centered) {
    const OperatorVariant variant =
        centered ? OperatorVariant::centered_op() : OperatorVariant::uncentered();
    const long mid_lo = std::min(f.core_lo(), g.core_lo()) - 1;
    const long mid_hi = std::max(f.core_hi(), g.core_hi()) + 1;

    S var = scalar_traits<S>::from_long(0);
    S sup = scalar_traits<S>::from_long(0);
    std::optional<S> prev;
    for (long n = mid_lo; n <= mid_hi; ++n) {
        const S here = maximal_discrete(f, n, variant).value.coeff -
                       maximal_discrete(g, n, variant).value.coeff;
        if (prev) var = var + scalar_traits<S>::abs(here - *prev);
        if (scalar_traits<S>::compare(sup, scalar_traits<S>::abs(here)) < 0)
            sup = scalar_traits<S>::abs(here);
        prev = here;
    }

    const auto right =
        analyze_tail_difference(right_tail_model(f, centered), right_tail_model(g, centered),
                                mid_hi);
    const auto left = analyze_tail_difference(right_tail_model(f.reflected(), centered),
                                              right_tail_model(g.reflected(), centered), -mid_lo);
    var = var + right.variation + left.variation;
    for (const S& s : {right.sup_abs, left.sup_abs})
        if (scalar_traits<S>::compare(sup, s) < 0) sup = s;
    return {var, sup, left.limit, right.limit};
}

/// Exact Var(M f) over Z for the classical operator, via the difference with
/// the zero function.
template <class S>
S exact_var_of_maximal(const DiscreteBVFunction<S>& f, bool centered) {
    const auto zero = DiscreteBVFunction<S>::constant(scalar_traits<S>::from_long(0));
    return exact_difference_stats(f, zero, centered).variation;
}

}  // namespace maxlab
