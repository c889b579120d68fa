#pragma once

/// \file maximal_discrete.hpp
/// Exact evaluation of the discrete maximal operators (uncentered and
/// centered, classical and fractional) by candidate reduction.
///
/// The key fact used throughout: extending a window into a constant-tail
/// region moves its average monotonically toward the tail value (the average
/// is a Moebius function of the extension length), so the supremum over all
/// windows equals the maximum over windows with endpoints near the core hull
/// plus finitely many tail-limit candidates.  This keeps every evaluation
/// exact and O(width^2) per point.

#include "maxlab/functions.hpp"
#include "maxlab/root_value.hpp"
#include "maxlab/variation.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <vector>

namespace maxlab {

/// Prefix-sum index over |f| for O(1) exact window masses.
template <class S>
class AbsMassIndex {
  public:
    explicit AbsMassIndex(const DiscreteBVFunction<S>& f)
        : lo_(f.core_lo()), hi_(f.core_hi()), a_(scalar_traits<S>::abs(f.left_tail())),
          b_(scalar_traits<S>::abs(f.right_tail())) {
        prefix_.reserve(f.core_values().size() + 1);
        prefix_.push_back(scalar_traits<S>::from_long(0));
        for (const auto& v : f.core_values())
            prefix_.push_back(prefix_.back() + scalar_traits<S>::abs(v));
    }

    long core_lo() const { return lo_; }
    long core_hi() const { return hi_; }
    const S& abs_left_tail() const { return a_; }
    const S& abs_right_tail() const { return b_; }

    /// Sum of |f(k)| over l <= k <= r (l <= r required).
    S mass(long l, long r) const {
        if (l > r) throw std::invalid_argument("mass: empty window");
        S total = scalar_traits<S>::from_long(0);
        if (l < lo_) {
            const long cells = std::min(r, lo_ - 1) - l + 1;
            total = total + a_ * scalar_traits<S>::from_long(cells);
        }
        if (r > hi_) {
            const long cells = r - std::max(l, hi_ + 1) + 1;
            total = total + b_ * scalar_traits<S>::from_long(cells);
        }
        const long cl = std::max(l, lo_), cr = std::min(r, hi_);
        if (cl <= cr)
            total = total + prefix_[static_cast<std::size_t>(cr - lo_ + 1)] -
                    prefix_[static_cast<std::size_t>(cl - lo_)];
        return total;
    }

  private:
    long lo_, hi_;
    S a_, b_;
    std::vector<S> prefix_;
};

enum class TailSide { left, right, centered };

inline const char* tail_side_name(TailSide t) {
    switch (t) {
        case TailSide::left: return "left";
        case TailSide::right: return "right";
        default: return "centered";
    }
}

/// Result of one maximal-operator evaluation at one point.
///
/// Exactly one of three states holds: divergent (value +infinity, no
/// witness); attained (witness window [window_l, window_r]); or a supremum
/// realized only in the limit (tail_limit says which tail).
template <class S>
struct MaxEvaluation {
    RootValue<S> value;
    bool divergent = false;
    bool attained = false;
    long window_l = 0;
    long window_r = 0;
    std::optional<TailSide> tail_limit;

    long window_len() const { return window_r - window_l + 1; }
};

/// (r+s+1)^(beta-1) * sum_{k=-r..s} |f(n+k)|.  Exact rational for beta = 0,
/// exact root value for fractional beta in rational mode.
template <class S>
RootValue<S> window_average_discrete(const DiscreteBVFunction<S>& f, long n, long r, long s,
                                     const Beta& beta) {
    if (r < 0 || s < 0) throw std::invalid_argument("window_average_discrete: negative r or s");
    AbsMassIndex<S> index(f);
    return RootValue<S>::window(index.mass(n - r, n + s),
                                scalar_traits<S>::from_long(r + s + 1), beta);
}

namespace detail {

/// Candidate bookkeeping with the witness tie-break baked into one
/// comparator: larger value, then attained before limit, then smaller
/// window, then smaller left endpoint.
template <class S>
struct BestCandidate {
    std::optional<MaxEvaluation<S>> best;

    void offer_window(const RootValue<S>& value, long l, long r) {
        if (best) {
            const int c = RootValue<S>::compare(value, best->value);
            if (c < 0) return;
            if (c == 0 && best->attained) {
                const long len = r - l + 1;
                if (len > best->window_len()) return;
                if (len == best->window_len() && l >= best->window_l) return;
            }
            // A window beats a tail limit of equal value.
        }
        MaxEvaluation<S> e;
        e.value = value;
        e.attained = true;
        e.window_l = l;
        e.window_r = r;
        best = std::move(e);
    }

    void offer_tail(const RootValue<S>& value, TailSide side) {
        if (best && RootValue<S>::compare(value, best->value) <= 0) return;
        MaxEvaluation<S> e;
        e.value = value;
        e.tail_limit = side;
        best = std::move(e);
    }
};

template <class S>
bool divergent_fractional(const AbsMassIndex<S>& index, const Beta& beta) {
    const S zero = scalar_traits<S>::from_long(0);
    return !beta.is_zero() &&
           (scalar_traits<S>::compare(index.abs_left_tail(), zero) != 0 ||
            scalar_traits<S>::compare(index.abs_right_tail(), zero) != 0);
}

template <class S>
MaxEvaluation<S> divergent_result() {
    MaxEvaluation<S> e;
    e.divergent = true;
    e.value = RootValue<S>(scalar_traits<S>::from_long(0));
    return e;
}

template <class S>
MaxEvaluation<S> maximal_uncentered(const AbsMassIndex<S>& index, long n, const Beta& beta) {
    const long lo = index.core_lo(), hi = index.core_hi();
    BestCandidate<S> best;
    // Left endpoints: hull range clipped at n, plus n itself; windows with
    // both endpoints in one tail collapse to the single-cell candidate.
    std::vector<long> lefts;
    for (long l = std::min(n, lo); l <= std::min(n, hi + 1); ++l) lefts.push_back(l);
    if (lefts.empty() || lefts.back() != n) lefts.push_back(n);
    const long r_hi = std::max(n, hi);
    for (const long l : lefts) {
        S mass = l < n ? index.mass(l, n - 1) : scalar_traits<S>::from_long(0);
        for (long r = n; r <= r_hi; ++r) {
            mass = mass + index.mass(r, r);
            best.offer_window(
                RootValue<S>::window(mass, scalar_traits<S>::from_long(r - l + 1), beta), l, r);
        }
    }
    if (beta.is_zero()) {
        best.offer_tail(RootValue<S>(index.abs_left_tail()), TailSide::left);
        best.offer_tail(RootValue<S>(index.abs_right_tail()), TailSide::right);
    }
    return *best.best;
}

template <class S>
MaxEvaluation<S> maximal_centered(const AbsMassIndex<S>& index, long n, const Beta& beta) {
    const long lo = index.core_lo(), hi = index.core_hi();
    BestCandidate<S> best;
    // Radii: everything out to the far hull edge matters when n sits inside
    // the hull; outside it, windows contained in one tail are constant, so
    // only radius 0 and the hull-crossing radii remain.
    long rho_first = 0, rho_last = std::max(std::labs(n - lo), std::labs(n - hi));
    if (n > hi) rho_first = n - hi;
    if (n < lo) rho_first = lo - n;
    best.offer_window(RootValue<S>::window(index.mass(n, n), scalar_traits<S>::from_long(1), beta),
                      n, n);
    S mass = rho_first > 0 ? index.mass(n - rho_first + 1, n + rho_first - 1)
                           : index.mass(n, n);
    for (long rho = std::max(rho_first, 1L); rho <= rho_last; ++rho) {
        mass = mass + index.mass(n - rho, n - rho) + index.mass(n + rho, n + rho);
        best.offer_window(
            RootValue<S>::window(mass, scalar_traits<S>::from_long(2 * rho + 1), beta), n - rho,
            n + rho);
    }
    if (beta.is_zero()) {
        const S half_sum =
            (index.abs_left_tail() + index.abs_right_tail()) / scalar_traits<S>::from_long(2);
        best.offer_tail(RootValue<S>(half_sum), TailSide::centered);
    }
    return *best.best;
}

}  // namespace detail

/// Exact supremum of window averages at point n, with witness.
/// Fractional beta with a nonzero tail diverges (flagged, not thrown).
template <class S>
MaxEvaluation<S> maximal_discrete(const DiscreteBVFunction<S>& f, long n,
                                  const OperatorVariant& variant) {
    if (variant.side != Side::two_sided)
        throw std::invalid_argument("maximal_discrete: one-sided variants are not defined on Z");
    AbsMassIndex<S> index(f);
    if (detail::divergent_fractional(index, variant.beta)) return detail::divergent_result<S>();
    return variant.centered ? detail::maximal_centered(index, n, variant.beta)
                            : detail::maximal_uncentered(index, n, variant.beta);
}

/// One-sided discrete suprema (classical only).  Not part of the operator
/// variant surface: on Z the paper-level operators are two-sided, but the
/// identity "two-sided = max of the two one-sided" is worth checking, so the
/// structure module gets these as separate entry points.
template <class S>
MaxEvaluation<S> maximal_one_sided_discrete(const DiscreteBVFunction<S>& f, long n, Side side) {
    if (side == Side::two_sided)
        throw std::invalid_argument("maximal_one_sided_discrete: pick left or right");
    AbsMassIndex<S> index(f);
    detail::BestCandidate<S> best;
    const Beta beta{};
    if (side == Side::right) {
        const long r_hi = std::max({n, index.core_lo() - 1, index.core_hi()});
        S mass = scalar_traits<S>::from_long(0);
        for (long r = n; r <= r_hi; ++r) {
            mass = mass + index.mass(r, r);
            best.offer_window(
                RootValue<S>::window(mass, scalar_traits<S>::from_long(r - n + 1), beta), n, r);
        }
        best.offer_tail(RootValue<S>(index.abs_right_tail()), TailSide::right);
    } else {
        const long l_lo = std::min({n, index.core_lo(), index.core_hi() + 1});
        S mass = scalar_traits<S>::from_long(0);
        for (long l = n; l >= l_lo; --l) {
            mass = mass + index.mass(l, l);
            best.offer_window(
                RootValue<S>::window(mass, scalar_traits<S>::from_long(n - l + 1), beta), l, n);
        }
        best.offer_tail(RootValue<S>(index.abs_left_tail()), TailSide::left);
    }
    return *best.best;
}

/// Batch evaluation over a finite integer range, plus the exact tail values
/// the profile approaches on each side (equal to max(|a|, |b|) for the
/// uncentered classical operator; the centered operator mixes in the
/// two-sided limit (|a|+|b|)/2).
template <class S>
struct DiscreteProfile {
    long lo = 0;
    std::vector<MaxEvaluation<S>> entries;
    RootValue<S> tail_value_left;
    RootValue<S> tail_value_right;

    const MaxEvaluation<S>& at(long n) const {
        return entries.at(static_cast<std::size_t>(n - lo));
    }
    long hi() const { return lo + static_cast<long>(entries.size()) - 1; }
};

template <class S>
RootValue<S> profile_tail_value(const DiscreteBVFunction<S>& f, const OperatorVariant& variant,
                                Side which) {
    AbsMassIndex<S> index(f);
    if (!variant.beta.is_zero())
        return RootValue<S>(scalar_traits<S>::from_long(0));
    const S a = index.abs_left_tail(), b = index.abs_right_tail();
    const S c = scalar_traits<S>::compare(a, b) < 0 ? b : a;
    if (!variant.centered) return RootValue<S>(c);
    const S half_sum = (a + b) / scalar_traits<S>::from_long(2);
    const S near = which == Side::right ? b : a;
    return RootValue<S>(scalar_traits<S>::compare(near, half_sum) < 0 ? half_sum : near);
}

template <class S>
DiscreteProfile<S> maximal_profile_discrete(const DiscreteBVFunction<S>& f, long from, long to,
                                            const OperatorVariant& variant) {
    if (from > to) throw std::invalid_argument("maximal_profile_discrete: empty range");
    DiscreteProfile<S> out;
    out.lo = from;
    out.entries.reserve(static_cast<std::size_t>(to - from + 1));
    for (long n = from; n <= to; ++n) out.entries.push_back(maximal_discrete(f, n, variant));
    out.tail_value_left = profile_tail_value(f, variant, Side::left);
    out.tail_value_right = profile_tail_value(f, variant, Side::right);
    return out;
}

/// Exact total variation of the uncentered classical maximal function over
/// all of Z.  Beyond the core hull the profile is monotone toward
/// c = max(|a|, |b|) (same window-containment argument as the candidate
/// reduction), so the two infinite tails contribute exactly
/// (profile(edge) - c) each.
template <class S>
S exact_var_of_maximal_uncentered(const DiscreteBVFunction<S>& f) {
    const OperatorVariant variant = OperatorVariant::uncentered();
    const long lo = f.core_lo(), hi = f.core_hi();
    std::vector<S> values;
    values.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long n = lo; n <= hi; ++n)
        values.push_back(maximal_discrete(f, n, variant).value.coeff);
    S total = scalar_traits<S>::from_long(0);
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        total = total + scalar_traits<S>::abs(values[i + 1] - values[i]);
    const S a = scalar_traits<S>::abs(f.left_tail()), b = scalar_traits<S>::abs(f.right_tail());
    const S c = scalar_traits<S>::compare(a, b) < 0 ? b : a;
    return total + (values.front() - c) + (values.back() - c);
}

}  // namespace maxlab
