#pragma once

// Maximal operators on the real line for step and piecewise-linear inputs.
//
// Step functions admit fully exact optimization for every admissible variant:
// the best window either has both endpoints on the breakpoint/center vertex
// set, or one endpoint fixed on that set while the other solves the rational
// stationarity condition  m * (R - L) = (1 - beta) * (P(R) - P(L)),  where m
// is the slope of the antiderivative P of |f| on the piece containing the
// free endpoint.  Joint interior stationary points would force the two piece
// slopes to agree and are therefore dominated by edge candidates.
//
// Piecewise-linear inputs are handled for the classical operators (beta = 0)
// with closed-form per-piece quadratic stationary radii; those roots are
// generally irrational, so this path works in float64 with a documented
// comparison tolerance.

#include "maxlab/functions.hpp"
#include "maxlab/root_value.hpp"
#include "maxlab/scalar.hpp"
#include "maxlab/variation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace maxlab {

enum class WindowKind {
    attained,
    left_tail_limit,
    right_tail_limit,
    centered_tail_limit,
    shrink_limit,
};

inline const char* window_kind_name(WindowKind k) {
    switch (k) {
    case WindowKind::attained: return "attained";
    case WindowKind::left_tail_limit: return "left_tail_limit";
    case WindowKind::right_tail_limit: return "right_tail_limit";
    case WindowKind::centered_tail_limit: return "centered_tail_limit";
    case WindowKind::shrink_limit: return "shrink_limit";
    }
    return "?";
}

template <class S>
struct RealWindow {
    S left{};
    S right{};
    WindowKind kind = WindowKind::attained;
};

// Result of optimizing a step function window. Exact in rational mode.
template <class S>
struct StepMaxEvaluation {
    RootValue<S> value;
    RealWindow<S> window;
    bool divergent = false;
};

// Result of optimizing a piecewise-linear classical average. The stationary
// radii solve quadratics, so both the value and the window live in float64.
struct PwlMaxEvaluation {
    double value = 0.0;
    RealWindow<double> window;
};

// Average of |f| over [x - r, x + s] with the variant's normalization
// (r + s)^(beta - 1).  Degenerate windows: an error for beta = 0, and the
// defined value 0 for beta > 0.
template <class S, class F>
RootValue<S> window_average_continuous(const F& f, const S& x, const S& r, const S& s,
                                       const Beta& beta) {
    const S zero = scalar_traits<S>::from_long(0);
    if (scalar_lt<S>(r, zero) || scalar_lt<S>(s, zero)) {
        throw std::invalid_argument("window_average_continuous: negative radius");
    }
    const S len = r + s;
    if (!scalar_lt<S>(zero, len)) {
        if (beta.is_zero()) {
            throw std::invalid_argument(
                "window_average_continuous: zero-length window with beta = 0");
        }
        return RootValue<S>::zero();
    }
    const S mass = integral_abs(f, x - r, x + s);
    return RootValue<S>::window(mass, len, beta);
}

// Converts a Beta to the scalar type (exact for rational scalars).
template <class S>
S beta_as(const Beta& beta) {
    return scalar_traits<S>::from_long(beta.num) / scalar_traits<S>::from_long(beta.den);
}

namespace detail {

// Candidate accumulator for exact step-function optimization. Prefers larger
// value, then attained over limit witnesses, then shorter windows, then the
// leftmost window.
template <class S>
class BestContCandidate {
public:
    void offer_window(const RootValue<S>& value, const S& left, const S& right) {
        if (!best_) {
            set(value, left, right, WindowKind::attained);
            return;
        }
        const int c = RootValue<S>::compare(value, best_->value);
        if (c < 0) return;
        if (c == 0) {
            if (best_->window.kind != WindowKind::attained) {
                set(value, left, right, WindowKind::attained);
                return;
            }
            const S new_len = right - left;
            const S old_len = best_->window.right - best_->window.left;
            if (scalar_lt<S>(old_len, new_len)) return;
            if (scalar_eq<S>(old_len, new_len) &&
                !scalar_lt<S>(left, best_->window.left)) {
                return;
            }
        }
        set(value, left, right, WindowKind::attained);
    }

    void offer_limit(const RootValue<S>& value, const S& at, WindowKind kind) {
        if (best_ && RootValue<S>::compare(value, best_->value) <= 0) return;
        set(value, at, at, kind);
    }

    bool has_value() const { return best_.has_value(); }

    StepMaxEvaluation<S> take() const {
        if (!best_) throw std::logic_error("BestContCandidate: no candidates offered");
        return *best_;
    }

private:
    void set(const RootValue<S>& value, const S& left, const S& right, WindowKind kind) {
        StepMaxEvaluation<S> e;
        e.value = value;
        e.window = RealWindow<S>{left, right, kind};
        best_ = e;
    }

    std::optional<StepMaxEvaluation<S>> best_;
};

// Vertex set for uncentered step optimization: breakpoints plus the center.
template <class S>
std::vector<S> step_vertices(const StepFunction<S>& f, const S& x) {
    std::vector<S> vs = f.breakpoints();
    vs.push_back(x);
    std::sort(vs.begin(), vs.end(),
              [](const S& a, const S& b) { return scalar_lt<S>(a, b); });
    vs.erase(std::unique(vs.begin(), vs.end(),
                         [](const S& a, const S& b) { return scalar_eq<S>(a, b); }),
             vs.end());
    return vs;
}

// Value of |f| on the piece immediately left / right of t.
template <class S>
S abs_value_left_of(const StepFunction<S>& f, const S& t) {
    const auto& bps = f.breakpoints();
    const auto& vals = f.piece_values();
    std::size_t idx = 0;
    while (idx < bps.size() && scalar_lt<S>(bps[idx], t)) ++idx;
    // pieces: vals[i] on (bps[i-1], bps[i]); left of t is piece index idx.
    return scalar_traits<S>::abs(vals[idx]);
}

template <class S>
S abs_value_right_of(const StepFunction<S>& f, const S& t) {
    const auto& bps = f.breakpoints();
    const auto& vals = f.piece_values();
    std::size_t idx = 0;
    while (idx < bps.size() && !scalar_lt<S>(t, bps[idx])) ++idx;
    return scalar_traits<S>::abs(vals[idx]);
}

// Stationary right endpoint for a fixed left endpoint: on a piece of |f|
// with value m over (piece_lo, piece_hi), solve
//   m (R - L) = (1 - beta) (I(L, piece_lo) + m (R - piece_lo)).
// Exact and rational whenever the inputs are.
template <class S>
std::optional<S> stationary_right(const S& left, const S& piece_lo, const S& piece_value,
                                  const S& mass_left_to_piece, const Beta& beta) {
    const S zero = scalar_traits<S>::from_long(0);
    if (scalar_eq<S>(piece_value, zero)) return std::nullopt;
    // R = [ L - (1-beta) piece_lo + (1-beta) C / m ] / beta
    const S one = scalar_traits<S>::from_long(1);
    const S b = beta_as<S>(beta);
    const S omb = one - b;
    const S r = (left - omb * piece_lo + omb * mass_left_to_piece / piece_value) / b;
    return r;
}

template <class S>
std::optional<S> stationary_left(const S& right, const S& piece_hi, const S& piece_value,
                                 const S& mass_piece_to_right, const Beta& beta) {
    const S zero = scalar_traits<S>::from_long(0);
    if (scalar_eq<S>(piece_value, zero)) return std::nullopt;
    // L = [ m R - (1-beta) C - (1-beta) m piece_hi ] / (beta m)
    const S one = scalar_traits<S>::from_long(1);
    const S b = beta_as<S>(beta);
    const S omb = one - b;
    const S l =
        (right - omb * mass_piece_to_right / piece_value - omb * piece_hi) / b;
    return l;
}

} // namespace detail

// Exact evaluation of the maximal operator applied to a step function at x.
// Uncentered and centered variants, all admissible beta. For beta > 0 a
// nonzero tail makes every window value unbounded; the result is flagged
// divergent rather than thrown.
template <class S>
StepMaxEvaluation<S> step_max_continuous(const StepFunction<S>& f, const S& x,
                                         const OperatorVariant& variant) {
    if (variant.side != Side::two_sided) {
        throw std::invalid_argument("step_max_continuous: one-sided variants take "
                                    "piecewise-linear inputs");
    }
    const S zero = scalar_traits<S>::from_long(0);
    const auto& vals = f.piece_values();
    const S tail_left = scalar_traits<S>::abs(vals.front());
    const S tail_right = scalar_traits<S>::abs(vals.back());

    if (!variant.beta.is_zero() &&
        (!scalar_eq<S>(tail_left, zero) || !scalar_eq<S>(tail_right, zero))) {
        StepMaxEvaluation<S> e;
        e.divergent = true;
        e.window = RealWindow<S>{x, x, WindowKind::attained};
        return e;
    }

    detail::BestContCandidate<S> best;
    const std::vector<S> verts = detail::step_vertices(f, x);
    const Beta beta = variant.beta;

    auto offer = [&](const S& left, const S& right) {
        if (!scalar_lt<S>(left, right)) return;
        if (scalar_lt<S>(x, right) && scalar_lt<S>(x, left)) return;
        if (scalar_lt<S>(left, x) && scalar_lt<S>(right, x)) return;
        const S mass = integral_abs(f, left, right);
        best.offer_window(RootValue<S>::window(mass, right - left, beta), left, right);
    };

    if (!variant.centered) {
        for (const S& left : verts) {
            if (scalar_lt<S>(x, left)) continue;
            for (const S& right : verts) {
                if (scalar_lt<S>(right, x)) continue;
                offer(left, right);
            }
        }
        if (!beta.is_zero()) {
            // One endpoint fixed on the vertex set, the other stationary
            // inside a piece.
            // Bounded pieces have index p in [1, k-1] and span
            // (breakpoint[p-1], breakpoint[p]); the zero tail pieces cannot
            // host a stationary maximum.
            const auto& bps = f.breakpoints();
            for (const S& left : verts) {
                if (scalar_lt<S>(x, left)) continue;
                for (std::size_t p = 1; p < bps.size(); ++p) {
                    const S lo_p = bps[p - 1];
                    const S hi_p = bps[p];
                    const S m = scalar_traits<S>::abs(vals[p]);
                    const S anchor = scalar_lt<S>(lo_p, left) ? left : lo_p;
                    const S from = scalar_lt<S>(anchor, x) ? x : anchor;
                    if (!scalar_lt<S>(from, hi_p)) continue;
                    const S mass_to_anchor = integral_abs(f, left, anchor);
                    auto r = detail::stationary_right<S>(left, anchor, m, mass_to_anchor, beta);
                    if (!r) continue;
                    if (scalar_lt<S>(*r, from) || scalar_lt<S>(hi_p, *r)) continue;
                    offer(left, *r);
                }
            }
            for (const S& right : verts) {
                if (scalar_lt<S>(right, x)) continue;
                for (std::size_t p = 1; p < bps.size(); ++p) {
                    const S lo_p = bps[p - 1];
                    const S hi_p = bps[p];
                    const S m = scalar_traits<S>::abs(vals[p]);
                    const S anchor = scalar_lt<S>(right, hi_p) ? right : hi_p;
                    const S to = scalar_lt<S>(x, anchor) ? x : anchor;
                    if (!scalar_lt<S>(lo_p, to)) continue;
                    const S mass_from_anchor = integral_abs(f, anchor, right);
                    auto l = detail::stationary_left<S>(right, anchor, m, mass_from_anchor, beta);
                    if (!l) continue;
                    if (scalar_lt<S>(*l, lo_p) || scalar_lt<S>(to, *l)) continue;
                    offer(*l, right);
                }
            }
        }
        if (beta.is_zero()) {
            best.offer_limit(RootValue<S>(tail_left), x, WindowKind::left_tail_limit);
            best.offer_limit(RootValue<S>(tail_right), x, WindowKind::right_tail_limit);
            const S shrink =
                std::max(detail::abs_value_left_of(f, x), detail::abs_value_right_of(f, x),
                         [](const S& a, const S& b) { return scalar_lt<S>(a, b); });
            best.offer_limit(RootValue<S>(shrink), x, WindowKind::shrink_limit);
        } else {
            best.offer_limit(RootValue<S>::zero(), x, WindowKind::shrink_limit);
        }
        return best.take();
    }

    // Centered: windows [x - rho, x + rho]. Candidate radii are the
    // distances to breakpoints; between consecutive radii both window ends
    // move through fixed pieces, so the mass is affine in rho and the only
    // interior extremum solves rho * M = (1 - beta) * I(rho) with
    // M = |f|(x + rho) + |f|(x - rho).
    std::vector<S> radii;
    for (const S& t : f.breakpoints()) {
        const S d = scalar_traits<S>::abs(t - x);
        if (scalar_lt<S>(zero, d)) radii.push_back(d);
    }
    std::sort(radii.begin(), radii.end(),
              [](const S& a, const S& b) { return scalar_lt<S>(a, b); });
    radii.erase(std::unique(radii.begin(), radii.end(),
                            [](const S& a, const S& b) { return scalar_eq<S>(a, b); }),
                radii.end());

    auto offer_radius = [&](const S& rho) {
        if (!scalar_lt<S>(zero, rho)) return;
        const S mass = integral_abs(f, x - rho, x + rho);
        const S two = scalar_traits<S>::from_long(2);
        best.offer_window(RootValue<S>::window(mass, two * rho, beta), x - rho, x + rho);
    };
    for (const S& rho : radii) offer_radius(rho);

    if (!beta.is_zero()) {
        const S one = scalar_traits<S>::from_long(1);
        const S b = beta_as<S>(beta);
        std::vector<S> cuts;
        cuts.push_back(zero);
        cuts.insert(cuts.end(), radii.begin(), radii.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const S lo = cuts[i];
            const S hi = cuts[i + 1];
            const S mid = (lo + hi) / scalar_traits<S>::from_long(2);
            const S m_sum = scalar_traits<S>::abs(f.evaluate(x + mid)) +
                            scalar_traits<S>::abs(f.evaluate(x - mid));
            if (scalar_eq<S>(m_sum, zero)) continue;
            const S mass_lo = integral_abs(f, x - lo, x + lo);
            // rho M = (1-beta) [C + M (rho - lo)]  =>  beta M rho = (1-beta)(C - M lo)
            const S rho = (one - b) * (mass_lo - m_sum * lo) / (b * m_sum);
            if (scalar_lt<S>(lo, rho) && scalar_lt<S>(rho, hi)) offer_radius(rho);
        }
        best.offer_limit(RootValue<S>::zero(), x, WindowKind::shrink_limit);
    } else {
        const S two = scalar_traits<S>::from_long(2);
        const S tail_avg = (tail_left + tail_right) / two;
        best.offer_limit(RootValue<S>(tail_avg), x, WindowKind::centered_tail_limit);
        const S shrink = (detail::abs_value_left_of(f, x) +
                          detail::abs_value_right_of(f, x)) /
                         two;
        best.offer_limit(RootValue<S>(shrink), x, WindowKind::shrink_limit);
    }
    return best.take();
}

namespace detail {

// Float view of |f| for the classical piecewise-linear optimizers: node
// coordinates, values, and prefix integrals of the absolute value.
struct PwlAbsView {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> prefix; // prefix[i] = integral of |f| over [xs0, xs_i]

    double value_at(double t) const {
        if (xs.empty()) return 0.0;
        if (t <= xs.front()) return ys.front();
        if (t >= xs.back()) return ys.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double w = (t - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ys[i - 1] + w * (ys[i] - ys[i - 1]);
    }

    double integral_from_front(double t) const {
        if (xs.empty() || t <= xs.front()) return 0.0;
        if (t >= xs.back()) return prefix.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double y = value_at(t);
        return prefix[i - 1] + 0.5 * (ys[i - 1] + y) * (t - xs[i - 1]);
    }

    double integral(double a, double b) const {
        return integral_from_front(b) - integral_from_front(a);
    }
};

template <class S>
PwlAbsView make_abs_view(const PiecewiseLinearFunction<S>& f) {
    const auto g = f.abs();
    PwlAbsView v;
    const auto& gx = g.node_x();
    const auto& gy = g.node_y();
    v.xs.reserve(gx.size());
    v.ys.reserve(gy.size());
    for (std::size_t i = 0; i < gx.size(); ++i) {
        v.xs.push_back(scalar_traits<S>::to_double(gx[i]));
        v.ys.push_back(scalar_traits<S>::to_double(gy[i]));
    }
    v.prefix.assign(v.xs.size(), 0.0);
    for (std::size_t i = 1; i < v.xs.size(); ++i) {
        v.prefix[i] =
            v.prefix[i - 1] + 0.5 * (v.ys[i - 1] + v.ys[i]) * (v.xs[i] - v.xs[i - 1]);
    }
    return v;
}

// All candidate radii r > 0 for the right-sided optimum at x: distances to
// nodes beyond x, plus per-piece stationary roots. With g(t) = m t + q on a
// piece, a stationary average satisfies g(R) (R - x) = integral over [x, R],
// the quadratic
//   (m/2) R^2 - (m x) R + [q u - q x + (m/2) u^2 - J(u)] = 0
// where u is the piece start and J(u) the integral over [x, u].
inline std::vector<double> right_candidate_radii(const PwlAbsView& g, double x) {
    constexpr double kEps = 1e-12;
    std::vector<double> radii;
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
        if (g.xs[i] > x) radii.push_back(g.xs[i] - x);
    }
    const double ix = g.integral_from_front(x);
    for (std::size_t i = 0; i + 1 < g.xs.size(); ++i) {
        const double u = std::max(g.xs[i], x);
        const double v = g.xs[i + 1];
        if (v <= u) continue;
        const double dx = g.xs[i + 1] - g.xs[i];
        const double m = (g.ys[i + 1] - g.ys[i]) / dx;
        if (std::abs(m) < kEps) continue;
        const double q = g.ys[i] - m * g.xs[i];
        const double ju = g.integral_from_front(u) - ix;
        const double a = 0.5 * m;
        const double b = -m * x;
        const double c = q * u - q * x + 0.5 * m * u * u - ju;
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) continue;
        const double sq = std::sqrt(disc);
        for (const double root : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
            if (root > u + kEps && root < v - kEps) radii.push_back(root - x);
        }
    }
    return radii;
}

// Right-sided classical maximal value sup_{r > 0} (1/r) * integral over
// [x, x + r] of the precomputed |f| view. Zero tails assumed.
inline PwlMaxEvaluation one_sided_right_max(const PwlAbsView& g, double x) {
    constexpr double kEps = 1e-12;
    PwlMaxEvaluation best;
    best.value = g.value_at(x);
    best.window = RealWindow<double>{x, x, WindowKind::shrink_limit};

    const double ix = g.integral_from_front(x);
    for (const double r : right_candidate_radii(g, x)) {
        if (r <= 0.0) continue;
        const double avg = (g.integral_from_front(x + r) - ix) / r;
        const bool better = avg > best.value + kEps;
        const bool tie = std::abs(avg - best.value) <= kEps;
        const bool shorter =
            best.window.kind != WindowKind::attained ||
            r < (best.window.right - best.window.left) - kEps;
        if (better || (tie && shorter)) {
            best.value = std::max(avg, best.value);
            best.window = RealWindow<double>{x, x + r, WindowKind::attained};
        }
    }
    return best;
}

inline PwlAbsView reflect_view(const PwlAbsView& g) {
    PwlAbsView r;
    const std::size_t n = g.xs.size();
    r.xs.resize(n);
    r.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.xs[i] = -g.xs[n - 1 - i];
        r.ys[i] = g.ys[n - 1 - i];
    }
    r.prefix.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        r.prefix[i] =
            r.prefix[i - 1] + 0.5 * (r.ys[i - 1] + r.ys[i]) * (r.xs[i] - r.xs[i - 1]);
    }
    return r;
}

} // namespace detail

// Classical one-sided maximal operator for piecewise-linear inputs with zero
// tails. side = right optimizes windows [x, x + r]; side = left mirrors.
template <class S>
PwlMaxEvaluation one_sided_max(const PiecewiseLinearFunction<S>& f, const S& x,
                               Side side) {
    if (side == Side::two_sided) {
        throw std::invalid_argument("one_sided_max: side must be left or right");
    }
    if (!f.has_zero_tails()) {
        throw std::invalid_argument("one_sided_max: input must vanish at infinity");
    }
    const auto g = detail::make_abs_view(f);
    const double xd = scalar_traits<S>::to_double(x);
    if (side == Side::right) {
        return detail::one_sided_right_max(g, xd);
    }
    const auto gr = detail::reflect_view(g);
    PwlMaxEvaluation e = detail::one_sided_right_max(gr, -xd);
    const double l = -e.window.right;
    const double r = -e.window.left;
    e.window.left = l;
    e.window.right = r;
    return e;
}

// Classical uncentered maximal operator for piecewise-linear inputs: the
// larger of the two one-sided values (two-sided windows never beat the better
// one-sided window for the classical average).
template <class S>
PwlMaxEvaluation uncentered_max_continuous(const PiecewiseLinearFunction<S>& f,
                                           const S& x) {
    const PwlMaxEvaluation right = one_sided_max(f, x, Side::right);
    const PwlMaxEvaluation left = one_sided_max(f, x, Side::left);
    return left.value > right.value ? left : right;
}

// Samples a maximal-function profile over a strictly increasing grid.
// Step inputs accept every variant; piecewise-linear inputs accept the
// classical (beta = 0) uncentered and one-sided variants.
template <class S>
SampledProfile<S> profile_continuous(const StepFunction<S>& f, const std::vector<S>& grid,
                                     const OperatorVariant& variant) {
    SampledProfile<S> out;
    for (const S& x : grid) {
        const auto e = step_max_continuous(f, x, variant);
        if (e.divergent) {
            throw std::invalid_argument("profile_continuous: divergent fractional input");
        }
        out.push(x, e.value.value());
    }
    return out;
}

template <class S>
SampledProfile<S> profile_continuous(const PiecewiseLinearFunction<S>& f,
                                     const std::vector<S>& grid,
                                     const OperatorVariant& variant) {
    if (!variant.beta.is_zero()) {
        throw std::invalid_argument(
            "profile_continuous: fractional operators on piecewise-linear inputs are "
            "out of scope");
    }
    if (variant.centered) {
        throw std::invalid_argument(
            "profile_continuous: centered piecewise-linear path not provided");
    }
    SampledProfile<S> out;
    for (const S& x : grid) {
        const double v = variant.side == Side::two_sided
                             ? uncentered_max_continuous(f, x).value
                             : one_sided_max(f, x, variant.side).value;
        out.push(x, v);
    }
    return out;
}

} // namespace maxlab
