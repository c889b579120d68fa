#pragma once

/// \file functions.hpp
/// The three finitely-describable function classes everything else works on:
///
///  - DiscreteBVFunction: Z -> S, eventually constant on both sides, so its
///    total variation is automatically finite;
///  - StepFunction: R -> S, piecewise constant with finitely many jumps;
///  - PiecewiseLinearFunction: R -> S, continuous interpolant of finitely
///    many nodes with constant tail extensions.
///
/// All three are immutable after construction and canonicalized so that
/// structural equality decides functional equality.

#include "maxlab/scalar.hpp"

#include <optional>
#include <vector>

namespace maxlab {

/// Eventually-constant function on the integers.
///
/// f(n) = left_tail for n < core_lo, core value for core_lo <= n <= core_hi,
/// right_tail for n > core_hi.  Canonical form trims core cells equal to the
/// adjacent tail (keeping at least one cell), so core_values.front() differs
/// from the left tail unless the core has width 1, and symmetrically.
template <class S>
class DiscreteBVFunction {
  public:
    DiscreteBVFunction(long core_lo, std::vector<S> core_values, S left_tail, S right_tail)
        : lo_(core_lo), core_(std::move(core_values)), a_(std::move(left_tail)),
          b_(std::move(right_tail)) {
        if (core_.empty()) throw std::invalid_argument("discrete function: empty core");
        while (core_.size() > 1 && core_.front() == a_) {
            core_.erase(core_.begin());
            ++lo_;
        }
        while (core_.size() > 1 && core_.back() == b_) core_.pop_back();
        // A globally constant function keeps no information in lo_; pin it so
        // structural equality decides functional equality.
        if (core_.size() == 1 && core_.front() == a_ && a_ == b_) lo_ = 0;
    }

    static DiscreteBVFunction constant(const S& c) { return DiscreteBVFunction(0, {c}, c, c); }

    long core_lo() const { return lo_; }
    long core_hi() const { return lo_ + static_cast<long>(core_.size()) - 1; }
    const std::vector<S>& core_values() const { return core_; }
    const S& left_tail() const { return a_; }
    const S& right_tail() const { return b_; }

    S evaluate(long n) const {
        if (n < lo_) return a_;
        if (n > core_hi()) return b_;
        return core_[static_cast<std::size_t>(n - lo_)];
    }

    DiscreteBVFunction abs() const {
        std::vector<S> vals;
        vals.reserve(core_.size());
        for (const auto& v : core_) vals.push_back(scalar_traits<S>::abs(v));
        return DiscreteBVFunction(lo_, std::move(vals), scalar_traits<S>::abs(a_),
                                  scalar_traits<S>::abs(b_));
    }

    /// n -> f(-n); used to reuse right-tail analyses on the left side.
    DiscreteBVFunction reflected() const {
        std::vector<S> vals(core_.rbegin(), core_.rend());
        return DiscreteBVFunction(-core_hi(), std::move(vals), b_, a_);
    }

    DiscreteBVFunction add_constant(const S& c) const {
        std::vector<S> vals;
        vals.reserve(core_.size());
        for (const auto& v : core_) vals.push_back(v + c);
        return DiscreteBVFunction(lo_, std::move(vals), S(a_ + c), S(b_ + c));
    }

    DiscreteBVFunction scaled(const S& c) const {
        std::vector<S> vals;
        vals.reserve(core_.size());
        for (const auto& v : core_) vals.push_back(v * c);
        return DiscreteBVFunction(lo_, std::move(vals), S(a_ * c), S(b_ * c));
    }

    friend DiscreteBVFunction operator+(const DiscreteBVFunction& f,
                                        const DiscreteBVFunction& g) {
        const long lo = std::min(f.core_lo(), g.core_lo());
        const long hi = std::max(f.core_hi(), g.core_hi());
        std::vector<S> vals;
        vals.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (long n = lo; n <= hi; ++n) vals.push_back(f.evaluate(n) + g.evaluate(n));
        return DiscreteBVFunction(lo, std::move(vals), S(f.a_ + g.a_), S(f.b_ + g.b_));
    }

    friend DiscreteBVFunction operator-(const DiscreteBVFunction& f,
                                        const DiscreteBVFunction& g) {
        return f + g.scaled(scalar_traits<S>::from_long(-1));
    }

    bool operator==(const DiscreteBVFunction& o) const {
        return lo_ == o.lo_ && core_ == o.core_ && a_ == o.a_ && b_ == o.b_;
    }

  private:
    long lo_;
    std::vector<S> core_;
    S a_, b_;
};

/// f(0) = 1, zero elsewhere.
template <class S = Rational>
DiscreteBVFunction<S> delta_at_origin() {
    const S zero = scalar_traits<S>::from_long(0);
    return DiscreteBVFunction<S>(0, {scalar_traits<S>::from_long(1)}, zero, zero);
}

/// n -> f(n) + c on [lo, hi], canonicalized.
template <class S>
DiscreteBVFunction<S> add_indicator(const DiscreteBVFunction<S>& f, long lo, long hi,
                                    const S& c) {
    if (lo > hi) throw std::invalid_argument("add_indicator: lo > hi");
    const long new_lo = std::min(lo, f.core_lo());
    const long new_hi = std::max(hi, f.core_hi());
    std::vector<S> vals;
    vals.reserve(static_cast<std::size_t>(new_hi - new_lo + 1));
    for (long n = new_lo; n <= new_hi; ++n) {
        S v = f.evaluate(n);
        if (n >= lo && n <= hi) v = v + c;
        vals.push_back(v);
    }
    return DiscreteBVFunction<S>(new_lo, std::move(vals), f.left_tail(), f.right_tail());
}

/// Piecewise-constant function on the reals with finitely many jumps.
///
/// piece_values[i] rules (breakpoints[i-1], breakpoints[i]); the first and
/// last entries are the constant tails.  Evaluation at a breakpoint uses the
/// right-continuous convention (callers that care about both one-sided limits
/// query the pieces directly).
template <class S>
class StepFunction {
  public:
    StepFunction(std::vector<S> breakpoints, std::vector<S> piece_values)
        : t_(std::move(breakpoints)), v_(std::move(piece_values)) {
        if (v_.size() != t_.size() + 1)
            throw std::invalid_argument("step function: need one more piece than breakpoints");
        for (std::size_t i = 0; i + 1 < t_.size(); ++i)
            if (!(scalar_traits<S>::compare(t_[i], t_[i + 1]) < 0))
                throw std::invalid_argument("step function: breakpoints not increasing");
        // Canonical form: merge adjacent equal pieces.
        for (std::size_t i = 0; i + 1 < v_.size();) {
            if (v_[i] == v_[i + 1]) {
                v_.erase(v_.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                ++i;
            }
        }
    }

    static StepFunction constant(const S& c) { return StepFunction({}, {c}); }

    /// Indicator of [lo, hi] scaled by c.
    static StepFunction indicator(const S& lo, const S& hi, const S& c) {
        if (!(scalar_traits<S>::compare(lo, hi) < 0))
            throw std::invalid_argument("indicator: need lo < hi");
        const S zero = scalar_traits<S>::from_long(0);
        return StepFunction({lo, hi}, {zero, c, zero});
    }

    const std::vector<S>& breakpoints() const { return t_; }
    const std::vector<S>& piece_values() const { return v_; }
    std::size_t piece_count() const { return v_.size(); }

    const S& left_tail() const { return v_.front(); }
    const S& right_tail() const { return v_.back(); }

    S evaluate(const S& x) const {
        std::size_t i = 0;
        while (i < t_.size() && !(scalar_traits<S>::compare(x, t_[i]) < 0)) ++i;
        return v_[i];
    }

    StepFunction abs() const {
        std::vector<S> vals;
        vals.reserve(v_.size());
        for (const auto& v : v_) vals.push_back(scalar_traits<S>::abs(v));
        return StepFunction(t_, std::move(vals));
    }

    friend StepFunction operator+(const StepFunction& f, const StepFunction& g) {
        std::vector<S> merged = f.t_;
        merged.insert(merged.end(), g.t_.begin(), g.t_.end());
        std::sort(merged.begin(), merged.end(),
                  [](const S& x, const S& y) { return scalar_traits<S>::compare(x, y) < 0; });
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        std::vector<S> vals;
        vals.reserve(merged.size() + 1);
        vals.push_back(f.left_tail() + g.left_tail());
        for (const auto& t : merged) vals.push_back(f.evaluate(t) + g.evaluate(t));
        return StepFunction(std::move(merged), std::move(vals));
    }

    StepFunction scaled(const S& c) const {
        std::vector<S> vals;
        vals.reserve(v_.size());
        for (const auto& v : v_) vals.push_back(v * c);
        return StepFunction(t_, std::move(vals));
    }

    bool operator==(const StepFunction& o) const { return t_ == o.t_ && v_ == o.v_; }

  private:
    std::vector<S> t_;
    std::vector<S> v_;
};

/// Continuous piecewise-linear interpolant with constant tail extensions.
template <class S>
class PiecewiseLinearFunction {
  public:
    PiecewiseLinearFunction(std::vector<S> xs, std::vector<S> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        if (x_.empty() || x_.size() != y_.size())
            throw std::invalid_argument("piecewise linear: node lists empty or mismatched");
        for (std::size_t i = 0; i + 1 < x_.size(); ++i)
            if (!(scalar_traits<S>::compare(x_[i], x_[i + 1]) < 0))
                throw std::invalid_argument("piecewise linear: nodes not increasing");
    }

    const std::vector<S>& node_x() const { return x_; }
    const std::vector<S>& node_y() const { return y_; }
    std::size_t node_count() const { return x_.size(); }

    const S& left_tail() const { return y_.front(); }
    const S& right_tail() const { return y_.back(); }

    /// True when the function lies in the integrable class (both tails 0).
    bool has_zero_tails() const {
        const S zero = scalar_traits<S>::from_long(0);
        return y_.front() == zero && y_.back() == zero;
    }

    S evaluate(const S& x) const {
        if (scalar_traits<S>::compare(x, x_.front()) <= 0) return y_.front();
        if (scalar_traits<S>::compare(x, x_.back()) >= 0) return y_.back();
        std::size_t i = 1;
        while (scalar_traits<S>::compare(x_[i], x) < 0) ++i;
        const S t = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
        return y_[i - 1] + t * (y_[i] - y_[i - 1]);
    }

    /// Pointwise absolute value; inserts nodes at sign crossings so the
    /// result is again piecewise linear.
    PiecewiseLinearFunction abs() const {
        const S zero = scalar_traits<S>::from_long(0);
        std::vector<S> xs, ys;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            if (i > 0) {
                const bool neg_pos = scalar_traits<S>::compare(y_[i - 1], zero) < 0 &&
                                     scalar_traits<S>::compare(y_[i], zero) > 0;
                const bool pos_neg = scalar_traits<S>::compare(y_[i - 1], zero) > 0 &&
                                     scalar_traits<S>::compare(y_[i], zero) < 0;
                if (neg_pos || pos_neg) {
                    const S cross =
                        x_[i - 1] + (x_[i] - x_[i - 1]) * y_[i - 1] / (y_[i - 1] - y_[i]);
                    xs.push_back(cross);
                    ys.push_back(zero);
                }
            }
            xs.push_back(x_[i]);
            ys.push_back(scalar_traits<S>::abs(y_[i]));
        }
        return PiecewiseLinearFunction(std::move(xs), std::move(ys));
    }

    friend PiecewiseLinearFunction operator+(const PiecewiseLinearFunction& f,
                                             const PiecewiseLinearFunction& g) {
        std::vector<S> merged = f.x_;
        merged.insert(merged.end(), g.x_.begin(), g.x_.end());
        std::sort(merged.begin(), merged.end(),
                  [](const S& x, const S& y) { return scalar_traits<S>::compare(x, y) < 0; });
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        std::vector<S> ys;
        ys.reserve(merged.size());
        for (const auto& x : merged) ys.push_back(f.evaluate(x) + g.evaluate(x));
        return PiecewiseLinearFunction(std::move(merged), std::move(ys));
    }

    PiecewiseLinearFunction scaled(const S& c) const {
        std::vector<S> ys;
        ys.reserve(y_.size());
        for (const auto& y : y_) ys.push_back(y * c);
        return PiecewiseLinearFunction(x_, std::move(ys));
    }

    bool operator==(const PiecewiseLinearFunction& o) const { return x_ == o.x_ && y_ == o.y_; }

  private:
    std::vector<S> x_;
    std::vector<S> y_;
};

/// Exact integral of |f| over [L, R] for a step function.
template <class S>
S integral_abs(const StepFunction<S>& f, const S& L, const S& R) {
    if (scalar_traits<S>::compare(L, R) > 0) throw std::invalid_argument("integral_abs: L > R");
    const auto& t = f.breakpoints();
    const auto& v = f.piece_values();
    S total = scalar_traits<S>::from_long(0);
    S cursor = L;
    for (std::size_t i = 0; i < v.size(); ++i) {
        // Piece i rules (t[i-1], t[i]); clamp to [cursor, R].
        const S piece_end = i < t.size() ? t[i] : R;
        S end = scalar_traits<S>::compare(piece_end, R) < 0 ? piece_end : R;
        if (i + 1 == v.size()) end = R;
        if (scalar_traits<S>::compare(cursor, end) < 0) {
            total = total + scalar_traits<S>::abs(v[i]) * (end - cursor);
            cursor = end;
        }
        if (i < t.size() && scalar_traits<S>::compare(R, t[i]) <= 0) break;
    }
    return total;
}

/// Exact integral of |f| over [L, R] for a piecewise-linear function
/// (trapezoid areas of |f| after crossing insertion).
template <class S>
S integral_abs(const PiecewiseLinearFunction<S>& f, const S& L, const S& R) {
    if (scalar_traits<S>::compare(L, R) > 0) throw std::invalid_argument("integral_abs: L > R");
    const auto g = f.abs();
    const auto& xs = g.node_x();
    std::vector<S> cuts;
    cuts.push_back(L);
    for (const auto& x : xs)
        if (scalar_traits<S>::compare(L, x) < 0 && scalar_traits<S>::compare(x, R) < 0)
            cuts.push_back(x);
    cuts.push_back(R);
    S total = scalar_traits<S>::from_long(0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const S len = cuts[i + 1] - cuts[i];
        total = total + (g.evaluate(cuts[i]) + g.evaluate(cuts[i + 1])) * len;
    }
    return total / scalar_traits<S>::from_long(2);
}

}  // namespace maxlab
