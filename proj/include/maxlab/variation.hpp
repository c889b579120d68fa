#pragma once

/// \file variation.hpp
/// Total variation, q-variation, and BV norms, discrete and continuous,
/// including interval-restricted variation.  All classical (q = 1) results
/// are exact in rational mode; q-variation values are reported as float64
/// while exact comparisons go through the RootValue term lists.

#include "maxlab/functions.hpp"
#include "maxlab/root_value.hpp"

#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace maxlab {

/// Integer interval with optional infinite endpoints.
struct IntervalZ {
    std::optional<long> lo;  // nullopt = -infinity
    std::optional<long> hi;  // nullopt = +infinity

    static IntervalZ whole_line() { return {}; }
    static IntervalZ from(long a) { return {a, std::nullopt}; }
    static IntervalZ upto(long b) { return {std::nullopt, b}; }
    static IntervalZ closed(long a, long b) {
        if (a > b) throw std::invalid_argument("IntervalZ: lo > hi");
        return {a, b};
    }
};

/// Sum of |f(n+1) - f(n)| over lo <= n <= hi-1, in closed form: only
/// differences inside [core_lo - 1, core_hi] can be nonzero.
template <class S>
S var_discrete(const DiscreteBVFunction<S>& f, IntervalZ window = IntervalZ::whole_line()) {
    long first = f.core_lo() - 1;
    long last = f.core_hi();
    if (window.lo && *window.lo > first) first = *window.lo;
    if (window.hi && *window.hi - 1 < last) last = *window.hi - 1;
    S total = scalar_traits<S>::from_long(0);
    for (long n = first; n <= last; ++n)
        total = total + scalar_traits<S>::abs(f.evaluate(n + 1) - f.evaluate(n));
    return total;
}

/// |f(-infinity)| + Var(f).
template <class S>
S bvnorm_discrete(const DiscreteBVFunction<S>& f) {
    return scalar_traits<S>::abs(f.left_tail()) + var_discrete(f);
}

/// Exact term list for the discrete q-variation: one |jump|^q per nonzero
/// jump, with q = qnum/qden >= 1.
template <class S>
std::vector<RootValue<S>> varq_discrete_terms(const DiscreteBVFunction<S>& f, long qnum,
                                              long qden) {
    std::vector<RootValue<S>> terms;
    const S one = scalar_traits<S>::from_long(1);
    for (long n = f.core_lo() - 1; n <= f.core_hi(); ++n) {
        const S jump = scalar_traits<S>::abs(f.evaluate(n + 1) - f.evaluate(n));
        if (scalar_traits<S>::compare(jump, scalar_traits<S>::from_long(0)) != 0)
            terms.push_back(RootValue<S>::riesz_term(jump, one, qnum, qden));
    }
    return terms;
}

/// l^q norm of the discrete derivative, reported as float64.
template <class S>
double varq_discrete(const DiscreteBVFunction<S>& f, double q) {
    if (q < 1) throw std::invalid_argument("varq_discrete: q < 1");
    double sum = 0;
    for (long n = f.core_lo() - 1; n <= f.core_hi(); ++n) {
        const double jump = std::fabs(
            scalar_traits<S>::to_double(f.evaluate(n + 1)) -
            scalar_traits<S>::to_double(f.evaluate(n)));
        sum += std::pow(jump, q);
    }
    return std::pow(sum, 1.0 / q);
}

/// Total variation of a step function: sum of |jumps| with breakpoints in the
/// optional window.
template <class S>
S var_continuous(const StepFunction<S>& f,
                 std::optional<std::pair<std::type_identity_t<S>, std::type_identity_t<S>>>
                     window = {}) {
    S total = scalar_traits<S>::from_long(0);
    const auto& t = f.breakpoints();
    const auto& v = f.piece_values();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (window) {
            if (scalar_traits<S>::compare(t[i], window->first) < 0) continue;
            if (scalar_traits<S>::compare(window->second, t[i]) < 0) continue;
        }
        total = total + scalar_traits<S>::abs(v[i + 1] - v[i]);
    }
    return total;
}

/// Total variation of a piecewise-linear function: ||f'||_{L^1}, optionally
/// restricted to a window (pieces clipped).
template <class S>
S var_continuous(const PiecewiseLinearFunction<S>& f,
                 std::optional<std::pair<std::type_identity_t<S>, std::type_identity_t<S>>>
                     window = {}) {
    S total = scalar_traits<S>::from_long(0);
    const auto& xs = f.node_x();
    const auto& ys = f.node_y();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (!window) {
            total = total + scalar_traits<S>::abs(ys[i + 1] - ys[i]);
            continue;
        }
        const S lo = scalar_traits<S>::compare(xs[i], window->first) < 0 ? window->first : xs[i];
        const S hi =
            scalar_traits<S>::compare(window->second, xs[i + 1]) < 0 ? window->second : xs[i + 1];
        if (scalar_traits<S>::compare(lo, hi) < 0) {
            const S slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
            total = total + scalar_traits<S>::abs(slope) * (hi - lo);
        }
    }
    return total;
}

template <class S>
S bvnorm_continuous(const StepFunction<S>& f) {
    return scalar_traits<S>::abs(f.left_tail()) + var_continuous(f);
}

template <class S>
S bvnorm_continuous(const PiecewiseLinearFunction<S>& f) {
    return scalar_traits<S>::abs(f.left_tail()) + var_continuous(f);
}

/// Finite list of point evaluations (x_n, g(x_n)) of a real-valued profile.
/// Grid points keep the scalar mode; values are float64 because maximal
/// profiles are generally irrational.  Partition sums over such samples are
/// certified lower bounds of the Riesz q-variation.
template <class S>
struct SampledProfile {
    std::vector<S> xs;
    std::vector<double> values;

    void push(const S& x, double v) {
        if (!xs.empty() && !(scalar_traits<S>::compare(xs.back(), x) < 0))
            throw std::invalid_argument("sampled profile: points must be strictly increasing");
        xs.push_back(x);
        values.push_back(v);
    }
    std::size_t size() const { return xs.size(); }
};

/// Riesz q-variation of a piecewise-linear function, closed form
/// (sum |slope_i|^q len_i)^(1/q); float64 report.
template <class S>
double varq_riesz(const PiecewiseLinearFunction<S>& g, double q) {
    if (q <= 1) throw std::invalid_argument("varq_riesz: q <= 1");
    double sum = 0;
    const auto& xs = g.node_x();
    const auto& ys = g.node_y();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double len = scalar_traits<S>::to_double(xs[i + 1] - xs[i]);
        const double dy = std::fabs(scalar_traits<S>::to_double(ys[i + 1] - ys[i]));
        sum += std::pow(dy / len, q) * len;
    }
    return std::pow(sum, 1.0 / q);
}

/// Partition sum of the Riesz q-variation over the sample points: a
/// certified lower bound of Var_q.
template <class S>
double varq_riesz(const SampledProfile<S>& sample, double q) {
    if (q <= 1) throw std::invalid_argument("varq_riesz: q <= 1");
    double sum = 0;
    for (std::size_t i = 0; i + 1 < sample.size(); ++i) {
        const double len =
            scalar_traits<S>::to_double(sample.xs[i + 1]) - scalar_traits<S>::to_double(sample.xs[i]);
        const double dy = std::fabs(sample.values[i + 1] - sample.values[i]);
        sum += std::pow(dy, q) / std::pow(len, q - 1);
    }
    return std::pow(sum, 1.0 / q);
}

/// Exact Riesz partition terms for rational-valued samples: one
/// |dg|^q/|dx|^(q-1) RootValue per consecutive pair (q = qnum/qden > 1).
/// Comparing two term lists with compare_root_sums decides partition-sum
/// inequalities without root extraction.
template <class S>
std::vector<RootValue<S>> riesz_partition_terms(const std::vector<S>& xs,
                                                const std::vector<S>& ys, long qnum, long qden) {
    if (xs.size() != ys.size()) throw std::invalid_argument("riesz terms: size mismatch");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(scalar_traits<S>::compare(xs[i], xs[i + 1]) < 0))
            throw std::invalid_argument("riesz terms: sample points not increasing");
    if (qnum <= qden) throw std::invalid_argument("riesz terms: q <= 1");
    std::vector<RootValue<S>> terms;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const S dg = scalar_traits<S>::abs(ys[i + 1] - ys[i]);
        const S dx = xs[i + 1] - xs[i];
        if (scalar_traits<S>::compare(dg, scalar_traits<S>::from_long(0)) != 0)
            terms.push_back(RootValue<S>::riesz_term(dg, dx, qnum, qden));
    }
    return terms;
}

/// Exact closed-form Riesz terms of a piecewise-linear function (equal to the
/// node-partition terms since each piece is linear).
template <class S>
std::vector<RootValue<S>> riesz_closed_form_terms(const PiecewiseLinearFunction<S>& g, long qnum,
                                                  long qden) {
    return riesz_partition_terms<S>(g.node_x(), g.node_y(), qnum, qden);
}

/// Variation of a finite sample: sum of |consecutive differences|.
inline double var_of_samples(const std::vector<double>& values) {
    double total = 0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        total += std::fabs(values[i + 1] - values[i]);
    return total;
}

}  // namespace maxlab
