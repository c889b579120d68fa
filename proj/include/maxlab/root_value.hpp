#pragma once

/// \file root_value.hpp
/// Exact arithmetic for the irrational quantities the fractional operators
/// produce: every such value has the shape coeff * radicand^(1/index) with
/// rational coeff and radicand (window averages mass*len^(beta-1) with
/// beta = p/u rational, Riesz q-variation terms |dg|^q/|dx|^(q-1) with
/// q = u/(u-p)).  Single values compare exactly by raising both sides to the
/// lcm of the root indices; sums of such values are compared by cancelling
/// identical root keys and then escalating-precision interval arithmetic.

#include "maxlab/scalar.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

namespace maxlab {

inline Rational rat_pow(const Rational& base, unsigned exp) {
    Rational out = 1;
    Rational acc = base;
    for (unsigned e = exp; e != 0; e >>= 1) {
        if (e & 1u) out *= acc;
        if (e > 1) acc *= acc;
    }
    return out;
}

/// Nonnegative value coeff * radicand^(1/index).
///
/// In float64 mode the value collapses to a plain double at construction
/// (index becomes 1) and comparisons use eps_cmp; in rational mode all three
/// fields stay exact and comparisons are certificates.
template <class S>
struct RootValue {
    S coeff = scalar_traits<S>::from_long(0);
    S radicand = scalar_traits<S>::from_long(1);
    unsigned index = 1;

    RootValue() = default;

    explicit RootValue(const S& plain) : coeff(plain) {
        if (scalar_traits<S>::compare(coeff, scalar_traits<S>::from_long(0)) < 0)
            throw std::domain_error("RootValue: negative value");
    }

    RootValue(const S& c, const S& r, unsigned k) : coeff(c), radicand(r), index(k) {
        if (k == 0) throw std::domain_error("RootValue: zero index");
        if (scalar_traits<S>::compare(coeff, scalar_traits<S>::from_long(0)) < 0 ||
            scalar_traits<S>::compare(radicand, scalar_traits<S>::from_long(0)) < 0)
            throw std::domain_error("RootValue: negative component");
        normalize();
    }

    /// Window average: mass * len^(beta-1), len > 0, mass >= 0.
    static RootValue window(const S& mass, const S& len, const Beta& beta) {
        if (scalar_traits<S>::compare(len, scalar_traits<S>::from_long(0)) <= 0)
            throw std::domain_error("RootValue::window: nonpositive length");
        if constexpr (scalar_traits<S>::exact) {
            if (beta.is_zero()) return RootValue(S(mass / len));
            const unsigned u = static_cast<unsigned>(beta.den);
            const unsigned up = static_cast<unsigned>(beta.den - beta.num);
            return RootValue(mass, S(1 / rat_pow(len, up)), u);
        } else {
            return RootValue(mass * std::pow(len, beta.value() - 1.0));
        }
    }

    /// Riesz term |dg|^q / |dx|^(q-1) written as |dx| * (|dg|/|dx|)^q,
    /// q = qnum/qden >= 1; dx > 0, dg >= 0.
    static RootValue riesz_term(const S& dg, const S& dx, long qnum, long qden) {
        if (qnum < qden || qden <= 0)
            throw std::domain_error("RootValue::riesz_term: need q >= 1");
        if (scalar_traits<S>::compare(dx, scalar_traits<S>::from_long(0)) <= 0)
            throw std::domain_error("RootValue::riesz_term: nonpositive dx");
        const long g = std::gcd(qnum, qden);
        qnum /= g;
        qden /= g;
        if constexpr (scalar_traits<S>::exact) {
            return RootValue(dx, rat_pow(Rational(dg / dx), static_cast<unsigned>(qnum)),
                             static_cast<unsigned>(qden));
        } else {
            const double q = static_cast<double>(qnum) / static_cast<double>(qden);
            return RootValue(dx * std::pow(dg / dx, q));
        }
    }

    static RootValue zero() { return RootValue(); }

    bool is_zero() const {
        return scalar_traits<S>::compare(coeff, scalar_traits<S>::from_long(0)) == 0;
    }

    double value() const {
        return scalar_traits<S>::to_double(coeff) *
               std::pow(scalar_traits<S>::to_double(radicand), 1.0 / index);
    }

    RootValue scaled(const S& c) const {
        RootValue out = *this;
        out.coeff = out.coeff * c;
        out.normalize();
        return out;
    }

    RootValue times(const RootValue& o) const {
        if constexpr (scalar_traits<S>::exact) {
            const unsigned l = std::lcm(index, o.index);
            return RootValue(S(coeff * o.coeff),
                             S(rat_pow(radicand, l / index) * rat_pow(o.radicand, l / o.index)),
                             l);
        } else {
            return RootValue(value() * o.value());
        }
    }

    /// Exact three-way comparison (tolerance-based in float64 mode).
    static int compare(const RootValue& a, const RootValue& b) {
        if constexpr (scalar_traits<S>::exact) {
            if (a.is_zero() || b.is_zero()) {
                if (a.is_zero() && b.is_zero()) return 0;
                return a.is_zero() ? -1 : 1;
            }
            const unsigned l = std::lcm(a.index, b.index);
            const Rational lhs = rat_pow(a.coeff, l) * rat_pow(a.radicand, l / a.index);
            const Rational rhs = rat_pow(b.coeff, l) * rat_pow(b.radicand, l / b.index);
            return scalar_traits<Rational>::compare(lhs, rhs);
        } else {
            return scalar_traits<double>::compare(a.value(), b.value());
        }
    }

    friend bool operator<(const RootValue& a, const RootValue& b) { return compare(a, b) < 0; }
    friend bool operator==(const RootValue& a, const RootValue& b) { return compare(a, b) == 0; }
    friend bool operator<=(const RootValue& a, const RootValue& b) { return compare(a, b) <= 0; }

  private:
    void normalize() {
        const S zero = scalar_traits<S>::from_long(0);
        const S one = scalar_traits<S>::from_long(1);
        if (scalar_traits<S>::compare(coeff, zero) == 0 ||
            scalar_traits<S>::compare(radicand, zero) == 0) {
            coeff = zero;
            radicand = one;
            index = 1;
            return;
        }
        if (index == 1 || scalar_traits<S>::compare(radicand, one) == 0) {
            if constexpr (scalar_traits<S>::exact) {
                if (index == 1) {
                    coeff = coeff * radicand;
                    radicand = one;
                } else {
                    index = 1;
                    radicand = one;
                }
            } else {
                coeff = value();
                radicand = one;
                index = 1;
            }
            return;
        }
        if constexpr (!scalar_traits<S>::exact) {
            coeff = value();
            radicand = one;
            index = 1;
        }
    }
};

namespace detail {

using PrecisionFloat = boost::multiprecision::mpfr_float;

inline PrecisionFloat to_precision_float(const Rational& r) {
    // Route through decimal strings: exact for integers, so num/den is exact
    // up to one correctly-rounded division.
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    return PrecisionFloat(num.str()) / PrecisionFloat(den.str());
}

inline PrecisionFloat root_sum_at_current_precision(
    const std::vector<RootValue<Rational>>& terms) {
    PrecisionFloat sum = 0;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        PrecisionFloat r = to_precision_float(t.radicand);
        PrecisionFloat part =
            t.index == 1 ? r : PrecisionFloat(exp(log(r) / t.index));
        sum += to_precision_float(t.coeff) * part;
    }
    return sum;
}

}  // namespace detail

/// Signed sum of RootValues: the closure of {mass * len^(beta-1)} values
/// under +, -, *.  Differences of maximal-function values live here; powers
/// stay in the class because products of roots are roots.  Comparison
/// delegates to compare_root_sums.
template <class S>
struct SignedRootSum {
    std::vector<RootValue<S>> pos;
    std::vector<RootValue<S>> neg;

    SignedRootSum() = default;
    explicit SignedRootSum(RootValue<S> v) { pos.push_back(std::move(v)); }

    static SignedRootSum difference(const RootValue<S>& x, const RootValue<S>& y) {
        SignedRootSum out;
        out.pos.push_back(x);
        out.neg.push_back(y);
        return out;
    }

    SignedRootSum operator-() const {
        SignedRootSum out;
        out.pos = neg;
        out.neg = pos;
        return out;
    }

    SignedRootSum operator+(const SignedRootSum& o) const {
        SignedRootSum out = *this;
        out.pos.insert(out.pos.end(), o.pos.begin(), o.pos.end());
        out.neg.insert(out.neg.end(), o.neg.begin(), o.neg.end());
        return out;
    }

    SignedRootSum operator-(const SignedRootSum& o) const { return *this + (-o); }

    SignedRootSum operator*(const SignedRootSum& o) const {
        SignedRootSum out;
        for (const auto& x : pos) {
            for (const auto& y : o.pos) out.pos.push_back(x.times(y));
            for (const auto& y : o.neg) out.neg.push_back(x.times(y));
        }
        for (const auto& x : neg) {
            for (const auto& y : o.pos) out.neg.push_back(x.times(y));
            for (const auto& y : o.neg) out.pos.push_back(x.times(y));
        }
        return out;
    }

    SignedRootSum power(unsigned e) const {
        SignedRootSum out(RootValue<S>(scalar_traits<S>::from_long(1)));
        for (unsigned i = 0; i < e; ++i) out = out * *this;
        return out;
    }

    /// Sign of the represented number: -1, 0, or 1.
    int sign() const;

    SignedRootSum abs_value() const { return sign() < 0 ? -*this : *this; }

    double value() const {
        double v = 0;
        for (const auto& t : pos) v += t.value();
        for (const auto& t : neg) v -= t.value();
        return v;
    }
};

/// Exact three-way comparison of two sums of RootValues.
///
/// Rational mode: identical root keys (radicand, index) cancel by exact
/// coefficient subtraction first; any remainder is decided by interval
/// arithmetic with escalating precision.  Throws std::logic_error if the sums
/// are algebraically equal through an identity the cancellation step cannot
/// see (never observed for the value shapes this library produces).  Not
/// thread-safe (adjusts the mpfr default precision).
template <class S>
int compare_root_sums(std::vector<RootValue<S>> a, std::vector<RootValue<S>> b) {
    if constexpr (!scalar_traits<S>::exact) {
        double sa = 0, sb = 0;
        for (const auto& t : a) sa += t.value();
        for (const auto& t : b) sb += t.value();
        return scalar_traits<double>::compare(sa, sb);
    } else {
        // Group terms whose radicals agree up to a rational factor: r2^(1/k2)
        // = rho * r1^(1/k1) exactly when r2^(L/k2) / r1^(L/k1) is the L-th
        // power of a rational rho, L = lcm(k1, k2).  Distinct classes are
        // linearly independent over Q, so equal sums always cancel here.
        struct Group {
            Rational radicand;
            unsigned index;
            Rational coeff;
        };
        std::vector<Group> grouped;
        const auto accumulate = [&grouped](const RootValue<Rational>& t, int sgn) {
            if (t.is_zero()) return;
            const Rational signed_coeff = sgn > 0 ? t.coeff : Rational(-t.coeff);
            for (auto& g : grouped) {
                if (g.index == t.index && g.radicand == t.radicand) {
                    g.coeff += signed_coeff;
                    return;
                }
                const unsigned l = std::lcm(g.index, t.index);
                const Rational ratio =
                    rat_pow(t.radicand, l / t.index) / rat_pow(g.radicand, l / g.index);
                const BigInt num = boost::multiprecision::numerator(ratio);
                const BigInt den = boost::multiprecision::denominator(ratio);
                const BigInt num_root = kth_root_floor(num, l);
                const BigInt den_root = kth_root_floor(den, l);
                if (boost::multiprecision::pow(num_root, l) == num &&
                    boost::multiprecision::pow(den_root, l) == den) {
                    g.coeff += signed_coeff * Rational(num_root) / Rational(den_root);
                    return;
                }
            }
            grouped.push_back({t.radicand, t.index, signed_coeff});
        };
        for (const auto& t : a) accumulate(t, 1);
        for (const auto& t : b) accumulate(t, -1);
        std::vector<RootValue<Rational>> lhs, rhs;
        for (const auto& g : grouped) {
            if (g.coeff > 0) lhs.emplace_back(g.coeff, g.radicand, g.index);
            if (g.coeff < 0) rhs.emplace_back(Rational(-g.coeff), g.radicand, g.index);
        }
        if (lhs.empty() && rhs.empty()) return 0;
        if (lhs.empty()) return -1;
        if (rhs.empty()) return 1;

        const std::size_t nterms = lhs.size() + rhs.size();
        for (unsigned digits = 50; digits <= 3200; digits *= 2) {
            detail::PrecisionFloat::default_precision(digits);
            const auto sl = detail::root_sum_at_current_precision(lhs);
            const auto sr = detail::root_sum_at_current_precision(rhs);
            detail::PrecisionFloat err =
                (sl + sr + 1) * static_cast<double>(nterms + 2);
            err *= pow(detail::PrecisionFloat(10), -static_cast<int>(digits) + 6);
            if (sl > sr + err) return 1;
            if (sr > sl + err) return -1;
        }
        throw std::logic_error("compare_root_sums: undecided at maximum precision");
    }
}

template <class S>
int SignedRootSum<S>::sign() const {
    return compare_root_sums<S>(pos, neg);
}

template <class S>
int compare_signed(const SignedRootSum<S>& a, const SignedRootSum<S>& b) {
    return (a - b).sign();
}

}  // namespace maxlab
