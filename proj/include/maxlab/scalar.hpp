#pragma once

/// \file scalar.hpp
/// Scalar modes shared by the whole library.
///
/// Two modes exist: exact rationals (the default, used whenever a computation
/// is meant to be certificate-grade) and float64 (used where irrational powers
/// make exactness impossible and a documented tolerance is acceptable).
/// Every algorithm in the library is templated over the scalar type S and
/// compares values through scalar_traits<S>, so the tolerance policy lives in
/// exactly one place.  Modes are never mixed inside one computation.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace maxlab {

// Expression templates are disabled so arithmetic yields the number type
// itself; generic code relies on `a + b` having type S.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// Comparison / conversion policy for a scalar mode.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;

    static const char* mode_name() { return "rational"; }

    static Rational from_long(long v) { return Rational(v); }

    static double to_double(const Rational& v) { return v.convert_to<double>(); }

    /// Exact three-way comparison.
    static int compare(const Rational& x, const Rational& y) {
        return x < y ? -1 : (y < x ? 1 : 0);
    }

    static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }

    /// Serialized as "p" or "p/q" with q > 0 in lowest terms.
    static std::string to_string(const Rational& v) {
        const BigInt num = boost::multiprecision::numerator(v);
        const BigInt den = boost::multiprecision::denominator(v);
        if (den == 1) return num.str();
        return num.str() + "/" + den.str();
    }

    static Rational parse(const std::string& text) {
        const auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rational(BigInt(text));
            const BigInt num(text.substr(0, slash));
            const BigInt den(text.substr(slash + 1));
            if (den == 0) throw std::invalid_argument("zero denominator");
            if (den < 0) return Rational(-num, -den);
            return Rational(num, den);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a rational literal: \"" + text + "\"");
        }
    }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;

    /// All float64 comparisons go through this tolerance.
    static constexpr double eps_cmp = 1e-12;

    static const char* mode_name() { return "f64"; }

    static double from_long(long v) { return static_cast<double>(v); }

    static double to_double(double v) { return v; }

    static int compare(double x, double y) {
        if (x < y - eps_cmp) return -1;
        if (x > y + eps_cmp) return 1;
        return 0;
    }

    static double abs(double v) { return std::fabs(v); }

    static std::string to_string(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    static double parse(const std::string& text) {
        // Accept both plain doubles and "p/q" so rational fixtures reload in
        // float mode.
        const auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return std::stod(text);
            return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("not a numeric literal: \"" + text + "\"");
        }
    }
};

template <class S>
bool scalar_eq(const S& x, const S& y) {
    return scalar_traits<S>::compare(x, y) == 0;
}

template <class S>
bool scalar_lt(const S& x, const S& y) {
    return scalar_traits<S>::compare(x, y) < 0;
}

/// Floor of the k-th root of a nonnegative big integer (Newton iteration).
/// Used to bracket irrational roots of polynomial discriminants with
/// guaranteed integer bounds.
inline BigInt kth_root_floor(const BigInt& n, unsigned k) {
    if (n < 0) throw std::domain_error("kth_root_floor: negative radicand");
    if (k == 0) throw std::domain_error("kth_root_floor: zero index");
    if (n == 0 || n == 1 || k == 1) return n;
    if (k == 2) return boost::multiprecision::sqrt(n);
    BigInt x = BigInt(1) << (static_cast<unsigned>(boost::multiprecision::msb(n)) / k + 1);
    while (true) {
        // x_{next} = ((k-1)x + n / x^{k-1}) / k, monotone once above the root.
        BigInt xk1 = 1;
        for (unsigned i = 0; i + 1 < k; ++i) xk1 *= x;
        BigInt next = ((k - 1) * x + n / xk1) / k;
        if (next >= x) break;
        x = next;
    }
    return x;
}

/// Exact exponent beta = num/den with 0 <= beta < 1 (reduced).
/// Shared by both scalar modes; float64 computations convert on use.
struct Beta {
    long num = 0;
    long den = 1;

    Beta() = default;
    Beta(long n, long d) : num(n), den(d) {
        if (d <= 0) throw std::invalid_argument("beta: nonpositive denominator");
        if (n < 0 || n >= d) throw std::invalid_argument("beta: need 0 <= beta < 1");
        const long g = std::gcd(n, d);
        num /= g;
        den /= g;
    }

    bool is_zero() const { return num == 0; }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    /// q = 1/(1-beta) as a reduced fraction (q_num/q_den).
    long q_num() const { return den; }
    long q_den() const { return den - num; }
    double q_value() const { return static_cast<double>(den) / static_cast<double>(den - num); }

    bool operator==(const Beta& o) const { return num == o.num && den == o.den; }

    /// Accepts "p/q", decimals like "0.25", and "0".
    static Beta parse(const std::string& text) {
        const auto slash = text.find('/');
        if (slash != std::string::npos) {
            const long n = std::stol(text.substr(0, slash));
            const long d = std::stol(text.substr(slash + 1));
            return Beta(n, d);
        }
        const auto dot = text.find('.');
        if (dot == std::string::npos) return Beta(std::stol(text), 1);
        const std::string frac = text.substr(dot + 1);
        if (frac.size() > 9) throw std::invalid_argument("beta: too many decimal digits");
        long den = 1;
        for (size_t i = 0; i < frac.size(); ++i) den *= 10;
        const long whole = dot == 0 ? 0 : std::stol(text.substr(0, dot));
        const long num = whole * den + (frac.empty() ? 0 : std::stol(frac));
        return Beta(num, den);
    }

    std::string str() const {
        if (num == 0) return "0";
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

enum class Side { two_sided, left, right };

/// Which maximal operator: centered flag, fractional exponent, sidedness.
/// One-sided variants exist only in the classical uncentered continuous
/// setting, hence the constructor guard.
struct OperatorVariant {
    bool centered = false;
    Beta beta{};
    Side side = Side::two_sided;

    OperatorVariant() = default;
    OperatorVariant(bool centered_, Beta beta_, Side side_ = Side::two_sided)
        : centered(centered_), beta(beta_), side(side_) {
        if (side != Side::two_sided && (centered || !beta.is_zero()))
            throw std::invalid_argument(
                "operator variant: one-sided operators exist only uncentered with beta = 0");
    }

    static OperatorVariant uncentered(Beta b = Beta()) { return OperatorVariant(false, b); }
    static OperatorVariant centered_op(Beta b = Beta()) { return OperatorVariant(true, b); }
    static OperatorVariant one_sided(Side s) { return OperatorVariant(false, Beta(), s); }
};

}  // namespace maxlab
