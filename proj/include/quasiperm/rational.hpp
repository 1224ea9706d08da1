#pragma once

// Exact arithmetic used everywhere: arbitrary-precision integers and
// rationals from boost::multiprecision (header-only backends). Floating
// point is confined to eigenvalue estimates and Monte Carlo smoke tests.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& r) {
    return boost::multiprecision::numerator(r);
}

inline BigInt denominator(const Rational& r) {
    return boost::multiprecision::denominator(r);
}

inline int sgn(const Rational& r) { return r.sign(); }

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// Prints "p" when the denominator is 1 and "p/q" otherwise.
inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

// Accepts "p" or "p/q" with optional leading minus on p.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt p(text.substr(0, slash));
        BigInt q(text.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator");
        return Rational(p, q);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("bad rational literal: " + text);
    }
}

inline BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt b = 1;
    for (int i = 1; i <= k; ++i) {
        b *= n - k + i;
        b /= i;  // exact at every step: product of i consecutive integers
    }
    return b;
}

// Small-range binomial for loop bounds and array sizing.
inline std::int64_t binomial_i64(int n, int k) {
    BigInt b = binomial(n, k);
    if (b > BigInt(INT64_MAX)) throw std::overflow_error("binomial_i64 overflow");
    return b.template convert_to<std::int64_t>();
}

}  // namespace qp
