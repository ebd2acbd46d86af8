#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace regweight {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a decimal literal such as "0.0018956", "3e-4", "1.06875e-4" or "5/3".
inline Rational dec(std::string_view text) {
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        return dec(text.substr(0, slash)) / dec(text.substr(slash + 1));
    }
    std::string_view mantissa = text;
    long exponent = 0;
    const auto e = text.find_first_of("eE");
    if (e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        exponent = std::stol(std::string(text.substr(e + 1)));
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    bool seen_point = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_point) throw std::invalid_argument("bad decimal: " + std::string(text));
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) --exponent;
        } else {
            throw std::invalid_argument("bad decimal: " + std::string(text));
        }
    }
    if (digits.empty()) throw std::invalid_argument("bad decimal: " + std::string(text));
    // A leading 0 would make the parser read octal.
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    Rational value{BigInt(digits)};
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
    value = exponent < 0 ? value / Rational(scale) : value * Rational(scale);
    return negative ? Rational(-value) : value;
}

inline BigInt floor_of(const Rational& x) {
    const BigInt& num = boost::multiprecision::numerator(x);
    const BigInt& den = boost::multiprecision::denominator(x);
    BigInt q = num / den;
    if (num < 0 && q * den != num) q -= 1;
    return q;
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// "num/den", or just "num" for integers.
inline std::string exact_string(const Rational& x) {
    std::ostringstream out;
    out << boost::multiprecision::numerator(x);
    if (boost::multiprecision::denominator(x) != 1) out << '/' << boost::multiprecision::denominator(x);
    return out.str();
}

/// Decimal rendering with `digits` significant digits (for reports only).
inline std::string decimal_string(const Rational& x, int digits = 12) {
    std::ostringstream out;
    out.precision(digits);
    out << to_double(x);
    return out.str();
}

/// A rational with 64-bit parts, for hot comparisons against integer degree counts.
struct SmallFraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static SmallFraction from(const Rational& x) {
        const BigInt& n = boost::multiprecision::numerator(x);
        const BigInt& d = boost::multiprecision::denominator(x);
        const BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max());
        if (abs(n) > limit || d > limit) throw std::overflow_error("rational does not fit 64-bit parts");
        return {n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>()};
    }
};

/// |observed - ratio * base| <= tol * scale, evaluated exactly.
inline bool within(std::int64_t observed, SmallFraction ratio, std::int64_t base, SmallFraction tol, std::int64_t scale) {
    using I = __int128;
    I lhs = static_cast<I>(observed) * ratio.den - static_cast<I>(ratio.num) * base;
    if (lhs < 0) lhs = -lhs;
    return lhs * tol.den <= static_cast<I>(tol.num) * scale * ratio.den;
}

}  // namespace regweight
