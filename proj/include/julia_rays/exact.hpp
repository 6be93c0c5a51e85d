#pragma once

// Arbitrary-precision integer/rational aliases and small helpers shared by the
// exact-arithmetic modules.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include "julia_rays/errors.hpp"

namespace julia_rays {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// floor(r) as an integer, correct for negative values.
inline BigInt floor_rat(const BigRat& r) {
    BigInt n = numerator(r);
    BigInt d = denominator(r);  // canonical form keeps d > 0
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

// 2^k as an exact rational; k may be negative.
inline BigRat pow2_rat(long k) {
    if (k >= 0) return BigRat(BigInt(1) << k, 1);
    return BigRat(1, BigInt(1) << (-k));
}

inline std::size_t bit_length(const BigInt& x) {
    if (x == 0) return 0;
    return static_cast<std::size_t>(boost::multiprecision::msb(x)) + 1;
}

// Natural log of a positive big integer; valid far beyond the double range.
inline double ln_big(const BigInt& x) {
    if (x <= 0) throw InvalidInputError("ln_big: argument must be positive");
    unsigned b = boost::multiprecision::msb(x);
    if (b <= 62) return std::log(x.convert_to<double>());
    BigInt top = x >> (b - 62);
    return std::log(top.convert_to<double>()) + static_cast<double>(b - 62) * std::numbers::ln2;
}

inline double rat_to_double(const BigRat& r) { return r.convert_to<double>(); }

// Parses "p/q", plain integers, and decimal/scientific literals ("0.05", "1e-8")
// into an exact rational.
inline BigRat rat_from_string(std::string_view s) {
    auto fail = [&] { throw InvalidInputError("cannot parse rational: '" + std::string(s) + "'"); };
    if (s.empty()) fail();
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        try {
            BigInt p(std::string(s.substr(0, slash)));
            BigInt q(std::string(s.substr(slash + 1)));
            if (q == 0) fail();
            return BigRat(p, q);
        } catch (const std::exception&) {
            fail();
        }
    }
    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') neg = (s[i] == '-'), ++i;
    std::string digits;
    long scale10 = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < s.size(); ++i) {
        char ch = s[i];
        if (ch >= '0' && ch <= '9') {
            digits += ch;
            seen_digit = true;
            if (seen_dot) --scale10;
        } else if (ch == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((ch == 'e' || ch == 'E') && seen_digit) {
            try {
                scale10 += std::stol(std::string(s.substr(i + 1)));
            } catch (const std::exception&) {
                fail();
            }
            i = s.size() - 1;
            break;
        } else {
            fail();
        }
    }
    if (!seen_digit) fail();
    BigInt mant(digits.empty() ? "0" : digits);
    if (neg) mant = -mant;
    BigRat r(mant, 1);
    if (scale10 > 0) r *= BigRat(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale10)), 1);
    if (scale10 < 0) r /= BigRat(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-scale10)), 1);
    return r;
}

inline std::string rat_to_string(const BigRat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace julia_rays
