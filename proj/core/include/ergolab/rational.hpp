#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace ergolab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p", "-p", "p/q" with q > 0 after normalization. Throws
// std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(const std::string& text);

// Canonical serialization: "p" when the denominator is 1, else "p/q" in
// lowest terms with q > 0.
std::string rational_str(const Rational& value);

// Nearest-double conversion, exact for representable values.
double to_double(const Rational& value);

// Natural log of a positive rational, accurate to ~1 ulp even when numerator
// or denominator exceed double range (scales by powers of two first).
double log_rational(const Rational& value);

inline Rational pow2(long exponent) {
    Rational result;
    if (exponent >= 0) {
        result = Rational(BigInt(1) << exponent);
    } else {
        result = Rational(BigInt(1), BigInt(1) << (-exponent));
    }
    return result;
}

// Floor of a rational as a BigInt (round toward negative infinity).
BigInt rational_floor(const Rational& value);

// x - floor(x), in [0, 1).
Rational fractional_part(const Rational& value);

} // namespace ergolab
