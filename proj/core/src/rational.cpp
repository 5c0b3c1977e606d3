#include "ergolab/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace ergolab {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(text));
        }
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument("bad rational literal '" + text + "': " + e.what());
    }
}

std::string rational_str(const Rational& value) {
    const BigInt num = numerator(value);
    const BigInt den = denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& value) {
    return value.template convert_to<double>();
}

double log_rational(const Rational& value) {
    if (value <= 0) throw std::domain_error("log of non-positive rational");
    BigInt num = numerator(value);
    BigInt den = denominator(value);
    // ln(n/d) = (bn - bd) ln 2 + ln((n >> bn') / (d >> bd')) with both mantissa
    // quotients near 1, so the double conversion below never overflows.
    auto scaled_log = [](BigInt v) {
        const long bits = static_cast<long>(msb(v));
        const long shift = bits > 900 ? bits - 900 : 0;
        Rational mant(v, BigInt(1) << shift);
        return static_cast<double>(shift) * std::log(2.0) + std::log(mant.template convert_to<double>());
    };
    return scaled_log(num) - scaled_log(den);
}

BigInt rational_floor(const Rational& value) {
    BigInt num = numerator(value);
    BigInt den = denominator(value);
    BigInt q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
}

Rational fractional_part(const Rational& value) {
    return value - Rational(rational_floor(value));
}

} // namespace ergolab
