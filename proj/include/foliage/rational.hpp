#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace foliage {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", "p" and plain decimal literals such as "-0.25".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

// Best rational approximation with denominator <= max_den by continued fractions.
Rational rationalize(double x, long max_den = 1000000);

inline Rational make_rational(long num, long den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

// Fractional part in [0,1).
Rational frac(const Rational& r);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

} // namespace foliage
