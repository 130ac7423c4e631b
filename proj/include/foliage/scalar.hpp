#pragma once

#include "foliage/cyclo.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace foliage {

using Exact = Cyclo;
using Float = Complex;

// Default comparison tolerance of the float backend.
inline constexpr double kDefaultEpsilon = 1e-10;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Exact> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact";
    static bool is_zero(const Exact& a) { return a.is_zero(); }
    static bool near_zero(const Exact& a, double) { return a.is_zero(); }
    static Exact from_rational(const Rational& r) { return Exact(r); }
    static Exact from_int(long v) { return Exact(v); }
    static Complex to_complex(const Exact& a) { return a.to_complex(); }
    static double magnitude(const Exact& a) { return std::abs(a.to_complex()); }
    static std::string str(const Exact& a) { return a.str(); }
};

template <>
struct ScalarTraits<Float> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";
    static bool is_zero(const Float& a) { return a == Float(0.0); }
    static bool near_zero(const Float& a, double eps) { return std::abs(a) <= eps; }
    static Float from_rational(const Rational& r) { return Float(r.get_d(), 0.0); }
    static Float from_int(long v) { return Float(static_cast<double>(v), 0.0); }
    static Complex to_complex(const Float& a) { return a; }
    static double magnitude(const Float& a) { return std::abs(a); }
    static std::string str(const Float& a)
    {
        return "(" + std::to_string(a.real()) + "," + std::to_string(a.imag()) + ")";
    }
};

template <class S>
bool is_zero(const S& a) { return ScalarTraits<S>::is_zero(a); }

inline Float to_float(const Exact& a) { return a.to_complex(); }
inline Float to_float(const Float& a) { return a; }

} // namespace foliage
