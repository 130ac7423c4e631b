#pragma once

#include "foliage/rational.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>

namespace foliage {

using Complex = std::complex<double>;

// Exact element of the cyclotomic field Q(z), z = exp(2 pi i / 12), written
// (a0 + a1 z + a2 z^2 + a3 z^3) / d with z^4 = z^2 - 1. Integer numerators
// share one positive denominator and the tuple is kept in lowest terms, so
// equal values have equal representations. Contains the Gaussian rationals
// (i = z^3) and every 12th root of unity.
class Cyclo {
public:
    Cyclo() : den_(1) {}
    Cyclo(long v) : num_{v, 0, 0, 0}, den_(1) {}
    Cyclo(const Rational& r) : num_{r.get_num(), 0, 0, 0}, den_(r.get_den()) {}
    explicit Cyclo(const std::array<Rational, 4>& coords);

    static Cyclo gaussian(const Rational& re, const Rational& im);
    // z^k, i.e. exp(2 pi i k / 12).
    static Cyclo root_of_unity(long k);
    static Cyclo imag_unit() { return root_of_unity(3); }

    // Rational coordinates in the basis 1, z, z^2, z^3.
    std::array<Rational, 4> coords() const;
    Rational coord(int k) const;

    bool is_zero() const { return sgn(num_[0]) == 0 && sgn(num_[1]) == 0 && sgn(num_[2]) == 0 && sgn(num_[3]) == 0; }
    bool is_rational() const { return sgn(num_[1]) == 0 && sgn(num_[2]) == 0 && sgn(num_[3]) == 0; }
    bool is_gaussian() const { return sgn(num_[1]) == 0 && sgn(num_[2]) == 0; }
    Rational rational_part() const { return coord(0); }
    // Valid when is_gaussian().
    Rational gaussian_re() const { return coord(0); }
    Rational gaussian_im() const { return coord(3); }

    // Image under z -> exp(2 pi i k / 12), k in {1,5,7,11}.
    Complex embed(int k) const;
    Complex to_complex() const { return embed(1); }

    Cyclo conj() const;
    Cyclo inverse() const;

    // Recovers an element from its images under the embeddings k=1 and k=5,
    // rationalizing coordinates with bounded denominators; nullopt when the
    // candidate is not a close fit.
    static std::optional<Cyclo> recognize(Complex e1, Complex e5, long max_den = 100000);

    Cyclo& operator+=(const Cyclo& o);
    Cyclo& operator-=(const Cyclo& o);
    Cyclo& operator*=(const Cyclo& o);
    Cyclo& operator/=(const Cyclo& o) { return *this *= o.inverse(); }

    friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
    friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
    friend Cyclo operator*(const Cyclo& a, const Cyclo& b);
    friend Cyclo operator/(Cyclo a, const Cyclo& b) { return a /= b; }
    Cyclo operator-() const;

    friend bool operator==(const Cyclo& a, const Cyclo& b) { return a.den_ == b.den_ && a.num_ == b.num_; }
    friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

    std::string str() const;

private:
    void normalize();

    std::array<Integer, 4> num_;
    Integer den_;
};

Cyclo pow(const Cyclo& base, long e);

} // namespace foliage
