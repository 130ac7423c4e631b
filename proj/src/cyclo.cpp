#include "foliage/cyclo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace foliage {

Cyclo::Cyclo(const std::array<Rational, 4>& coords) : den_(1)
{
    for (const auto& c : coords) den_ = lcm(den_, c.get_den());
    for (int k = 0; k < 4; ++k) num_[k] = coords[k].get_num() * (den_ / coords[k].get_den());
    normalize();
}

void Cyclo::normalize()
{
    if (is_zero()) {
        den_ = 1;
        return;
    }
    if (den_ == 1) return;
    Integer g = den_;
    for (const auto& a : num_) {
        if (sgn(a) == 0) continue;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
        if (g == 1) return;
    }
    for (auto& a : num_) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
}

Rational Cyclo::coord(int k) const
{
    Rational r(num_[k], den_);
    r.canonicalize();
    return r;
}

std::array<Rational, 4> Cyclo::coords() const
{
    return {coord(0), coord(1), coord(2), coord(3)};
}

Cyclo Cyclo::gaussian(const Rational& re, const Rational& im)
{
    return Cyclo(std::array<Rational, 4>{re, 0, 0, im});
}

Cyclo Cyclo::root_of_unity(long k)
{
    k %= 12;
    if (k < 0) k += 12;
    const bool negate = k >= 6;
    if (negate) k -= 6;
    Cyclo r;
    if (k < 4) {
        r.num_[k] = 1;
    } else if (k == 4) {
        r.num_[2] = 1;
        r.num_[0] = -1;
    } else {
        r.num_[3] = 1;
        r.num_[1] = -1;
    }
    return negate ? -r : r;
}

Complex Cyclo::embed(int k) const
{
    const double angle = 2.0 * std::numbers::pi * k / 12.0;
    const Complex w = std::polar(1.0, angle);
    Complex acc = 0, p = 1;
    for (int j = 0; j < 4; ++j) {
        if (sgn(num_[j]) != 0) acc += coord(j).get_d() * p;
        p *= w;
    }
    return acc;
}

Cyclo Cyclo::conj() const
{
    Cyclo r;
    r.num_ = {num_[0] + num_[2], num_[1], -num_[2], -num_[1] - num_[3]};
    r.den_ = den_;
    return r;
}

Cyclo& Cyclo::operator+=(const Cyclo& o)
{
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
        for (int k = 0; k < 4; ++k) num_[k] += o.num_[k];
    } else {
        for (int k = 0; k < 4; ++k) {
            num_[k] *= o.den_;
            mpz_addmul(num_[k].get_mpz_t(), o.num_[k].get_mpz_t(), den_.get_mpz_t());
        }
        den_ *= o.den_;
    }
    normalize();
    return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o)
{
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
        for (int k = 0; k < 4; ++k) num_[k] -= o.num_[k];
    } else {
        for (int k = 0; k < 4; ++k) {
            num_[k] *= o.den_;
            mpz_submul(num_[k].get_mpz_t(), o.num_[k].get_mpz_t(), den_.get_mpz_t());
        }
        den_ *= o.den_;
    }
    normalize();
    return *this;
}

Cyclo Cyclo::operator-() const
{
    Cyclo r;
    for (int k = 0; k < 4; ++k) r.num_[k] = -num_[k];
    r.den_ = den_;
    return r;
}

Cyclo operator*(const Cyclo& a, const Cyclo& b)
{
    Cyclo r;
    if (a.is_zero() || b.is_zero()) return r;
    if (b.is_rational()) {
        for (int k = 0; k < 4; ++k) r.num_[k] = a.num_[k] * b.num_[0];
    } else if (a.is_rational()) {
        for (int k = 0; k < 4; ++k) r.num_[k] = b.num_[k] * a.num_[0];
    } else {
        std::array<Integer, 7> p;
        for (int i = 0; i < 4; ++i) {
            if (sgn(a.num_[i]) == 0) continue;
            for (int j = 0; j < 4; ++j)
                if (sgn(b.num_[j]) != 0) mpz_addmul(p[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
        }
        // z^6 = -1, z^5 = z^3 - z, z^4 = z^2 - 1
        r.num_[0] = p[0] - p[6] - p[4];
        r.num_[1] = p[1] - p[5];
        r.num_[2] = p[2] + p[4];
        r.num_[3] = p[3] + p[5];
    }
    r.den_ = a.den_ * b.den_;
    r.normalize();
    return r;
}

Cyclo& Cyclo::operator*=(const Cyclo& o)
{
    return *this = *this * o;
}

Cyclo Cyclo::inverse() const
{
    if (is_zero()) throw std::domain_error("division by zero in Q(zeta_12)");
    if (is_rational()) return Cyclo(Rational(1 / coord(0)));
    // Solve (multiplication-by-this) x = 1 by Gauss-Jordan elimination.
    std::array<std::array<Rational, 5>, 4> m{};
    Cyclo col = *this;
    const Cyclo z = root_of_unity(1);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) m[i][j] = col.coord(i);
        col *= z;
    }
    m[0][4] = 1;
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        while (sgn(m[piv][c]) == 0) ++piv;
        std::swap(m[piv], m[c]);
        Rational inv = 1 / m[c][c];
        for (int k = c; k < 5; ++k) m[c][k] *= inv;
        for (int r = 0; r < 4; ++r) {
            if (r == c || sgn(m[r][c]) == 0) continue;
            Rational f = m[r][c];
            for (int k = c; k < 5; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return Cyclo(std::array<Rational, 4>{m[0][4], m[1][4], m[2][4], m[3][4]});
}

std::optional<Cyclo> Cyclo::recognize(Complex e1, Complex e5, long max_den)
{
    // Real 4x4 system: Re/Im of sum a_j w^j for w = z and w = z^5.
    double a[4][5];
    for (int e = 0; e < 2; ++e) {
        const int k = e == 0 ? 1 : 5;
        const Complex target = e == 0 ? e1 : e5;
        Complex w = std::polar(1.0, 2.0 * std::numbers::pi * k / 12.0), p = 1;
        for (int j = 0; j < 4; ++j) {
            a[2 * e][j] = p.real();
            a[2 * e + 1][j] = p.imag();
            p *= w;
        }
        a[2 * e][4] = target.real();
        a[2 * e + 1][4] = target.imag();
    }
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        for (int k = 0; k < 5; ++k) std::swap(a[c][k], a[piv][k]);
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            for (int k = c; k < 5; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::array<Rational, 4> coords;
    for (int j = 0; j < 4; ++j) {
        double v = a[j][4] / a[j][j];
        if (!std::isfinite(v)) return std::nullopt;
        coords[j] = rationalize(v, max_den);
    }
    Cyclo candidate(coords);
    const double scale = 1.0 + std::abs(e1) + std::abs(e5);
    if (std::abs(candidate.embed(1) - e1) > 1e-8 * scale) return std::nullopt;
    if (std::abs(candidate.embed(5) - e5) > 1e-8 * scale) return std::nullopt;
    return candidate;
}

std::string Cyclo::str() const
{
    const auto c = coords();
    if (is_rational()) return to_string(c[0]);
    if (is_gaussian()) {
        std::string s = sgn(c[0]) != 0 ? to_string(c[0]) : std::string();
        if (!s.empty() && sgn(c[3]) > 0) s += "+";
        return s + to_string(c[3]) + "i";
    }
    return "[" + to_string(c[0]) + "," + to_string(c[1]) + "," + to_string(c[2]) + "," + to_string(c[3]) + "]";
}

Cyclo pow(const Cyclo& base, long e)
{
    if (e < 0) return pow(base.inverse(), -e);
    Cyclo result(1), b = base;
    while (e > 0) {
        if (e & 1) result *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return result;
}

} // namespace foliage
