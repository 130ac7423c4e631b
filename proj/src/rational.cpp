#include "foliage/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace foliage {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

Integer parse_integer(std::string_view s)
{
    std::string_view body = s;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) body.remove_prefix(1);
    if (!all_digits(body)) throw std::invalid_argument("malformed rational '" + std::string(s) + "'");
    return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
}

} // namespace

Rational parse_rational(std::string_view text)
{
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rational literal");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash));
        Integer den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        bool negative = text[0] == '-';
        std::string_view whole = text.substr(0, dot);
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.remove_prefix(1);
        std::string_view fraction = text.substr(dot + 1);
        if (!(whole.empty() || all_digits(whole)) || !all_digits(fraction))
            throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        Integer scale = 1;
        for (std::size_t i = 0; i < fraction.size(); ++i) scale *= 10;
        Integer num = Integer(std::string(whole.empty() ? "0" : whole)) * scale + Integer(std::string(fraction));
        Rational r(negative ? Integer(-num) : num, scale);
        r.canonicalize();
        return r;
    }
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& r)
{
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational rationalize(double x, long max_den)
{
    if (!std::isfinite(x)) throw std::domain_error("cannot rationalize a non-finite value");
    bool negative = x < 0;
    double v = std::fabs(x);
    // Convergents h/k of the continued fraction of v.
    Integer h_prev = 1, h = static_cast<long>(std::floor(v));
    Integer k_prev = 0, k = 1;
    double rem = v - std::floor(v);
    while (rem > 1e-15) {
        double inv = 1.0 / rem;
        double a_d = std::floor(inv);
        if (a_d > 1e12) break;
        Integer a = static_cast<long>(a_d);
        Integer k_next = a * k + k_prev;
        if (k_next > max_den) break;
        Integer h_next = a * h + h_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        rem = inv - a_d;
    }
    Rational r(h, k);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

Rational frac(const Rational& r)
{
    Rational c = r;
    c.canonicalize();
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
    return c - Rational(q);
}

Integer gcd(const Integer& a, const Integer& b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer lcm(const Integer& a, const Integer& b)
{
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

} // namespace foliage
