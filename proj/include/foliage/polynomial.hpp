#pragma once

#include "foliage/scalar.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace foliage {

// Dense univariate polynomial over a field, coefficients from degree 0 up.
template <class S>
class UniPoly {
public:
    UniPoly() = default;
    UniPoly(const S& c) : c_{c} { trim(); }
    explicit UniPoly(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPoly variable()
    {
        return UniPoly(std::vector<S>{S{}, ScalarTraits<S>::from_int(1)});
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<S>& coeffs() const { return c_; }
    S coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : S{}; }
    const S& leading() const { return c_.back(); }

    S operator()(const S& x) const
    {
        S acc{};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    UniPoly derivative() const
    {
        std::vector<S> d;
        for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * ScalarTraits<S>::from_int(static_cast<long>(k)));
        return UniPoly(std::move(d));
    }

    UniPoly monic() const
    {
        if (is_zero()) return *this;
        UniPoly r(*this);
        const S inv = ScalarTraits<S>::from_int(1) / leading();
        for (auto& v : r.c_) v *= inv;
        return r;
    }

    UniPoly& operator+=(const UniPoly& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    UniPoly& operator-=(const UniPoly& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    UniPoly operator-() const
    {
        UniPoly r(*this);
        for (auto& v : r.c_) v = -v;
        return r;
    }
    friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
    friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        std::vector<S> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (ScalarTraits<S>::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return UniPoly(std::move(r));
    }
    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

    // Quotient and remainder of a by b.
    friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b)
    {
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        UniPoly r = a;
        std::vector<S> q(std::max(a.degree() - b.degree() + 1, 0));
        const S inv = ScalarTraits<S>::from_int(1) / b.leading();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            const int shift = r.degree() - b.degree();
            const S f = r.leading() * inv;
            q[shift] = f;
            for (int k = 0; k <= b.degree(); ++k) r.c_[k + shift] -= f * b.c_[k];
            r.trim();
        }
        return {UniPoly(std::move(q)), r};
    }

private:
    void trim()
    {
        while (!c_.empty() && ScalarTraits<S>::is_zero(c_.back())) c_.pop_back();
    }

    std::vector<S> c_;
};

template <class S>
UniPoly<S> poly_gcd(UniPoly<S> a, UniPoly<S> b)
{
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// Complex roots (with multiplicity) of a polynomial with complex coefficients.
std::vector<Complex> numeric_roots(const std::vector<Complex>& coeffs);

// Distinct roots lying in Q(zeta_12), each verified exactly.
std::vector<Exact> field_roots(const UniPoly<Exact>& p);

} // namespace foliage
