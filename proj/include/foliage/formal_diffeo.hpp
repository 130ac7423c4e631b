#pragma once

#include "foliage/linalg.hpp"
#include "foliage/series.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace foliage {

// Truncated formal diffeomorphism of (C^n, 0): n series without constant
// term whose linear part is invertible. All components share one order.
template <class S>
class FormalDiffeo {
public:
    using Series = TruncatedSeries<S>;

    explicit FormalDiffeo(std::vector<Series> components, double eps = kDefaultEpsilon) : c_(std::move(components))
    {
        if (c_.empty()) throw std::invalid_argument("diffeomorphism needs at least one component");
        const int n = static_cast<int>(c_.size());
        int order = c_[0].order();
        for (const auto& f : c_) {
            if (f.arity() != n) throw std::invalid_argument("component arity differs from component count");
            if (!ScalarTraits<S>::near_zero(f.constant_term(), ScalarTraits<S>::exact ? 0.0 : eps))
                throw std::invalid_argument("diffeomorphism component has nonzero constant term");
            order = std::min(order, f.order());
        }
        if (order < 1) throw std::invalid_argument("diffeomorphism needs truncation order >= 1");
        for (auto& f : c_) f = f.with_order(order);
        if (ScalarTraits<S>::near_zero(foliage::determinant(linear_part(), eps), ScalarTraits<S>::exact ? 0.0 : eps))
            throw std::invalid_argument("linear part is not invertible");
    }

    static FormalDiffeo identity(int n, int order)
    {
        std::vector<Series> c;
        for (int i = 0; i < n; ++i) c.push_back(Series::variable(n, order, i));
        return FormalDiffeo(std::move(c));
    }

    static FormalDiffeo linear(const Matrix<S>& a, int order)
    {
        const int n = static_cast<int>(a.size());
        std::vector<Series> c;
        for (int i = 0; i < n; ++i) {
            Series f(n, order);
            for (int j = 0; j < n; ++j) {
                MultiIndex e(n, 0);
                e[j] = 1;
                f.add_term(e, a[i][j]);
            }
            c.push_back(std::move(f));
        }
        return FormalDiffeo(std::move(c));
    }

    int arity() const { return static_cast<int>(c_.size()); }
    int order() const { return c_[0].order(); }
    const std::vector<Series>& components() const { return c_; }
    const Series& operator[](std::size_t i) const { return c_[i]; }

    Matrix<S> linear_part() const
    {
        const int n = arity();
        auto a = zero_matrix<S>(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[i][j] = c_[i].coeff_at(1 + j);
        return a;
    }

    FormalDiffeo with_order(int k) const
    {
        std::vector<Series> c;
        for (const auto& f : c_) c.push_back(f.with_order(k));
        return FormalDiffeo(std::move(c));
    }

    bool is_identity(double eps = kDefaultEpsilon) const
    {
        const int n = arity();
        for (int i = 0; i < n; ++i) {
            Series d = c_[i] - Series::variable(n, order(), i);
            if (ScalarTraits<S>::exact ? !d.is_zero() : !d.near_zero(eps)) return false;
        }
        return true;
    }

    // True when every component is linear and the linear part is diagonal.
    bool is_diagonal_linear(double eps = kDefaultEpsilon) const
    {
        const int n = arity();
        for (int i = 0; i < n; ++i) {
            Series d = c_[i] - Series::monomial(n, order(), unit(n, i), c_[i].coeff_at(1 + i));
            if (ScalarTraits<S>::exact ? !d.is_zero() : !d.near_zero(eps)) return false;
        }
        return true;
    }

    std::vector<Complex> evaluate(const std::vector<Complex>& x) const
    {
        std::vector<Complex> y;
        for (const auto& f : c_) y.push_back(f.evaluate(x));
        return y;
    }

    friend bool operator==(const FormalDiffeo& a, const FormalDiffeo& b) { return a.c_ == b.c_; }

    static MultiIndex unit(int n, int i)
    {
        MultiIndex e(n, 0);
        e[i] = 1;
        return e;
    }

private:
    std::vector<Series> c_;
};

using ExactDiffeo = FormalDiffeo<Exact>;
using FloatDiffeo = FormalDiffeo<Float>;

// G o H.
template <class S>
FormalDiffeo<S> compose(const FormalDiffeo<S>& G, const FormalDiffeo<S>& H)
{
    if (G.arity() != H.arity()) throw std::invalid_argument("arity mismatch in diffeomorphism composition");
    return FormalDiffeo<S>(compose_tuple(G.components(), H.components()));
}

// Order-by-order inverse: H = L^{-1}(y - R(H)) iterated, one degree per pass.
template <class S>
FormalDiffeo<S> invert(const FormalDiffeo<S>& G)
{
    using Series = TruncatedSeries<S>;
    const int n = G.arity(), N = G.order();
    auto linv = inverse(G.linear_part());
    if (!linv) throw std::invalid_argument("linear part is not invertible");
    std::vector<Series> rest;
    for (int i = 0; i < n; ++i) {
        Series r = G[i];
        for (int j = 0; j < n; ++j) r.add_term(FormalDiffeo<S>::unit(n, j), -G[i].coeff_at(1 + j));
        rest.push_back(std::move(r));
    }
    auto apply_linv = [&](const std::vector<Series>& v) {
        std::vector<Series> out;
        for (int i = 0; i < n; ++i) {
            Series acc(n, N);
            for (int j = 0; j < n; ++j)
                if (!ScalarTraits<S>::is_zero((*linv)[i][j])) acc.add_scaled(v[j], (*linv)[i][j]);
            out.push_back(std::move(acc));
        }
        return out;
    };
    std::vector<Series> y;
    for (int i = 0; i < n; ++i) y.push_back(Series::variable(n, N, i));
    std::vector<Series> h = apply_linv(y);
    for (int pass = 2; pass <= N; ++pass) {
        // Degree `pass` of H only needs R o H up to that degree.
        std::vector<Series> hj;
        for (const auto& f : h) hj.push_back(f.with_order(pass));
        std::vector<Series> rj;
        for (const auto& f : rest) rj.push_back(f.with_order(pass));
        auto rh = compose_tuple(rj, hj);
        std::vector<Series> rhs;
        for (int i = 0; i < n; ++i) rhs.push_back(y[i] - rh[i].with_order(N));
        h = apply_linv(rhs);
    }
    return FormalDiffeo<S>(std::move(h));
}

// h^{-1} o G o h.
template <class S>
FormalDiffeo<S> conjugate(const FormalDiffeo<S>& G, const FormalDiffeo<S>& h)
{
    return compose(invert(h), compose(G, h));
}

template <class S>
FormalDiffeo<S> power(const FormalDiffeo<S>& G, unsigned long k)
{
    FormalDiffeo<S> result = FormalDiffeo<S>::identity(G.arity(), G.order());
    FormalDiffeo<S> base = G;
    while (k > 0) {
        if (k & 1) result = compose(result, base);
        k >>= 1;
        if (k) base = compose(base, base);
    }
    return result;
}

// Smallest k <= max_order with G^k = id up to the truncation order.
template <class S>
std::optional<int> element_order(const FormalDiffeo<S>& G, int max_order, double eps = kDefaultEpsilon)
{
    if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
    FormalDiffeo<S> p = G;
    for (int k = 1; k <= max_order; ++k) {
        if (p.is_identity(eps)) return k;
        if (k < max_order) p = compose(p, G);
    }
    return std::nullopt;
}

// f o G - f.
template <class S>
TruncatedSeries<S> invariance_check(const TruncatedSeries<S>& f, const FormalDiffeo<S>& G)
{
    if (f.arity() != G.arity()) throw std::invalid_argument("arity mismatch in invariance check");
    TruncatedSeries<S> composed = compose(f, G.components());
    return composed - f.with_order(composed.order());
}

template <class S>
bool is_invariant(const TruncatedSeries<S>& f, const FormalDiffeo<S>& G, double eps = kDefaultEpsilon)
{
    auto r = invariance_check(f, G);
    return ScalarTraits<S>::exact ? r.is_zero() : r.near_zero(eps);
}

class GroupClosureError : public std::invalid_argument {
public:
    GroupClosureError(std::size_t i, std::size_t j)
        : std::invalid_argument("claimed elements not closed: product of elements " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " is not in the list"),
          left(i), right(j)
    {
    }
    std::size_t left, right;
};

template <class S>
struct GroupPresentation {
    std::vector<FormalDiffeo<S>> generators;
    std::optional<std::vector<FormalDiffeo<S>>> claimed_elements;
};

// Element list of a presentation: claimed elements after an exact closure
// check, or the cyclic group of a single generator.
template <class S>
std::vector<FormalDiffeo<S>> group_elements(const GroupPresentation<S>& group, int max_cyclic_order = 64,
                                            double eps = kDefaultEpsilon)
{
    if (group.claimed_elements) {
        const auto& el = *group.claimed_elements;
        if (el.empty()) throw std::invalid_argument("empty element list");
        auto find = [&](const FormalDiffeo<S>& g) {
            for (const auto& e : el) {
                bool same = true;
                for (int i = 0; i < g.arity() && same; ++i) same = same_series(g[i], e[i], eps);
                if (same) return true;
            }
            return false;
        };
        for (std::size_t i = 0; i < el.size(); ++i)
            for (std::size_t j = 0; j < el.size(); ++j)
                if (!find(compose(el[i], el[j]))) throw GroupClosureError(i, j);
        for (const auto& g : group.generators)
            if (!find(g)) throw std::invalid_argument("generator missing from the claimed element list");
        return el;
    }
    if (group.generators.size() != 1)
        throw std::invalid_argument("claimed_elements are required unless the group has a single generator");
    const auto& g = group.generators[0];
    std::vector<FormalDiffeo<S>> el{g};
    while (!el.back().is_identity(eps)) {
        if (static_cast<int>(el.size()) >= max_cyclic_order)
            throw std::invalid_argument("generator order exceeds " + std::to_string(max_cyclic_order));
        el.push_back(compose(el.back(), g));
    }
    return el;
}

// h with h^{-1} o G_j o h = (dG_j)_0 for every element, dh(0) = I:
// h^{-1} = (1/r) sum_j (dG_j)_0^{-1} G_j. With a diagonalizing P the
// result is h o P, so that h^{-1} o G_j o h = P^{-1} (dG_j)_0 P.
template <class S>
FormalDiffeo<S> average_linearizer(const std::vector<FormalDiffeo<S>>& elements,
                                   const std::optional<Matrix<S>>& diagonalizer = std::nullopt,
                                   double eps = kDefaultEpsilon)
{
    using Series = TruncatedSeries<S>;
    if (elements.empty()) throw std::invalid_argument("empty element list");
    const int n = elements[0].arity();
    const int N = elements[0].order();
    const std::size_t r = elements.size();
    for (const auto& g : elements) {
        auto k = element_order(g, static_cast<int>(r), eps);
        if (!k) throw std::invalid_argument("an element has order exceeding the size of the element list");
    }
    std::vector<Series> hinv(n, Series(n, N));
    for (const auto& g : elements) {
        auto ainv = inverse(g.linear_part(), eps);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!ScalarTraits<S>::is_zero((*ainv)[i][j])) hinv[i].add_scaled(g[j], (*ainv)[i][j]);
    }
    const S scale = ScalarTraits<S>::from_int(1) / ScalarTraits<S>::from_int(static_cast<long>(r));
    for (auto& f : hinv) f *= scale;
    FormalDiffeo<S> h = invert(FormalDiffeo<S>(std::move(hinv)));
    if (diagonalizer) h = compose(h, FormalDiffeo<S>::linear(*diagonalizer, N));
    return h;
}

// f_c = sum_i c_i ((h^{-1})_i)^m, after checking that h^{-1} o G o h is
// diagonal with m-th roots of unity on the diagonal.
template <class S>
TruncatedSeries<S> invariant_hypersurface_family(const FormalDiffeo<S>& G, const FormalDiffeo<S>& h, int m,
                                                 const std::vector<S>& c, double eps = kDefaultEpsilon)
{
    using Series = TruncatedSeries<S>;
    if (m < 1) throw std::invalid_argument("exponent m must be positive");
    const int n = G.arity();
    if (static_cast<int>(c.size()) != n) throw std::invalid_argument("coefficient vector length differs from arity");
    FormalDiffeo<S> hinv = invert(h);
    FormalDiffeo<S> d = compose(hinv, compose(G, h));
    if (!d.is_diagonal_linear(eps)) throw std::invalid_argument("h^{-1} o G o h is not diagonal linear");
    for (int i = 0; i < n; ++i) {
        S p = ScalarTraits<S>::from_int(1);
        for (int k = 0; k < m; ++k) p *= d[i].coeff_at(1 + i);
        if (!ScalarTraits<S>::near_zero(p - ScalarTraits<S>::from_int(1), ScalarTraits<S>::exact ? 0.0 : eps))
            throw std::invalid_argument("diagonal entry " + std::to_string(i + 1) + " is not an m-th root of unity");
    }
    Series f(n, G.order());
    for (int i = 0; i < n; ++i) {
        if (ScalarTraits<S>::is_zero(c[i])) continue;
        Series p = Series::constant(n, G.order(), ScalarTraits<S>::from_int(1));
        for (int k = 0; k < m; ++k) p = p * hinv[i];
        f.add_scaled(p, c[i]);
    }
    if (!is_invariant(f, G, eps)) throw std::logic_error("invariant family failed its invariance postcondition");
    return f;
}

} // namespace foliage

namespace foliage {

// Eigenvector matrix P (columns) of a finite-order linear map whose
// eigenvalues are 12th roots of unity; nullopt when A is not of that kind.
std::optional<Matrix<Exact>> root_of_unity_diagonalizer(const Matrix<Exact>& a);

} // namespace foliage
