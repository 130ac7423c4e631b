#pragma once

#include "foliage/formal_diffeo.hpp"
#include "foliage/series.hpp"
#include "foliage/vector_field.hpp"

#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

namespace support {

using namespace foliage;

inline Exact q(long num, long den = 1)
{
    return Exact(make_rational(num, den));
}

inline Exact gi(long re, long im)
{
    return Exact::gaussian(re, im);
}

using Term = std::pair<MultiIndex, Exact>;

inline ExactSeries poly(int n, int order, std::initializer_list<Term> terms)
{
    ExactSeries s(n, order);
    for (const auto& [e, c] : terms) s.add_term(e, c);
    return s;
}

inline ExactSeries var(int n, int order, int i)
{
    return ExactSeries::variable(n, order, i);
}

inline ExactField field(std::vector<ExactSeries> c)
{
    return ExactField(std::move(c));
}

inline ExactDiffeo diffeo(std::vector<ExactSeries> c)
{
    return ExactDiffeo(std::move(c));
}

inline ExactDiffeo diag(const std::vector<Exact>& d, int order)
{
    const int n = static_cast<int>(d.size());
    auto a = zero_matrix<Exact>(n, n);
    for (int i = 0; i < n; ++i) a[i][i] = d[i];
    return ExactDiffeo::linear(a, order);
}

// Random exact polynomial with small integer coefficients and no constant
// term when `vanish` is set.
inline ExactSeries random_poly(std::mt19937_64& rng, int n, int order, int max_degree, bool vanish, double density = 0.5)
{
    std::uniform_int_distribution<long> coef(-3, 3);
    std::bernoulli_distribution keep(density);
    MonomialBasis basis(n, max_degree);
    ExactSeries s(n, order);
    for (std::size_t i = vanish ? 1 : 0; i < basis.size(); ++i)
        if (keep(rng)) s.add_term(basis.exponents(i), Exact(coef(rng)));
    return s;
}

// (x + random quadratic-and-higher terms) with identity linear part.
inline ExactDiffeo random_tangent_to_identity(std::mt19937_64& rng, int n, int order, int max_degree)
{
    std::vector<ExactSeries> c;
    for (int i = 0; i < n; ++i) {
        ExactSeries s = random_poly(rng, n, order, max_degree, true, 0.4);
        ExactSeries lin = s.homogeneous_part(1);
        s -= lin;
        s += var(n, order, i);
        c.push_back(s);
    }
    return ExactDiffeo(std::move(c));
}

} // namespace support
