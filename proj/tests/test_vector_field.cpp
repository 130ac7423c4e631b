#include "support.hpp"

#include <doctest.h>

using namespace foliage;
using support::diffeo;
using support::field;
using support::poly;
using support::q;
using support::var;

namespace {

// (-y + x(1 - x^2 - y^2)) d/dx + (x + y(1 - x^2 - y^2)) d/dy
ExactField circle_system(int N = 3)
{
    auto x = var(2, N, 0), y = var(2, N, 1);
    auto one = ExactSeries::constant(2, N, q(1));
    auto r = one - x * x - y * y;
    return field({-y + x * r, x + y * r});
}

IntVector ints(std::initializer_list<long> v)
{
    IntVector out;
    for (long x : v) out.emplace_back(x);
    return out;
}

} // namespace

TEST_CASE("Lie derivative")
{
    const int N = 6;
    auto x = var(1, N, 0);
    auto X = field({x});
    auto xk = x * x * x;
    CHECK(lie_derivative(X, xk) == xk * q(3));

    auto R = ExactField::radial(3, N);
    auto f = poly(3, N, {{{2, 1, 0}, q(1)}, {{0, 0, 3}, q(-4)}, {{1, 1, 1}, q(2, 3)}});
    CHECK(lie_derivative(R, f) == f * q(3));

    auto a = var(2, N, 0), b = var(2, N, 1);
    CHECK(lie_derivative(field({a, -b}), a * b).is_zero());

    SUBCASE("Leibniz rule")
    {
        std::mt19937_64 rng(2);
        for (int t = 0; t < 10; ++t) {
            auto Y = field({support::random_poly(rng, 2, N, 3, true), support::random_poly(rng, 2, N, 3, true)});
            auto g = support::random_poly(rng, 2, N, 3, false);
            auto h = support::random_poly(rng, 2, N, 3, false);
            auto lhs = poly_lie_derivative(Y, poly_mul(g, h));
            auto rhs = poly_mul(g, poly_lie_derivative(Y, h)) + poly_mul(h, poly_lie_derivative(Y, g));
            CHECK(as_polynomial(lhs) == as_polynomial(rhs.with_order(lhs.order())));
        }
    }
}

TEST_CASE("cofactor")
{
    const int N = 3;
    auto x = var(2, N, 0), y = var(2, N, 1);
    auto K = cofactor(field({x * q(3), y * q(5)}), x);
    REQUIRE(K);
    CHECK(as_polynomial(*K) == as_polynomial(ExactSeries::constant(2, N, q(3))));

    auto g = x * x + y * y - ExactSeries::constant(2, N, q(1));
    auto Kc = cofactor(circle_system(), g);
    REQUIRE(Kc);
    CHECK(as_polynomial(*Kc) == as_polynomial((x * x + y * y) * q(-2)));
    // Oracle: dg/dt = -2 g (g + 1), so X(g) - g K vanishes identically.
    auto Xg = poly_lie_derivative(circle_system(), g);
    CHECK(as_polynomial(Xg) == as_polynomial(poly_mul(g, *Kc)));

    CHECK_FALSE(cofactor(field({x, y * q(2)}), x + y));
    CHECK_THROWS_AS(cofactor(field({x, y}), ExactSeries(2, N)), std::invalid_argument);
}

TEST_CASE("generic form analysis")
{
    const int N = 3;
    auto x = var(3, N, 0), y = var(3, N, 1), z = var(3, N, 2);
    auto r = generic_form_analysis(field({x + x * y, y * q(2), -z}));
    CHECK(r.is_generic);
    CHECK(r.lambda == std::vector<Exact>{q(1), q(2), q(-1)});
    REQUIRE(r.star_evaluated);
    REQUIRE(r.star);
    CHECK(r.star->index == 2);

    auto b = var(2, N, 1);
    auto nil = generic_form_analysis(field({b, ExactSeries(2, N)}));
    CHECK_FALSE(nil.is_generic);
    CHECK_FALSE(nil.failures.empty());

    auto X = field({x, y * q(2), z * q(-3)});
    std::vector<ExactSeries> F{poly(3, 6, {{{3, 0, 1}, q(1)}}), poly(3, 6, {{{0, 3, 2}, q(1)}})};
    auto g = generic_form_analysis(X, F);
    REQUIRE(g.integer_ratios);
    CHECK(*g.integer_ratios == ints({1, 2, -3}));
    REQUIRE(g.ratios_consistent);
    CHECK(*g.ratios_consistent);
}

TEST_CASE("first integral check")
{
    auto x = var(2, 6, 0), y = var(2, 6, 1);
    auto v = first_integral_check(field({x, -y}), {x * y});
    CHECK(v.residuals_vanish);
    CHECK(v.wedge_nonzero);
    CHECK(v.is_first_integral());

    const int N = 8;
    auto x1 = var(3, N, 0), x2 = var(3, N, 1), x3 = var(3, N, 2);
    auto X = field({x1, x2 * q(2), x3 * q(-3)});
    auto w = first_integral_check(X, {x1 * x1 * x1 * x3, x2 * x2 * x2 * x3 * x3});
    CHECK(w.residuals_vanish);
    CHECK(w.is_first_integral());

    auto R = ExactField::radial(2, 4);
    auto bad = first_integral_check(R, {var(2, 4, 0)});
    CHECK_FALSE(bad.residuals_vanish);
    CHECK(bad.residuals[0] == var(2, bad.residuals[0].order(), 0));

    SUBCASE("post-composition with a unit keeps residuals zero")
    {
        auto f = x * y;
        auto u = f + f * f * q(3) + f * f * f;
        CHECK(first_integral_check(field({x, -y}), {u}).residuals_vanish);
    }
}

TEST_CASE("radial field from a map")
{
    const int N = 6;
    CHECK(radial_field_from_map(ExactDiffeo::identity(2, N)) == ExactField::radial(2, N));

    auto x1 = var(2, N, 0), x2 = var(2, N, 1);
    auto H = diffeo({x1 + x1 * x1, x2});
    auto X = radial_field_from_map(H);
    // Oracle: X_1 = (x + x^2) / (1 + 2x) by series division.
    auto expect = divide(x1 + x1 * x1, ExactSeries::constant(2, N, q(1)) + x1 * q(2));
    CHECK(X[0] == expect);
    CHECK(X[1] == x2);
    CHECK(X[0].coeff({2, 0}) == q(-1));
    CHECK(X[0].coeff({3, 0}) == q(2));

    SUBCASE("invariance under maps linear in the H chart")
    {
        // X = H^* R and R is invariant under every linear map, so any G with
        // H o G = L o H leaves X invariant; build G = H^{-1} o L o H.
        auto Hs = diffeo({x1 + x2 * x2, x2 + x1 * x1 * x2});
        auto Xs = radial_field_from_map(Hs);
        CHECK(pullback_invariance(ExactDiffeo::identity(2, N), Xs).is_zero());
        auto L = ExactDiffeo::linear({{q(0), q(-1)}, {q(1), q(0)}}, N);
        auto G = compose(invert(Hs), compose(L, Hs));
        CHECK(pullback_invariance(G, Xs).is_zero());
    }
}

TEST_CASE("pullback invariance")
{
    const int N = 5;
    auto R = ExactField::radial(2, N);
    auto A = ExactDiffeo::linear({{q(1), q(2)}, {q(-3), q(5)}}, N);
    CHECK(pullback_invariance(A, R).is_zero());

    auto D = ExactDiffeo::linear({{q(2), q(0)}, {q(0), q(3)}}, N);
    auto Y = field({ExactSeries(2, N), var(2, N, 0)});
    auto res = pullback_invariance(D, Y);
    CHECK_FALSE(res.is_zero());
    // Oracle: D_* (x1 d2) = 3 (x1 / 2) d2, so the residual is (1/2) x1 d2.
    CHECK(res[1].coeff({1, 0}) == q(1, 2));

    std::mt19937_64 rng(4);
    auto Z = field({support::random_poly(rng, 2, N, 3, true), support::random_poly(rng, 2, N, 3, true)});
    CHECK(pullback_invariance(ExactDiffeo::identity(2, N), Z).is_zero());
}

TEST_CASE("infinitesimal symmetries")
{
    CHECK(infinitesimal_symmetries<Exact>({var(2, 6, 0), var(2, 6, 1)}, 3).empty());

    auto x1 = var(2, 4, 0), x2 = var(2, 4, 1);
    auto basis = infinitesimal_symmetries<Exact>({x1 * x2}, 1);
    REQUIRE(basis.size() == 1);
    auto s = basis[0];
    // Proportional to x1 d1 - x2 d2.
    const Exact c = s[0].coeff({1, 0});
    CHECK_FALSE(c.is_zero());
    CHECK(s == field({var(2, 1, 0) * c, var(2, 1, 1) * (-c)}));

    auto y1 = var(2, 7, 0), y2 = var(2, 7, 1);
    CHECK(infinitesimal_symmetries<Exact>({y1 * y1, y1 * y2}, 3).empty());
}
