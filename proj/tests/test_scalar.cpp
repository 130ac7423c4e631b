#include "support.hpp"

#include "foliage/linalg.hpp"
#include "foliage/polynomial.hpp"

#include <doctest.h>

using namespace foliage;
using support::q;

TEST_CASE("rational parsing and rationalize")
{
    CHECK(parse_rational("3/6") == make_rational(1, 2));
    CHECK(parse_rational("-0.25") == make_rational(-1, 4));
    CHECK(parse_rational("7") == 7);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK(rationalize(0.3333333333333333) == make_rational(1, 3));
    CHECK(frac(make_rational(-1, 4)) == make_rational(3, 4));
    CHECK(to_string(make_rational(-2, 4)) == "-1/2");
}

TEST_CASE("cyclotomic scalars")
{
    const Exact i = Exact::imag_unit();
    CHECK(i * i == Exact(-1));
    CHECK(pow(Exact::root_of_unity(1), 12) == Exact(1));
    CHECK(pow(Exact::root_of_unity(4), 3) == Exact(1));
    CHECK_FALSE(Exact::root_of_unity(4).is_gaussian());

    const Exact a = Exact::gaussian(make_rational(1, 2), make_rational(-3, 4));
    CHECK(a.is_gaussian());
    CHECK(a.gaussian_re() == make_rational(1, 2));
    CHECK(a.gaussian_im() == make_rational(-3, 4));
    CHECK(a * a.inverse() == Exact(1));
    CHECK(std::abs(a.to_complex() - Complex(0.5, -0.75)) < 1e-15);
    CHECK(a.conj() == Exact::gaussian(make_rational(1, 2), make_rational(3, 4)));

    const Exact z = Exact::root_of_unity(1) + q(2, 3);
    auto back = Exact::recognize(z.embed(1), z.embed(5));
    REQUIRE(back);
    CHECK(*back == z);
    CHECK((z - z).is_zero());
}

TEST_CASE("exact linear algebra")
{
    Matrix<Exact> m{{q(1), q(2), q(3)}, {q(2), q(4), q(6)}, {q(1), q(0), q(1)}};
    CHECK(rank(m) == 2);
    auto ns = nullspace(m, 3);
    REQUIRE(ns.size() == 1);
    auto r = foliage::apply(m, ns[0]);
    for (const auto& v : r) CHECK(v.is_zero());
    CHECK(determinant(m).is_zero());

    Matrix<Exact> a{{q(2), q(1)}, {q(1), q(1)}};
    auto inv = inverse(a);
    REQUIRE(inv);
    CHECK(multiply(a, *inv) == identity_matrix<Exact>(2));
    CHECK(determinant(a) == q(1));
    auto x = solve(a, std::vector<Exact>{q(3), q(2)});
    REQUIRE(x);
    CHECK((*x)[0] == q(1));
    CHECK((*x)[1] == q(1));
}

TEST_CASE("univariate polynomials")
{
    using P = UniPoly<Exact>;
    const P t = P::variable();
    P p = (t - P(q(1))) * (t + P(q(2))) * (t - P(q(1, 2)));
    CHECK(p.degree() == 3);
    auto roots = field_roots(p);
    CHECK(roots.size() == 3);
    for (const auto& r : roots) CHECK(p(r).is_zero());
    P g = poly_gcd(p, (t - P(q(1))) * (t - P(q(5))));
    CHECK(g.degree() == 1);
    CHECK(g(q(1)).is_zero());
}
