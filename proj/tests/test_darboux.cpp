#include "support.hpp"

#include "foliage/darboux.hpp"

#include <doctest.h>

using namespace foliage;
using support::field;
using support::q;
using support::var;

namespace {

ExactField diagonal(long p, long qq, int N = 1)
{
    return field({var(2, N, 0) * q(p), var(2, N, 1) * q(qq)});
}

ExactSeries P(const ExactSeries& s)
{
    return as_polynomial(s);
}

const InvariantCurve* find(const CurveSearchReport& r, const ExactSeries& g)
{
    for (const auto& c : r.curves)
        if (P(c.g) == P(g)) return &c;
    return nullptr;
}

} // namespace

TEST_CASE("invariant curves of diagonal fields")
{
    auto r = invariant_curves(diagonal(1, 2), 1);
    REQUIRE(r.curves.size() == 2);
    auto x = var(2, 1, 0), y = var(2, 1, 1);
    auto cx = find(r, x), cy = find(r, y);
    REQUIRE(cx);
    REQUIRE(cy);
    CHECK(P(cx->K) == P(ExactSeries::constant(2, 0, q(1))));
    CHECK(P(cy->K) == P(ExactSeries::constant(2, 0, q(2))));
    for (const auto& c : r.curves) {
        // Independent path: the cofactor operation reproduces K.
        auto K = cofactor(diagonal(1, 2), c.g);
        REQUIRE(K);
        CHECK(P(*K) == P(c.K));
    }
}

TEST_CASE("curves through points off the origin")
{
    const int N = 3;
    auto x = var(2, N, 0), y = var(2, N, 1);
    auto one = ExactSeries::constant(2, N, q(1));
    auto r = one - x * x - y * y;
    auto X = field({-y + x * r, x + y * r});
    auto rep = invariant_curves(X, 2);
    auto circle = find(rep, x * x + y * y - one);
    REQUIRE(circle);
    CHECK(P(circle->K) == P((x * x + y * y) * q(-2)));
    for (const auto& c : rep.curves) CHECK(std::max(c.K.degree(), 0) <= 2);
}

TEST_CASE("non-diagonal cofactor")
{
    const int N = 2;
    auto x = var(2, N, 0), y = var(2, N, 1);
    auto X = field({x, y + x * y});
    auto rep = invariant_curves(X, 1);
    auto cx = find(rep, x), cy = find(rep, y);
    REQUIRE(cx);
    REQUIRE(cy);
    CHECK(P(cx->K) == P(ExactSeries::constant(2, N, q(1))));
    CHECK(P(cy->K) == P(ExactSeries::constant(2, N, q(1)) + x));
}

TEST_CASE("search preconditions")
{
    CHECK_THROWS_AS(invariant_curves(diagonal(1, 2), 0), std::invalid_argument);
    CHECK_THROWS_AS(invariant_curves(field({var(3, 1, 0), var(3, 1, 1), var(3, 1, 2)}), 1), std::invalid_argument);
}

TEST_CASE("Darboux assembly")
{
    auto X = diagonal(1, 2);
    auto r = invariant_curves(X, 1);
    auto I = darboux_assemble(X, r.curves);
    REQUIRE(I);
    CHECK(I->kind == IntegralKind::rational);
    CHECK(I->verified);
    REQUIRE(I->integer_exponents);
    // Exponents (2, -1) up to sign for the curve order (x, y).
    const auto& k = *I->integer_exponents;
    REQUIRE(k.size() == 2);
    const bool x_first = P(I->curves[0].g) == P(var(2, 1, 0));
    const Integer ex = x_first ? k[0] : k[1], ey = x_first ? k[1] : k[0];
    CHECK(ex * 1 + ey * 2 == 0);
    CHECK(abs(ex) == 2);

    SUBCASE("a single nonzero cofactor spans nothing")
    {
        std::vector<InvariantCurve> one{r.curves[0]};
        CHECK_FALSE(darboux_assemble(X, one));
    }

    SUBCASE("general coprime exponents")
    {
        for (auto [p, qq] : {std::pair{2L, 3L}, std::pair{3L, 5L}, std::pair{5L, 2L}}) {
            auto Y = diagonal(p, qq);
            auto rr = invariant_curves(Y, 1);
            REQUIRE(rr.curves.size() == 2);
            auto J = darboux_assemble(Y, rr.curves);
            REQUIRE(J);
            CHECK(J->kind == IntegralKind::rational);
            Exact s;
            for (std::size_t i = 0; i < 2; ++i) s += J->exponents[i] * J->curves[i].K.constant_term();
            CHECK(s.is_zero());
            REQUIRE(J->numerator);
            REQUIRE(J->denominator);
            CHECK(rational_integral_residual(Y, *J->numerator, *J->denominator).is_zero());
        }
    }

    SUBCASE("rescaled curves give the same exponents")
    {
        auto scaled = r.curves;
        scaled[0].g = scaled[0].g * q(7);
        auto J = darboux_assemble(X, scaled);
        REQUIRE(J);
        CHECK(J->exponents == I->exponents);
    }

    SUBCASE("curves of a different field are rejected")
    {
        auto other = invariant_curves(field({var(2, 1, 0), var(2, 1, 0) + var(2, 1, 1)}), 1);
        std::vector<InvariantCurve> mixed = r.curves;
        mixed.push_back(InvariantCurve{var(2, 1, 0) + var(2, 1, 1), ExactSeries::constant(2, 0, q(5)), 1});
        CHECK_THROWS_AS(darboux_assemble(X, mixed), std::invalid_argument);
        (void)other;
    }
}
