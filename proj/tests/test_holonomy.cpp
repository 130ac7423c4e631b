#include "support.hpp"

#include "foliage/holonomy.hpp"

#include <doctest.h>

#include <numbers>

using namespace foliage;

namespace {

Complex rot(double turn)
{
    return std::polar(1.0, 2 * std::numbers::pi * turn);
}

FloatSeries monomial3(int a, int b, int c, int N = 6)
{
    return FloatSeries::monomial(3, N, {a, b, c}, Float(1.0));
}

} // namespace

TEST_CASE("lifting the loop of a linear setup")
{
    auto s = HolonomySetup::linear(1.0 / 3, 0.5);
    const Point2 x{Complex(0.03, -0.01), Complex(-0.02, 0.04)};
    auto r = lift_loop(s, x);
    CHECK(std::abs(r.value[0] - rot(1.0 / 3) * x[0]) < 1e-8);
    CHECK(std::abs(r.value[1] + x[1]) < 1e-8);
    CHECK(r.stats.steps > 0);
    CHECK(r.stats.max_local_error <= 1.0);

    auto z = lift_loop(s, Point2{});
    CHECK(std::abs(z.value[0]) == 0.0);
    CHECK(std::abs(z.value[1]) == 0.0);

    auto id = lift_loop(HolonomySetup::linear(0, 0), x);
    CHECK(std::abs(id.value[0] - x[0]) < 1e-12);
    CHECK(std::abs(id.value[1] - x[1]) < 1e-12);
}

TEST_CASE("nonlinear corrections")
{
    auto s = HolonomySetup::linear(0.5, 0.25);
    s.a1 = monomial3(0, 1, 0) * Float(0.3);
    s.a2 = monomial3(1, 0, 1) * Float(-0.2);
    auto grid = section_grid(6, 0.05, 1);

    SUBCASE("double winding equals lifting twice")
    {
        for (const auto& x : grid) {
            auto once = lift_loop(s, lift_loop(s, x).value).value;
            auto twice = lift_loop(s, x, 1e-10, 2.0).value;
            CHECK(distance(once, twice) < 1e-9);
        }
    }

    SUBCASE("loop radius independence after connecting flows")
    {
        HolonomySetup half = s;
        half.loop_radius = 0.5;
        for (const auto& x : grid) {
            auto direct = lift_loop(s, x).value;
            auto down = transport(s, x, 1.0, 0.5);
            auto around = lift_loop(half, down).value;
            auto up = transport(s, around, 0.5, 1.0);
            CHECK(distance(direct, up) < 1e-9);
        }
    }
}

TEST_CASE("periodicity probe")
{
    auto grid = section_grid(8, 0.05, 0);
    CHECK(periodicity_probe(HolonomySetup::linear(1.0 / 3, 0.5), grid, 12, 1e-8) == 6);
    CHECK(periodicity_probe(HolonomySetup::linear(0, 0), grid, 12, 1e-8) == 1);
    auto off = HolonomySetup::linear(0.5 + 0.01 * std::numbers::sqrt2, 0.5);
    CHECK_FALSE(periodicity_probe(off, section_grid(3, 0.05, 0), 50, 1e-8));
}

TEST_CASE("invariance residual")
{
    auto grid = section_grid(8, 0.05, 0);
    auto s = HolonomySetup::linear(1.0 / 3, 1.0 / 3);
    CHECK(invariance_residual(monomial3(3, 0, 0), s, grid).max_residual <= 1e-8);
    CHECK(invariance_residual(FloatSeries::constant(3, 4, Float(2.0)), s, grid).max_residual == 0.0);

    auto lin = invariance_residual(monomial3(1, 0, 0), s, grid);
    double expect = 0;
    for (const auto& x : grid) expect = std::max(expect, std::abs(rot(1.0 / 3) - 1.0) * std::abs(x[0]));
    CHECK(lin.max_residual == doctest::Approx(expect).epsilon(1e-6));

    auto pure = invariance_residual(monomial3(0, 0, 2), s, grid);
    CHECK_FALSE(pure.pure_x3_terms_vanish);
}

TEST_CASE("field normalization and setup extraction")
{
    const int N = 4;
    // X = 2 x1 d1 + 3 x2 d2 - 6 x3 (1 + x1) d3 divided by -6 (1 + x1).
    auto x1 = FloatSeries::variable(3, N, 0), x2 = FloatSeries::variable(3, N, 1), x3 = FloatSeries::variable(3, N, 2);
    auto one = FloatSeries::constant(3, N, Float(1.0));
    FloatField X({x1 * Float(2.0), x2 * Float(3.0), x3 * (one + x1) * Float(-6.0)});
    auto Y = normalize_third_component(X);
    CHECK(same_series(Y[2], x3.with_order(Y[2].order()), 1e-12));
    auto s = setup_from_field(Y);
    CHECK(s.p == doctest::Approx(-1.0 / 3));
    CHECK(s.q == doctest::Approx(-0.5));
    CHECK(std::abs(s.a1.constant_term()) == 0.0);
    CHECK(std::abs(s.a1.coeff({1, 0, 0}) + 1.0) < 1e-12);

    CHECK_THROWS_AS(setup_from_field(X), std::invalid_argument);
}

TEST_CASE("restriction to the section and grids")
{
    auto f = monomial3(1, 0, 2, 4) + monomial3(0, 1, 0, 4);
    auto g = restrict_to_section(f, 2.0);
    CHECK(g.arity() == 2);
    CHECK(g.coeff({1, 0}) == Float(4.0));
    CHECK(g.coeff({0, 1}) == Float(1.0));

    auto grid = section_grid(25, 0.1, 3);
    CHECK(grid.size() == 25);
    for (const auto& x : grid) CHECK(norm(x) <= 0.1 + 1e-15);
    CHECK(section_grid(25, 0.1, 3) == grid);
}
