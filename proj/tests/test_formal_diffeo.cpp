#include "support.hpp"

#include <doctest.h>

using namespace foliage;
using support::diag;
using support::diffeo;
using support::poly;
using support::q;
using support::var;

namespace {

// phi o L o phi^{-1}
ExactDiffeo conjugated(const ExactDiffeo& L, const ExactDiffeo& phi)
{
    return compose(phi, compose(L, invert(phi)));
}

ExactDiffeo one_dim(std::initializer_list<support::Term> terms, int N)
{
    return diffeo({poly(1, N, terms)});
}

} // namespace

TEST_CASE("diffeomorphism invariants are enforced")
{
    CHECK_THROWS_AS(diffeo({poly(1, 3, {{{0}, q(1)}, {{1}, q(1)}})}), std::invalid_argument);
    CHECK_THROWS_AS(diffeo({poly(1, 3, {{{2}, q(1)}})}), std::invalid_argument);
    CHECK_THROWS_AS(diffeo({var(2, 3, 0), var(2, 3, 0)}), std::invalid_argument);
    auto G = diffeo({var(2, 3, 0) + var(2, 3, 1), var(2, 3, 1)});
    CHECK(G.linear_part() == Matrix<Exact>{{q(1), q(1)}, {q(0), q(1)}});
}

TEST_CASE("group operations")
{
    CHECK(invert(one_dim({{{1}, q(2)}}, 4)) == one_dim({{{1}, q(1, 2)}}, 4));

    auto G = one_dim({{{1}, q(1)}, {{2}, q(1)}}, 4);
    auto Ginv = invert(G);
    CHECK(Ginv == one_dim({{{1}, q(1)}, {{2}, q(-1)}, {{3}, q(2)}, {{4}, q(-5)}}, 4));
    CHECK(compose(G, Ginv).is_identity());
    CHECK(compose(Ginv, G).is_identity());

    auto minus = one_dim({{{1}, q(-1)}}, 4);
    CHECK(conjugate(minus, ExactDiffeo::identity(1, 4)) == minus);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        auto A = support::random_tangent_to_identity(rng, 2, 5, 3);
        auto B = support::random_tangent_to_identity(rng, 2, 5, 3);
        auto C = support::random_tangent_to_identity(rng, 2, 5, 3);
        CHECK(compose(A, compose(B, C)) == compose(compose(A, B), C));
        CHECK(invert(compose(A, B)) == compose(invert(B), invert(A)));
    }
}

TEST_CASE("element order")
{
    const Exact i = Exact::imag_unit();
    CHECK(element_order(one_dim({{{1}, i}}, 6), 10) == 4);
    CHECK_FALSE(element_order(one_dim({{{1}, q(1)}, {{2}, q(1)}}, 6), 50));

    const int N = 8;
    auto phi = one_dim({{{1}, q(1)}, {{2}, q(1)}}, N);
    auto G = conjugated(one_dim({{{1}, q(-1)}}, N), phi);
    // Oracle: square by explicit composition, and G itself is not linear.
    CHECK(compose(G, G).is_identity());
    CHECK_FALSE(G.is_identity());
    CHECK(element_order(G, 10) == 2);
    CHECK(element_order(conjugate(G, phi), 10) == 2);
    CHECK_THROWS_AS(element_order(G, 0), std::invalid_argument);
}

TEST_CASE("average linearizer")
{
    const int N = 8;
    auto id = ExactDiffeo::identity(1, N);
    CHECK(average_linearizer<Exact>({id}) == id);

    auto L = one_dim({{{1}, q(-1)}}, N);
    CHECK(average_linearizer<Exact>({L, id}) == id);

    auto phi = one_dim({{{1}, q(1)}, {{2}, q(1)}}, N);
    auto G = conjugated(L, phi);
    GroupPresentation<Exact> group{{G}, std::nullopt};
    auto elements = group_elements(group);
    CHECK(elements.size() == 2);
    auto h = average_linearizer(elements);
    CHECK(h.linear_part() == identity_matrix<Exact>(1));
    CHECK(conjugate(G, h) == L);

    SUBCASE("two-dimensional cyclic group with diagonalizer")
    {
        auto R = ExactDiffeo::linear({{q(0), q(-1)}, {q(1), q(0)}}, 6);
        auto psi = diffeo({var(2, 6, 0) + var(2, 6, 1) * var(2, 6, 1), var(2, 6, 1) + var(2, 6, 0) * var(2, 6, 0)});
        auto G2 = conjugated(R, psi);
        auto el = group_elements(GroupPresentation<Exact>{{G2}, std::nullopt});
        CHECK(el.size() == 4);
        auto P = root_of_unity_diagonalizer(G2.linear_part());
        REQUIRE(P);
        auto h2 = average_linearizer(el, P);
        auto c = conjugate(G2, h2);
        CHECK(c.is_diagonal_linear());
    }

    SUBCASE("non-closed element lists are rejected")
    {
        auto i = one_dim({{{1}, Exact::imag_unit()}}, 4);
        GroupPresentation<Exact> bad{{i}, std::vector<ExactDiffeo>{i, ExactDiffeo::identity(1, 4)}};
        CHECK_THROWS_AS(group_elements(bad), GroupClosureError);
    }
}

TEST_CASE("invariance check")
{
    const int N = 4;
    auto x1 = var(2, N, 0), x2 = var(2, N, 1);
    auto G = diag({q(2), q(1, 2)}, N);
    CHECK(invariance_check(x1 * x2, G).is_zero());

    auto minus = diag({q(-1)}, N);
    auto x = var(1, N, 0);
    CHECK(invariance_check(x * x, minus).is_zero());
    CHECK(invariance_check(x * x * x, minus) == poly(1, N, {{{3}, q(-2)}}));

    const Exact z3 = Exact::root_of_unity(4);
    auto f = x1 * x1 * x1 + x2 * x2 * x2;
    CHECK(invariance_check(f, diag({z3, z3}, N)).is_zero());

    SUBCASE("invariance group is closed under inverse and square")
    {
        auto g = diag({z3, z3}, N);
        CHECK(is_invariant(f, invert(g)));
        CHECK(is_invariant(f, compose(g, g)));
    }
}

TEST_CASE("invariant hypersurface family")
{
    const int N = 8;
    const Exact i = Exact::imag_unit();
    auto G = diag({i, q(-1)}, N);
    auto id = ExactDiffeo::identity(2, N);
    auto x1 = var(2, N, 0), x2 = var(2, N, 1);
    auto f = invariant_hypersurface_family(G, id, 4, {q(1), q(1)});
    CHECK(f == x1 * x1 * x1 * x1 + x2 * x2 * x2 * x2);

    auto lin = invariant_hypersurface_family(id, id, 1, {q(3), q(-2)});
    CHECK(lin == x1 * q(3) - x2 * q(2));

    auto phi = diffeo({x1 + x2 * x2, x2});
    auto Gc = conjugated(G, phi);
    auto h = average_linearizer(group_elements(GroupPresentation<Exact>{{Gc}, std::nullopt}));
    auto fc = invariant_hypersurface_family(Gc, h, 4, {q(1), q(1)});
    CHECK(invariance_check(fc, Gc).is_zero());

    CHECK_THROWS_AS(invariant_hypersurface_family(G, id, 2, {q(1), q(1)}), std::invalid_argument);
}
