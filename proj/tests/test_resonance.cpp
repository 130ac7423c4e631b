#include "support.hpp"

#include "foliage/resonance.hpp"

#include <doctest.h>

#include <set>

using namespace foliage;

namespace {

PolarRational rat(long a, long b = 1)
{
    return PolarRational::from_rational(make_rational(a, b));
}

// Brute force over all Q with 1 <= |Q| <= bound.
std::vector<MultiIndex> brute_force(const EigenTuple& lam, int bound)
{
    std::vector<MultiIndex> out;
    const int n = static_cast<int>(lam.size());
    for (int d = 1; d <= bound; ++d)
        for (const auto& e : monomials_of_degree_list(d, n)) {
            PolarRational p;
            for (int i = 0; i < n; ++i) p = p * pow(lam[i], e[i]);
            if (p.is_one()) out.push_back(e);
        }
    return out;
}

IntVector ints(std::initializer_list<long> v)
{
    IntVector out;
    for (long x : v) out.emplace_back(x);
    return out;
}

} // namespace

TEST_CASE("polar rationals")
{
    auto m = rat(-2);
    CHECK(m.magnitude() == 2);
    CHECK(m.turn() == make_rational(1, 2));
    CHECK((m * m.inverse()).is_one());
    CHECK(pow(PolarRational::root_of_unity(1, 3), 3).is_one());
    CHECK(PolarRational(1, make_rational(5, 4)).turn() == make_rational(1, 4));
    auto e = PolarRational::root_of_unity(1, 4).to_exact();
    REQUIRE(e);
    CHECK(*e == Exact::imag_unit());
    CHECK_FALSE(PolarRational::root_of_unity(1, 5).to_exact());
}

TEST_CASE("resonant monomials")
{
    auto all = resonant_monomials({rat(1), rat(1)}, 2);
    CHECK(all.resonant == std::vector<MultiIndex>{{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});

    auto none = resonant_monomials({rat(2), rat(3)}, 10);
    CHECK(none.resonant.empty());
    CHECK(none.lattice_basis.empty());

    EigenTuple lam{rat(2), rat(1, 2)};
    auto rep = resonant_monomials(lam, 6);
    CHECK(rep.resonant == brute_force(lam, 6));
    CHECK(rep.resonant == std::vector<MultiIndex>{{1, 1}, {2, 2}, {3, 3}});
    REQUIRE(rep.lattice_basis.size() == 1);
    CHECK(rep.lattice_basis[0] == ints({1, 1}));

    SUBCASE("agreement with brute force and floating evaluation")
    {
        std::mt19937_64 rng(9);
        std::uniform_int_distribution<long> turn(0, 11), mag(1, 4);
        for (int trial = 0; trial < 25; ++trial) {
            EigenTuple l;
            for (int i = 0; i < 1 + trial % 3; ++i) {
                const long a = mag(rng), b = mag(rng);
                l.emplace_back(make_rational(a, b), make_rational(turn(rng), 12));
            }
            auto r = resonant_monomials(l, 8);
            CHECK(r.resonant == brute_force(l, 8));
            for (const auto& e : r.resonant) {
                Complex v = 1.0;
                for (std::size_t i = 0; i < l.size(); ++i) v *= std::pow(l[i].to_complex(), e[i]);
                CHECK(std::abs(v - 1.0) <= 1e-9);
            }
            for (const auto& row : r.lattice_basis) {
                std::vector<long> qv;
                for (const auto& x : row) qv.push_back(x.get_si());
                CHECK(power_product(l, qv).is_one());
            }
        }
    }
}

TEST_CASE("eigen ratio")
{
    CHECK(eigen_ratio({ints({1, 1})}) == ints({1, -1}));

    auto k = eigen_ratio({ints({1, 0, 1, 0}), ints({0, 1, 1, 2}), ints({0, 0, 1, 1})});
    // Independent check: N k = 0, and k = +-(-1, 1, 1, -1).
    CHECK((k == ints({-1, 1, 1, -1}) || k == ints({1, -1, -1, 1})));

    CHECK(eigen_ratio({ints({2, 0, -1}), ints({0, 2, -1})}) == ints({1, 1, 2}));

    CHECK_THROWS_AS(eigen_ratio({ints({1, 2, 3}), ints({2, 4, 6})}), std::invalid_argument);
}

TEST_CASE("condition star")
{
    auto w = star_condition({rat(-1), rat(-2), rat(1)});
    REQUIRE(w);
    CHECK(w->index == 2);
    // Direction v must separate strictly: Re(l_i / v) > 0 > Re(l_j / v).
    const Complex v = std::polar(1.0, 2 * M_PI * to_double(w->turn));
    CHECK((Complex(1.0) / v).real() > 0);
    CHECK((Complex(-1.0) / v).real() < 0);

    CHECK_FALSE(star_condition({rat(1), rat(2), rat(3)}));
    CHECK_FALSE(star_condition({rat(-1), rat(1), rat(1), rat(-1)}));

    auto g = star_condition({rat(1), rat(2), rat(-1)});
    REQUIRE(g);
    CHECK(g->index == 2);
}

TEST_CASE("invariant series for linear maps")
{
    EigenTuple lam{PolarRational::root_of_unity(1, 3), PolarRational::root_of_unity(2, 3), rat(1)};
    auto basis = invariant_series_diagonal(lam, 6);
    std::vector<MultiIndex> support;
    for (const auto& f : basis)
        for (const auto& [e, c] : f.terms()) support.push_back(e);
    CHECK(support == resonant_monomials(lam, 6).resonant);

    for (long m = 1; m <= 4; ++m) {
        auto jb = invariant_series_jordan(PolarRational::root_of_unity(1, m), 12);
        std::set<MultiIndex> got;
        for (const auto& f : jb) {
            auto t = f.terms();
            REQUIRE(t.size() == 1);
            got.insert(t[0].first);
        }
        std::set<MultiIndex> expect;
        for (long j = 1; m * j <= 12; ++j) expect.insert({0, static_cast<int>(m * j)});
        CHECK(got == expect);
    }

    // A non-root-of-unity Jordan eigenvalue has no invariants.
    CHECK(invariant_series_jordan(rat(2), 6).empty());
}
