#include "foliage/blowup.hpp"

#include "foliage/polynomial.hpp"

#include <array>
#include <map>
#include <random>

namespace foliage {

namespace {

std::array<int, 2> others(int k)
{
    std::array<int, 2> o{};
    int c = 0;
    for (int j = 0; j < 3; ++j)
        if (j != k) o[c++] = j;
    return o;
}

void check_chart(int chart)
{
    if (chart < 1 || chart > 3) throw std::invalid_argument("chart must be 1, 2 or 3");
}

void check_arity3(const ExactField& X)
{
    if (X.arity() != 3) throw std::invalid_argument("blow-up is implemented for fields on C^3");
}

// p(x) with x_k = 1, as a polynomial in the remaining coordinates.
ExactSeries restrict_to_chart(const ExactSeries& p, int k, int order)
{
    ExactSeries r(2, order);
    const auto o = others(k);
    for (const auto& [e, c] : p.terms()) r.add_term({e[o[0]], e[o[1]]}, c);
    return r;
}

// p(E_k(z)): x_k -> z_k, x_j -> z_k z_j.
ExactSeries substitute_chart_map(const ExactSeries& p, int k, int order)
{
    ExactSeries r(3, order);
    for (const auto& [e, c] : p.terms()) {
        MultiIndex t = e;
        t[k] = degree(e);
        r.add_term(t, c);
    }
    return r;
}

ExactSeries divide_by_variable(const ExactSeries& p, int k, int power)
{
    ExactSeries r(p.arity(), p.order());
    for (const auto& [e, c] : p.terms()) {
        if (e[k] < power) throw std::logic_error("polynomial is not divisible by the divisor coordinate");
        MultiIndex t = e;
        t[k] -= power;
        r.add_term(t, c);
    }
    return r;
}

int field_nu(const ExactField& X)
{
    auto nu = X.nu();
    if (!nu) throw std::invalid_argument("the zero field has no blow-up");
    return *nu;
}

ExactField chart_formula(const ExactField& X, int k, int order)
{
    const auto o = others(k);
    std::vector<ExactSeries> comps;
    ExactSeries ak = restrict_to_chart(X[k], k, order);
    for (int v = 0; v < 2; ++v) {
        ExactSeries w = ExactSeries::variable(2, order, v);
        comps.push_back(restrict_to_chart(X[o[v]], k, order) - ExactSeries::multiply(w, ak, order));
    }
    return ExactField(std::move(comps)).polynomial();
}

UniPoly<Exact> restrict_to_line(const ExactSeries& p, const std::array<long, 3>& base, const std::array<long, 3>& dir)
{
    UniPoly<Exact> acc;
    for (const auto& [e, c] : p.terms()) {
        UniPoly<Exact> m(c);
        for (int i = 0; i < 3; ++i) {
            UniPoly<Exact> lin(std::vector<Exact>{Exact(base[i]), Exact(dir[i])});
            for (int q = 0; q < e[i]; ++q) m = m * lin;
        }
        acc += m;
    }
    return acc;
}

} // namespace

bool is_dicritical(const ExactField& X)
{
    const int n = X.arity();
    const int nu = field_nu(X);
    auto J = X.homogeneous_part(nu).polynomial();
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            auto xj = ExactSeries::variable(n, 1, j), xk = ExactSeries::variable(n, 1, k);
            if (poly_mul(xj, J[k]) != poly_mul(xk, J[j])) return false;
        }
    return true;
}

bool common_factor_suspected(const ExactField& X, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> dist(-9, 9);
    for (int line = 0; line < 2; ++line) {
        std::array<long, 3> base{}, dir{};
        for (int i = 0; i < 3; ++i) {
            base[i] = dist(rng);
            dir[i] = dist(rng);
        }
        if (dir == std::array<long, 3>{0, 0, 0}) dir[0] = 1;
        UniPoly<Exact> g;
        bool any = false;
        for (const auto& c : X.components()) {
            if (c.is_zero()) continue;
            auto r = restrict_to_line(as_polynomial(c), base, dir);
            g = any ? poly_gcd(g, r) : r;
            any = true;
        }
        if (!any || g.degree() < 1) return false;
    }
    return true;
}

ProjectivizeResult projectivize_homogeneous(const ExactField& X, int chart)
{
    check_chart(chart);
    check_arity3(X);
    if (!X.is_homogeneous()) throw std::invalid_argument("projectivization needs a homogeneous field");
    ProjectivizeResult r;
    const int nu = X.is_zero() ? 1 : *X.nu();
    r.chart_field.chart = chart;
    r.chart_field.nu = nu;
    r.chart_field.field = chart_formula(X.polynomial(), chart - 1, nu + 1);
    r.radial_multiple = r.chart_field.field.is_zero();
    r.common_factor_suspected = common_factor_suspected(X);
    return r;
}

BlowupResult blowup_divisor_restriction(const ExactField& X, int chart)
{
    check_chart(chart);
    check_arity3(X);
    const int k = chart - 1;
    BlowupResult r;
    r.nu = field_nu(X);
    if (r.nu < 1) throw std::invalid_argument("origin is not a singular point (nu = 0)");
    const auto P = X.polynomial();
    // x_j t_k has degree up to 2 deg(P) + 1.
    const int order = 2 * std::max(P.degree(), 1) + 1;
    std::vector<ExactSeries> t(3);
    t[k] = substitute_chart_map(P[k], k, order);
    for (int j : others(k)) {
        ExactSeries num = substitute_chart_map(P[j], k, order) -
                          ExactSeries::multiply(ExactSeries::variable(3, order, j), t[k], order);
        t[j] = divide_by_variable(num, k, 1);
    }
    r.total_transform = ExactField(std::move(t)).polynomial();
    r.dicritical = is_dicritical(P);
    if (!r.dicritical) {
        std::vector<ExactSeries> comps;
        const auto& tt = r.total_transform;
        const int ord = std::max(tt.order(), 1);
        for (int j : others(k)) {
            ExactSeries q = divide_by_variable(tt[j].with_order(ord), k, r.nu - 1);
            ExactSeries s(2, ord);
            for (const auto& [e, c] : q.terms())
                if (e[k] == 0) {
                    const auto o = others(k);
                    s.add_term({e[o[0]], e[o[1]]}, c);
                }
            comps.push_back(std::move(s));
        }
        r.chart_field = ChartField{chart, ExactField(std::move(comps)).polynomial(), r.nu};
    }
    return r;
}

ExactField pushforward_residual(const ExactField& X, const ExactField& total_transform, int chart)
{
    check_chart(chart);
    const int k = chart - 1;
    const auto P = X.polynomial();
    const int order = 2 * std::max(P.degree(), 1) + 2;
    auto T = total_transform.with_order(order);
    std::vector<ExactSeries> res(3);
    res[k] = T[k] - substitute_chart_map(P[k], k, order);
    for (int j : others(k)) {
        ExactSeries push = ExactSeries::multiply(ExactSeries::variable(3, order, j), T[k], order) +
                           ExactSeries::multiply(ExactSeries::variable(3, order, k), T[j], order);
        res[j] = push - substitute_chart_map(P[j], k, order);
    }
    return ExactField(std::move(res));
}

ChartField chart_transition(const ChartField& cf, int to_chart)
{
    check_chart(cf.chart);
    check_chart(to_chart);
    if (cf.field.arity() != 2) throw std::invalid_argument("chart field must be planar");
    if (to_chart == cf.chart) return cf;
    const int a = cf.chart - 1, b = to_chart - 1;
    const auto oa = others(a), ob = others(b);
    using Laurent = std::map<std::array<int, 3>, Exact>;
    // Old coordinates w_j = x_j / x_a as Laurent monomials in u_j = x_j / x_b.
    auto substitute = [&](const ExactSeries& p) {
        Laurent out;
        for (const auto& [e, c] : p.terms()) {
            std::array<int, 3> key{};
            for (int v = 0; v < 2; ++v) {
                const int j = oa[v];
                key[a] -= e[v];
                if (j != b) key[j] += e[v];
            }
            out[key] += c;
        }
        return out;
    };
    auto shift = [&](const Laurent& p, const std::array<int, 3>& by, const Exact& scale) {
        Laurent out;
        for (const auto& [e, c] : p) {
            std::array<int, 3> key = e;
            for (int i = 0; i < 3; ++i) key[i] += by[i];
            out[key] += c * scale;
        }
        return out;
    };
    auto add_into = [](Laurent& acc, const Laurent& p) {
        for (const auto& [e, c] : p) acc[e] += c;
    };
    Laurent Fb, Fother;
    int other_j = -1;
    for (int v = 0; v < 2; ++v) {
        if (oa[v] == b)
            Fb = substitute(cf.field[v]);
        else {
            Fother = substitute(cf.field[v]);
            other_j = oa[v];
        }
    }
    const int lift = cf.nu - 1;
    std::array<int, 3> ua{};
    ua[a] = 1 + lift;
    Laurent out_other = shift(Fother, ua, Exact(1));
    std::array<int, 3> uj_ua{};
    uj_ua[a] = 1 + lift;
    uj_ua[other_j] = 1;
    add_into(out_other, shift(Fb, uj_ua, Exact(-1)));
    std::array<int, 3> ua2{};
    ua2[a] = 2 + lift;
    Laurent out_a = shift(Fb, ua2, Exact(-1));

    int top = 0;
    for (const auto* p : {&out_other, &out_a})
        for (const auto& [e, c] : *p) {
            if (c.is_zero()) continue;
            for (int i = 0; i < 3; ++i)
                if (e[i] < 0) throw std::domain_error("chart transition does not clear denominators; inconsistent nu");
            top = std::max(top, e[0] + e[1] + e[2]);
        }
    std::vector<ExactSeries> comps(2, ExactSeries(2, top));
    for (int v = 0; v < 2; ++v) {
        const Laurent& src = ob[v] == a ? out_a : out_other;
        for (const auto& [e, c] : src)
            if (!c.is_zero()) comps[v].add_term({e[ob[0]], e[ob[1]]}, c);
    }
    return ChartField{to_chart, ExactField(std::move(comps)).polynomial(), cf.nu};
}

WeakIntegralVerdict weak_first_integral_check(const ExactField& X, const RationalFunctionCP2& f,
                                              const std::optional<std::pair<ExactSeries, ExactSeries>>& curve)
{
    check_arity3(X);
    const auto& P = f.numerator;
    const auto& Q = f.denominator;
    if (Q.is_zero()) throw std::invalid_argument("denominator is the zero polynomial");
    if (!as_polynomial(P).is_homogeneous() || !as_polynomial(Q).is_homogeneous())
        throw std::invalid_argument("numerator and denominator must be homogeneous");
    if (!P.is_zero() && P.degree() != Q.degree()) throw std::invalid_argument("numerator and denominator degrees differ");
    WeakIntegralVerdict v;
    v.residual = rational_integral_residual(X, P, Q);
    v.vanishes = v.residual.is_zero();
    if (curve) {
        const auto& [g, h] = *curve;
        auto K = cofactor(X, g);
        v.cofactor_matches = K && as_polynomial(*K) == as_polynomial(h);
        if (X.is_homogeneous() && !X.is_zero() && as_polynomial(g).is_homogeneous()) {
            const int nu = *X.nu();
            const int kappa = std::max(g.degree(), 0);
            const int order = nu + kappa + 1;
            auto Xt = chart_formula(X.polynomial(), 0, order);
            auto gt = restrict_to_chart(g, 0, order);
            auto at = restrict_to_chart(X[0], 0, order);
            auto ht = restrict_to_chart(h, 0, order);
            auto lhs = poly_lie_derivative(Xt, gt);
            auto rhs = poly_mul(gt, ht - at * Exact(kappa));
            const int d = std::max(lhs.order(), rhs.order());
            v.curve_identity = as_polynomial(lhs.with_order(d) - rhs.with_order(d)).is_zero();
        }
    }
    return v;
}

} // namespace foliage
