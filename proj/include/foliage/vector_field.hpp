#pragma once

#include "foliage/formal_diffeo.hpp"
#include "foliage/linalg.hpp"
#include "foliage/resonance.hpp"
#include "foliage/series.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace foliage {

// X = sum_i a_i d/dx_i with truncated-series coefficients.
template <class S>
class PolyVectorField {
public:
    using Series = TruncatedSeries<S>;

    explicit PolyVectorField(std::vector<Series> components) : a_(std::move(components))
    {
        if (a_.empty()) throw std::invalid_argument("vector field needs at least one component");
        const int n = static_cast<int>(a_.size());
        for (const auto& c : a_)
            if (c.arity() != n) throw std::invalid_argument("vector field component arity differs from component count");
    }

    static PolyVectorField radial(int n, int order)
    {
        std::vector<Series> c;
        for (int i = 0; i < n; ++i) c.push_back(Series::variable(n, order, i));
        return PolyVectorField(std::move(c));
    }
    static PolyVectorField zero(int n, int order) { return PolyVectorField(std::vector<Series>(n, Series(n, order))); }

    // Diagonal linear field sum lambda_i x_i d/dx_i.
    static PolyVectorField diagonal(const std::vector<S>& lambda, int order)
    {
        const int n = static_cast<int>(lambda.size());
        std::vector<Series> c;
        for (int i = 0; i < n; ++i) c.push_back(Series::variable(n, order, i) * lambda[i]);
        return PolyVectorField(std::move(c));
    }

    int arity() const { return static_cast<int>(a_.size()); }
    int order() const
    {
        int o = a_[0].order();
        for (const auto& c : a_) o = std::min(o, c.order());
        return o;
    }
    const std::vector<Series>& components() const { return a_; }
    const Series& operator[](std::size_t i) const { return a_[i]; }

    // Order of vanishing at 0: min over components of the lowest degree.
    std::optional<int> nu() const
    {
        std::optional<int> v;
        for (const auto& c : a_)
            if (auto lo = c.lowest_degree()) v = v ? std::min(*v, *lo) : *lo;
        return v;
    }
    bool singular_at_origin() const
    {
        auto v = nu();
        return !v || *v >= 1;
    }
    bool is_zero() const
    {
        for (const auto& c : a_)
            if (!c.is_zero()) return false;
        return true;
    }
    int degree() const
    {
        int d = -1;
        for (const auto& c : a_) d = std::max(d, c.degree());
        return d;
    }
    // All components homogeneous of one common degree (zero components allowed).
    bool is_homogeneous() const
    {
        auto v = nu();
        if (!v) return true;
        for (const auto& c : a_) {
            if (c.is_zero()) continue;
            if (*c.lowest_degree() != *v || c.degree() != *v) return false;
        }
        return true;
    }

    Matrix<S> linear_part() const
    {
        const int n = arity();
        auto m = zero_matrix<S>(n, n);
        for (int i = 0; i < n; ++i)
            if (a_[i].order() >= 1)
                for (int j = 0; j < n; ++j) m[i][j] = a_[i].coeff_at(1 + j);
        return m;
    }

    PolyVectorField homogeneous_part(int d) const
    {
        std::vector<Series> c;
        for (const auto& s : a_) c.push_back(s.homogeneous_part(d));
        return PolyVectorField(std::move(c));
    }
    PolyVectorField with_order(int k) const
    {
        std::vector<Series> c;
        for (const auto& s : a_) c.push_back(s.with_order(k));
        return PolyVectorField(std::move(c));
    }
    PolyVectorField jet(int k) const { return with_order(k); }
    // Stored terms as polynomials of the field's degree.
    PolyVectorField polynomial() const { return with_order(std::max(degree(), 0)); }

    friend PolyVectorField operator+(const PolyVectorField& x, const PolyVectorField& y)
    {
        check_same(x, y);
        std::vector<Series> c;
        for (int i = 0; i < x.arity(); ++i) c.push_back(x.a_[i] + y.a_[i]);
        return PolyVectorField(std::move(c));
    }
    friend PolyVectorField operator-(const PolyVectorField& x, const PolyVectorField& y)
    {
        check_same(x, y);
        std::vector<Series> c;
        for (int i = 0; i < x.arity(); ++i) c.push_back(x.a_[i] - y.a_[i]);
        return PolyVectorField(std::move(c));
    }
    friend bool operator==(const PolyVectorField& x, const PolyVectorField& y) { return x.a_ == y.a_; }

    bool vanishes(double eps = kDefaultEpsilon) const
    {
        for (const auto& c : a_)
            if (!foliage::vanishes(c, eps)) return false;
        return true;
    }

    std::string str() const
    {
        std::string s;
        for (int i = 0; i < arity(); ++i) {
            if (i) s += "; ";
            s += "d/dx" + std::to_string(i + 1) + ": " + a_[i].str();
        }
        return s;
    }

private:
    static void check_same(const PolyVectorField& x, const PolyVectorField& y)
    {
        if (x.arity() != y.arity()) throw std::invalid_argument("arity mismatch between vector fields");
    }

    std::vector<Series> a_;
};

using ExactField = PolyVectorField<Exact>;
using FloatField = PolyVectorField<Float>;

// X(f) = sum a_i df/dx_i. The result carries its certified order
// min(N_X, N_f, N_f - 1 + nu).
template <class S>
TruncatedSeries<S> lie_derivative(const PolyVectorField<S>& X, const TruncatedSeries<S>& f)
{
    if (X.arity() != f.arity()) throw std::invalid_argument("arity mismatch in Lie derivative");
    int order = std::min(X.order(), f.order());
    if (auto nu = X.nu()) order = std::min(order, f.order() - 1 + *nu);
    order = std::max(order, 0);
    TruncatedSeries<S> r(f.arity(), order);
    for (int i = 0; i < X.arity(); ++i) {
        if (X[i].is_zero()) continue;
        r += TruncatedSeries<S>::multiply(X[i], f.derive(i), order);
    }
    return r;
}

// X(g) with X and g read as polynomials; no truncation.
template <class S>
TruncatedSeries<S> poly_lie_derivative(const PolyVectorField<S>& X, const TruncatedSeries<S>& g)
{
    if (X.arity() != g.arity()) throw std::invalid_argument("arity mismatch in Lie derivative");
    const int d = std::max(X.degree(), 0) + std::max(g.degree(), 0);
    const int order = std::max(d - 1, 0);
    TruncatedSeries<S> gp = g.with_order(order + 1);
    TruncatedSeries<S> r(g.arity(), order);
    for (int i = 0; i < X.arity(); ++i) {
        if (X[i].is_zero()) continue;
        r += TruncatedSeries<S>::multiply(X[i].with_order(order), gp.derive(i), order);
    }
    return r;
}

// Index of the graded-lex leading term: top degree, then lex-largest.
template <class S>
std::optional<std::size_t> leading_index(const TruncatedSeries<S>& p, double eps = kDefaultEpsilon)
{
    const double tol = ScalarTraits<S>::exact ? 0.0 : eps;
    for (int d = p.order(); d >= 0; --d)
        for (std::size_t i = monomials_below(d, p.arity()); i < monomials_below(d + 1, p.arity()); ++i)
            if (!ScalarTraits<S>::near_zero(p.coeff_at(i), tol)) return i;
    return std::nullopt;
}

// Exact quotient f / g of polynomials by graded-lex reduction against the
// single divisor g; nullopt when the remainder is nonzero.
template <class S>
std::optional<TruncatedSeries<S>> polynomial_divide(const TruncatedSeries<S>& f, const TruncatedSeries<S>& g,
                                                    double eps = kDefaultEpsilon)
{
    if (f.arity() != g.arity()) throw std::invalid_argument("arity mismatch in polynomial division");
    const int n = f.arity();
    auto lg = leading_index(g, eps);
    if (!lg) throw std::invalid_argument("division by the zero polynomial");
    const int dg = g.degree(), df = std::max(f.degree(), 0);
    if (df < dg) {
        if (vanishes(f, eps)) return TruncatedSeries<S>(n, 0);
        return std::nullopt;
    }
    MonomialBasis basis(n, df);
    const MultiIndex eg = basis.exponents(*lg);
    const S lead_inv = ScalarTraits<S>::from_int(1) / g.coeff_at(*lg);
    const auto gterms = as_polynomial(g).terms();
    TruncatedSeries<S> r = f.with_order(df), q(n, df - dg);
    while (auto lr = leading_index(r, eps)) {
        MultiIndex er = basis.exponents(*lr);
        MultiIndex shift(n);
        for (int k = 0; k < n; ++k) {
            shift[k] = er[k] - eg[k];
            if (shift[k] < 0) return std::nullopt;
        }
        const S c = r.coeff_at(*lr) * lead_inv;
        q.add_term(shift, c);
        for (const auto& [e, v] : gterms) {
            MultiIndex t(n);
            for (int k = 0; k < n; ++k) t[k] = e[k] + shift[k];
            r.add_term(t, -(c * v));
        }
        // Float cancellation of the leading term is forced to be exact.
        if constexpr (!ScalarTraits<S>::exact) r.add_term(er, -r.coeff(er));
    }
    return q;
}

// K with X(g) = g K, or nullopt. For homogeneous X and g the cofactor is
// homogeneous of degree nu - 1.
template <class S>
std::optional<TruncatedSeries<S>> cofactor(const PolyVectorField<S>& X, const TruncatedSeries<S>& g,
                                           double eps = kDefaultEpsilon)
{
    if (vanishes(g, eps)) throw std::invalid_argument("cofactor of the zero polynomial");
    auto k = polynomial_divide(poly_lie_derivative(X, g), as_polynomial(g), eps);
    if (!k) return std::nullopt;
    auto K = as_polynomial(*k);
    if (X.is_homogeneous() && as_polynomial(g).is_homogeneous() && !K.is_zero()) {
        const int nu = *X.nu();
        if (!K.is_homogeneous() || K.degree() != nu - 1)
            throw std::logic_error("cofactor of homogeneous data is not homogeneous of degree nu - 1");
    }
    return K;
}

// Q X(P) - P X(Q): vanishes iff P/Q is a first integral off {Q = 0}.
template <class S>
TruncatedSeries<S> rational_integral_residual(const PolyVectorField<S>& X, const TruncatedSeries<S>& P,
                                              const TruncatedSeries<S>& Q)
{
    auto xp = poly_lie_derivative(X, P), xq = poly_lie_derivative(X, Q);
    auto a = poly_mul(as_polynomial(Q), xp), b = poly_mul(as_polynomial(P), xq);
    const int d = std::max(a.order(), b.order());
    return as_polynomial(a.with_order(d) - b.with_order(d));
}

template <class S>
struct FirstIntegralVerdict {
    std::vector<TruncatedSeries<S>> residuals;  // X(f_i), each at its certified order
    int certified_degree = 0;
    bool residuals_vanish = false;
    bool wedge_nonzero = false;
    std::optional<int> nonzero_minor;  // column dropped from the Jacobian, 0-based
    bool is_first_integral() const { return residuals_vanish && wedge_nonzero; }
};

// F = (f_1..f_{n-1}): residuals X(f_i) and the rank test on
// df_1 ^ ... ^ df_{n-1} through the (n-1)x(n-1) Jacobian minors.
template <class S>
FirstIntegralVerdict<S> first_integral_check(const PolyVectorField<S>& X, const std::vector<TruncatedSeries<S>>& F,
                                             double eps = kDefaultEpsilon)
{
    const int n = X.arity();
    if (n < 2) throw std::invalid_argument("first integrals need arity at least 2");
    if (static_cast<int>(F.size()) != n - 1) throw std::invalid_argument("candidate must have n - 1 components");
    for (const auto& f : F)
        if (f.arity() != n) throw std::invalid_argument("arity mismatch between field and candidate");
    FirstIntegralVerdict<S> v;
    v.residuals_vanish = true;
    v.certified_degree = std::numeric_limits<int>::max();
    for (const auto& f : F) {
        v.residuals.push_back(lie_derivative(X, f));
        v.certified_degree = std::min(v.certified_degree, v.residuals.back().order());
        if (!vanishes(v.residuals.back(), eps)) v.residuals_vanish = false;
    }
    auto J = jacobian(F);
    for (int drop = n - 1; drop >= 0 && !v.nonzero_minor; --drop) {
        SeriesMatrix<S> minor;
        for (const auto& row : J) {
            std::vector<TruncatedSeries<S>> r;
            for (int j = 0; j < n; ++j)
                if (j != drop) r.push_back(row[j]);
            minor.push_back(std::move(r));
        }
        if (!vanishes(series_determinant(minor), eps)) v.nonzero_minor = drop;
    }
    v.wedge_nonzero = v.nonzero_minor.has_value();
    return v;
}

// X = (dH)^{-1} H, solved as X = A^{-1}(H - R X) with dH = A + R,
// one degree per pass. The linear part of X is the identity.
template <class S>
PolyVectorField<S> radial_field_from_map(const FormalDiffeo<S>& H, double eps = kDefaultEpsilon)
{
    using Series = TruncatedSeries<S>;
    const int n = H.arity(), N = H.order();
    auto J = jacobian(H.components());
    auto A = H.linear_part();
    auto Ainv = inverse(A, eps);
    if (!Ainv) throw std::invalid_argument("linear part is not invertible");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J[i][j].add_term(MultiIndex(n, 0), -A[i][j]);
    std::vector<Series> X(n, Series(n, N));
    for (int pass = 1; pass <= N; ++pass) {
        std::vector<Series> rhs;
        for (int i = 0; i < n; ++i) {
            Series r = H[i];
            for (int j = 0; j < n; ++j)
                if (!X[j].is_zero()) r -= Series::multiply(J[i][j], X[j], N);
            rhs.push_back(std::move(r));
        }
        for (int i = 0; i < n; ++i) {
            Series acc(n, N);
            for (int j = 0; j < n; ++j)
                if (!ScalarTraits<S>::is_zero((*Ainv)[i][j])) acc.add_scaled(rhs[j], (*Ainv)[i][j]);
            X[i] = std::move(acc);
        }
    }
    PolyVectorField<S> out(std::move(X));
    auto L = out.linear_part();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S expect = ScalarTraits<S>::from_int(i == j ? 1 : 0);
            if (!ScalarTraits<S>::near_zero(L[i][j] - expect, ScalarTraits<S>::exact ? 0.0 : eps))
                throw std::logic_error("radial field does not start with the radial term");
        }
    return out;
}

// G_* X - X, where (G_* X)(z) = dG(G^{-1} z) X(G^{-1} z).
template <class S>
PolyVectorField<S> pullback_invariance(const FormalDiffeo<S>& G, const PolyVectorField<S>& X)
{
    using Series = TruncatedSeries<S>;
    if (G.arity() != X.arity()) throw std::invalid_argument("arity mismatch in pullback");
    const int n = X.arity();
    auto ginv = invert(G.with_order(std::min(G.order(), std::max(X.order(), 1))));
    auto Y = compose_tuple(X.components(), ginv.components());
    auto J = jacobian(G.components());
    std::vector<Series> Jc;
    for (const auto& row : J) {
        auto c = compose_tuple(row, ginv.components());
        Jc.insert(Jc.end(), c.begin(), c.end());
    }
    int order = Y.empty() ? 0 : Y[0].order();
    if (auto nu = X.nu()) order = std::min(order, G.order() - 1 + *nu);
    order = std::max(order, 0);
    std::vector<Series> res;
    for (int i = 0; i < n; ++i) {
        Series acc(n, order);
        for (int j = 0; j < n; ++j) acc += Series::multiply(Jc[i * n + j], Y[j], order);
        acc -= X[i].with_order(std::min(order, X[i].order()));
        res.push_back(acc.with_order(order));
    }
    return PolyVectorField<S>(std::move(res));
}

// Basis of the polynomial fields X (zero constant term, degree <= bound)
// with X(f_j) = 0 through each f_j's truncation order.
template <class S>
std::vector<PolyVectorField<S>> infinitesimal_symmetries(const std::vector<TruncatedSeries<S>>& fs, int degree_bound,
                                                         double eps = kDefaultEpsilon)
{
    using Series = TruncatedSeries<S>;
    if (fs.empty()) throw std::invalid_argument("need at least one function");
    if (degree_bound < 1) throw std::invalid_argument("degree bound must be at least 1");
    const int n = fs[0].arity();
    for (const auto& f : fs)
        if (f.arity() != n) throw std::invalid_argument("arity mismatch among functions");
    MonomialBasis xb(n, degree_bound);
    const std::size_t per = xb.size() - 1;  // monomials of degree 1..bound
    const std::size_t cols = per * n;
    Matrix<S> M;
    for (const auto& f : fs) {
        const int Nf = f.order();
        const std::size_t row0 = M.size();
        const std::size_t rows = monomials_below(Nf + 1, n) - 1;
        M.resize(row0 + rows, std::vector<S>(cols));
        for (int i = 0; i < n; ++i) {
            auto terms = f.derive(i).terms();
            for (std::size_t q = 1; q < xb.size(); ++q) {
                const auto& eq = xb.exponents(q);
                const int dq = xb.degree(q);
                for (const auto& [e, c] : terms) {
                    if (foliage::degree(e) + dq > Nf) continue;
                    MultiIndex t(n);
                    for (int k = 0; k < n; ++k) t[k] = e[k] + eq[k];
                    M[row0 + monomial_rank(t) - 1][i * per + (q - 1)] += c;
                }
            }
        }
    }
    std::vector<PolyVectorField<S>> basis;
    for (const auto& v : nullspace(M, cols, eps)) {
        std::vector<Series> comps(n, Series(n, degree_bound));
        for (int i = 0; i < n; ++i)
            for (std::size_t q = 1; q < xb.size(); ++q)
                if (!ScalarTraits<S>::is_zero(v[i * per + (q - 1)])) comps[i].add_term(xb.exponents(q), v[i * per + (q - 1)]);
        basis.emplace_back(std::move(comps));
    }
    if (static_cast<int>(fs.size()) == n && !basis.empty()) {
        // det(J) X = adj(J) J X = 0 forces X = 0 below N - lowdeg(det J).
        auto w = wedge_top(fs, eps);
        if (auto lo = w.determinant.lowest_degree()) {
            int minN = fs[0].order();
            for (const auto& f : fs) minN = std::min(minN, f.order());
            if (degree_bound <= minN - *lo) throw std::logic_error("nonzero symmetry for a generically transverse tuple");
        }
    }
    return basis;
}

struct GenericFormReport {
    bool is_generic = false;
    std::vector<std::string> failures;
    bool singular = false;
    bool linear_part_diagonal = false;
    bool linear_part_nonsingular = false;
    bool hyperplanes_invariant = false;
    std::vector<Exact> lambda;
    std::vector<std::optional<PolarRational>> lambda_polar;
    std::vector<std::pair<int, ExactField>> homogeneous_parts;
    std::vector<MultiIndex> lowest_indices;
    std::optional<IntVector> integer_ratios;
    std::optional<bool> ratios_consistent;  // N Lambda^t = 0 and Lambda proportional to k
    std::optional<StarWitness> star;
    bool star_evaluated = false;
};

GenericFormReport generic_form_analysis(const ExactField& X,
                                        const std::optional<std::vector<ExactSeries>>& candidate = std::nullopt);

} // namespace foliage
