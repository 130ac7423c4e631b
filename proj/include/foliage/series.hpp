#pragma once

#include "foliage/monomial.hpp"
#include "foliage/scalar.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace foliage {

// Multivariate power series known up to degree `order`. Coefficients are held
// densely in graded-lex order; zero slots are not terms.
template <class S>
class TruncatedSeries {
public:
    using scalar_type = S;
    using Traits = ScalarTraits<S>;

    TruncatedSeries() : TruncatedSeries(0, 0) {}
    TruncatedSeries(int arity, int order)
        : arity_(arity), order_(order), coeffs_(monomials_below(order + 1, arity))
    {
        if (arity < 0 || order < 0) throw std::invalid_argument("negative arity or truncation order");
    }
    TruncatedSeries(int arity, int order, std::vector<S> dense)
        : arity_(arity), order_(order), coeffs_(std::move(dense))
    {
        if (coeffs_.size() != monomials_below(order + 1, arity))
            throw std::invalid_argument("dense coefficient vector has wrong length");
    }

    static TruncatedSeries constant(int arity, int order, const S& c)
    {
        TruncatedSeries r(arity, order);
        r.coeffs_[0] = c;
        return r;
    }
    static TruncatedSeries variable(int arity, int order, int i)
    {
        MultiIndex e(arity, 0);
        e.at(i) = 1;
        return monomial(arity, order, e, Traits::from_int(1));
    }
    static TruncatedSeries monomial(int arity, int order, const MultiIndex& e, const S& c)
    {
        TruncatedSeries r(arity, order);
        r.add_term(e, c);
        return r;
    }
    static TruncatedSeries from_terms(int arity, int order, const std::vector<std::pair<MultiIndex, S>>& terms)
    {
        TruncatedSeries r(arity, order);
        for (const auto& [e, c] : terms) r.add_term(e, c);
        return r;
    }

    int arity() const { return arity_; }
    int order() const { return order_; }
    std::size_t size() const { return coeffs_.size(); }
    const std::vector<S>& dense() const { return coeffs_; }
    const S& coeff_at(std::size_t idx) const { return coeffs_[idx]; }

    S coeff(const MultiIndex& e) const
    {
        check_index(e);
        if (foliage::degree(e) > order_) return S{};
        return coeffs_[monomial_rank(e)];
    }

    // Adds c*x^e; terms above the truncation order are discarded.
    void add_term(const MultiIndex& e, const S& c)
    {
        check_index(e);
        if (foliage::degree(e) > order_) return;
        coeffs_[monomial_rank(e)] += c;
    }

    std::vector<std::pair<MultiIndex, S>> terms() const
    {
        std::vector<std::pair<MultiIndex, S>> out;
        MonomialBasis basis(arity_, order_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!Traits::is_zero(coeffs_[i])) out.emplace_back(basis.exponents(i), coeffs_[i]);
        return out;
    }

    bool is_zero() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const S& c) { return Traits::is_zero(c); });
    }
    bool near_zero(double eps) const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [eps](const S& c) { return Traits::near_zero(c, eps); });
    }
    double max_abs() const
    {
        double m = 0;
        for (const auto& c : coeffs_) m = std::max(m, Traits::magnitude(c));
        return m;
    }

    const S& constant_term() const { return coeffs_[0]; }

    // Lowest degree carrying a nonzero coefficient; nullopt for the zero series.
    std::optional<int> lowest_degree() const
    {
        for (int d = 0; d <= order_; ++d)
            for (std::size_t i = monomials_below(d, arity_); i < monomials_below(d + 1, arity_); ++i)
                if (!Traits::is_zero(coeffs_[i])) return d;
        return std::nullopt;
    }
    // Highest degree carrying a nonzero coefficient, -1 for zero.
    int degree() const
    {
        for (int d = order_; d >= 0; --d)
            for (std::size_t i = monomials_below(d, arity_); i < monomials_below(d + 1, arity_); ++i)
                if (!Traits::is_zero(coeffs_[i])) return d;
        return -1;
    }
    bool is_homogeneous() const
    {
        auto lo = lowest_degree();
        return !lo || *lo == degree();
    }

    // jet(k): drops every |I| > k; the result has truncation order k.
    TruncatedSeries jet(int k) const
    {
        if (k < 0 || k > order_) throw std::invalid_argument("jet degree outside [0, order]");
        return with_order(k);
    }
    // Re-declares the truncation order. Lowering discards terms; raising treats
    // the stored coefficients as an exact polynomial.
    TruncatedSeries with_order(int k) const
    {
        if (k < 0) throw std::invalid_argument("negative truncation order");
        std::vector<S> c(monomials_below(k + 1, arity_));
        std::copy_n(coeffs_.begin(), std::min(c.size(), coeffs_.size()), c.begin());
        return TruncatedSeries(arity_, k, std::move(c));
    }
    TruncatedSeries homogeneous_part(int d) const
    {
        TruncatedSeries r(arity_, order_);
        if (d < 0 || d > order_) return r;
        for (std::size_t i = monomials_below(d, arity_); i < monomials_below(d + 1, arity_); ++i) r.coeffs_[i] = coeffs_[i];
        return r;
    }

    // Partial derivative in x_i (0-based). The result is known to order N-1.
    TruncatedSeries derive(int i) const
    {
        if (i < 0 || i >= arity_) throw std::out_of_range("derivative index out of range");
        const int new_order = std::max(order_ - 1, 0);
        TruncatedSeries r(arity_, new_order);
        MonomialBasis basis(arity_, order_);
        MultiIndex e;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (Traits::is_zero(coeffs_[k])) continue;
            e = basis.exponents(k);
            if (e[i] == 0) continue;
            S c = coeffs_[k] * Traits::from_int(e[i]);
            --e[i];
            if (foliage::degree(e) <= new_order) r.coeffs_[monomial_rank(e)] += c;
        }
        return r;
    }

    TruncatedSeries operator-() const
    {
        TruncatedSeries r(*this);
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) { return accumulate(o, false); }
    TruncatedSeries& operator-=(const TruncatedSeries& o) { return accumulate(o, true); }
    // this += c * o, on the common truncation.
    TruncatedSeries& add_scaled(const TruncatedSeries& o, const S& c)
    {
        if (arity_ != o.arity_) throw std::invalid_argument("arity mismatch in series sum");
        if (o.order_ < order_) *this = with_order(o.order_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!Traits::is_zero(o.coeffs_[i])) coeffs_[i] += c * o.coeffs_[i];
        return *this;
    }
    TruncatedSeries& operator*=(const S& s)
    {
        for (auto& c : coeffs_)
            if (!Traits::is_zero(c)) c *= s;
        return *this;
    }

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(const S& s, TruncatedSeries a) { return a *= s; }
    friend TruncatedSeries operator*(TruncatedSeries a, const S& s) { return a *= s; }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        return multiply(a, b, std::min(a.order_, b.order_));
    }

    // Product computed up to degree `order`; the caller vouches that both
    // factors are known far enough for that degree.
    static TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b, int order)
    {
        if (a.arity_ != b.arity_) throw std::invalid_argument("arity mismatch in series product");
        TruncatedSeries r(a.arity_, order);
        const auto ta = a.nonzero_indices();
        const auto tb = b.nonzero_indices();
        if (ta.empty() || tb.empty()) return r;
        MonomialBasis basis_a(a.arity_, a.order_), basis_b(b.arity_, b.order_);
        MultiIndex e(a.arity_);
        for (std::size_t i : ta) {
            const int da = basis_a.degree(i);
            if (da > order) break;
            const auto& ea = basis_a.exponents(i);
            for (std::size_t j : tb) {
                const int db = basis_b.degree(j);
                if (da + db > order) break;
                const auto& eb = basis_b.exponents(j);
                for (int k = 0; k < a.arity_; ++k) e[k] = ea[k] + eb[k];
                r.coeffs_[monomial_rank(e)] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return r;
    }

    // Equal arity, order and coefficients.
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        return a.arity_ == b.arity_ && a.order_ == b.order_ && a.coeffs_ == b.coeffs_;
    }

    // Float evaluation of the truncated polynomial.
    Complex evaluate(const std::vector<Complex>& x) const
    {
        if (static_cast<int>(x.size()) != arity_) throw std::invalid_argument("evaluation point has wrong arity");
        std::vector<std::vector<Complex>> powers(arity_, std::vector<Complex>(order_ + 1, Complex(1.0)));
        for (int v = 0; v < arity_; ++v)
            for (int k = 1; k <= order_; ++k) powers[v][k] = powers[v][k - 1] * x[v];
        Complex acc = 0;
        MonomialBasis basis(arity_, order_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (Traits::is_zero(coeffs_[i])) continue;
            Complex m = Traits::to_complex(coeffs_[i]);
            const auto& e = basis.exponents(i);
            for (int v = 0; v < arity_; ++v) m *= powers[v][e[v]];
            acc += m;
        }
        return acc;
    }

    // Evaluation in the coefficient ring (no precision loss on the exact backend).
    S evaluate_exact(const std::vector<S>& x) const
    {
        if (static_cast<int>(x.size()) != arity_) throw std::invalid_argument("evaluation point has wrong arity");
        S acc{};
        MonomialBasis basis(arity_, order_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (Traits::is_zero(coeffs_[i])) continue;
            S m = coeffs_[i];
            const auto& e = basis.exponents(i);
            for (int v = 0; v < arity_; ++v)
                for (int k = 0; k < e[v]; ++k) m *= x[v];
            acc += m;
        }
        return acc;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms()) {
            if (!first) os << " + ";
            first = false;
            os << "(" << Traits::str(c) << ")";
            for (int v = 0; v < arity_; ++v)
                if (e[v] > 0) os << "*x" << (v + 1) << (e[v] > 1 ? "^" + std::to_string(e[v]) : "");
        }
        if (first) os << "0";
        os << " + O(" << order_ + 1 << ")";
        return os.str();
    }

    std::vector<std::size_t> nonzero_indices() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!Traits::is_zero(coeffs_[i])) out.push_back(i);
        return out;
    }

private:
    void check_index(const MultiIndex& e) const
    {
        if (static_cast<int>(e.size()) != arity_) throw std::invalid_argument("multi-index arity mismatch");
        for (int q : e)
            if (q < 0) throw std::invalid_argument("negative exponent in multi-index");
    }

    TruncatedSeries& accumulate(const TruncatedSeries& o, bool subtract)
    {
        if (arity_ != o.arity_) throw std::invalid_argument("arity mismatch in series sum");
        if (o.order_ < order_) *this = with_order(o.order_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (Traits::is_zero(o.coeffs_[i])) continue;
            if (subtract)
                coeffs_[i] -= o.coeffs_[i];
            else
                coeffs_[i] += o.coeffs_[i];
        }
        return *this;
    }

    int arity_;
    int order_;
    std::vector<S> coeffs_;
};

using ExactSeries = TruncatedSeries<Exact>;
using FloatSeries = TruncatedSeries<Float>;

template <class S>
bool equal_up_to(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b, int order)
{
    return a.with_order(order) == b.with_order(order);
}

// Equality on the common truncation, with tolerance for the float backend.
template <class S>
bool same_series(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b, double eps = kDefaultEpsilon)
{
    if (a.arity() != b.arity()) return false;
    const int n = std::min(a.order(), b.order());
    auto d = a.with_order(n) - b.with_order(n);
    return ScalarTraits<S>::exact ? d.is_zero() : d.near_zero(eps);
}

// Zero test honoring the backend: exact equality or |c| <= eps.
template <class S>
bool vanishes(const TruncatedSeries<S>& a, double eps = kDefaultEpsilon)
{
    return ScalarTraits<S>::exact ? a.is_zero() : a.near_zero(eps);
}

// The stored terms read as a polynomial: order lowered to the degree.
template <class S>
TruncatedSeries<S> as_polynomial(const TruncatedSeries<S>& a)
{
    return a.with_order(std::max(a.degree(), 0));
}

// Full polynomial product, no truncation.
template <class S>
TruncatedSeries<S> poly_mul(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b)
{
    const int d = std::max(a.degree(), 0) + std::max(b.degree(), 0);
    return TruncatedSeries<S>::multiply(a.with_order(d), b.with_order(d), d);
}

template <class S>
TruncatedSeries<S> scale(const S& s, const TruncatedSeries<S>& a) { return s * a; }

// (f_1(G), ..., f_k(G)) for G = (G_1, ..., G_n). Each G_i must have zero
// constant term; results are truncated at the minimum of all orders involved.
// Powers G^Q are shared across the outer series.
template <class S>
std::vector<TruncatedSeries<S>> compose_tuple(const std::vector<TruncatedSeries<S>>& fs,
                                              const std::vector<TruncatedSeries<S>>& G)
{
    if (fs.empty()) return {};
    const int n = fs[0].arity();
    if (static_cast<int>(G.size()) != n) throw std::invalid_argument("compose: tuple length differs from arity of f");
    if (G.empty()) return fs;
    const int m = G[0].arity();
    int order = G[0].order();
    for (const auto& f : fs) {
        if (f.arity() != n) throw std::invalid_argument("compose: outer series have different arities");
        order = std::min(order, f.order());
    }
    for (const auto& g : G) {
        if (g.arity() != m) throw std::invalid_argument("compose: inner components have different arities");
        if (!ScalarTraits<S>::is_zero(g.constant_term()))
            throw std::invalid_argument("compose: inner component has nonzero constant term");
        order = std::min(order, g.order());
    }
    MonomialBasis basis(n, order);
    std::vector<std::optional<TruncatedSeries<S>>> powers(basis.size());
    powers[0] = TruncatedSeries<S>::constant(m, order, ScalarTraits<S>::from_int(1));
    // G^Q is built from G^(Q - e_k) with k the first nonzero slot of Q.
    auto power = [&](auto&& self, std::size_t idx) -> const TruncatedSeries<S>& {
        if (powers[idx]) return *powers[idx];
        MultiIndex q = basis.exponents(idx);
        int k = 0;
        while (q[k] == 0) ++k;
        --q[k];
        const auto& prev = self(self, monomial_rank(q));
        powers[idx] = TruncatedSeries<S>::multiply(prev, G[k], order);
        return *powers[idx];
    };
    std::vector<TruncatedSeries<S>> out;
    for (const auto& f : fs) {
        TruncatedSeries<S> result(m, order);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const S& c = f.coeff_at(i);
            if (ScalarTraits<S>::is_zero(c)) continue;
            result.add_scaled(power(power, i), c);
        }
        out.push_back(std::move(result));
    }
    return out;
}

template <class S>
TruncatedSeries<S> compose(const TruncatedSeries<S>& f, const std::vector<TruncatedSeries<S>>& G)
{
    return compose_tuple(std::vector<TruncatedSeries<S>>{f}, G).front();
}

// 1/u for a series with invertible constant term.
template <class S>
TruncatedSeries<S> reciprocal(const TruncatedSeries<S>& u)
{
    if (ScalarTraits<S>::is_zero(u.constant_term())) throw std::domain_error("series inverse needs a nonzero constant term");
    const S c0 = u.constant_term();
    const S inv0 = ScalarTraits<S>::from_int(1) / c0;
    // r_d = -inv0 * sum_{j>=1} u_j r_{d-j}, solved one homogeneous degree at a time.
    TruncatedSeries<S> r = TruncatedSeries<S>::constant(u.arity(), u.order(), inv0);
    TruncatedSeries<S> w = u - TruncatedSeries<S>::constant(u.arity(), u.order(), c0);
    for (int d = 1; d <= u.order(); ++d) {
        TruncatedSeries<S> prod = TruncatedSeries<S>::multiply(w, r, d);
        TruncatedSeries<S> part = prod.homogeneous_part(d).with_order(u.order());
        r -= inv0 * part;
    }
    return r;
}

template <class S>
TruncatedSeries<S> divide(const TruncatedSeries<S>& a, const TruncatedSeries<S>& u)
{
    return a * reciprocal(u);
}

template <class S>
using SeriesMatrix = std::vector<std::vector<TruncatedSeries<S>>>;

// Jacobian J[i][j] = d f_i / d x_j.
template <class S>
SeriesMatrix<S> jacobian(const std::vector<TruncatedSeries<S>>& f)
{
    SeriesMatrix<S> J;
    for (const auto& fi : f) {
        std::vector<TruncatedSeries<S>> row;
        for (int j = 0; j < fi.arity(); ++j) row.push_back(fi.derive(j));
        J.push_back(std::move(row));
    }
    return J;
}

template <class S>
TruncatedSeries<S> series_determinant(const SeriesMatrix<S>& M)
{
    const std::size_t n = M.size();
    if (n == 0) throw std::invalid_argument("determinant of an empty matrix");
    for (const auto& row : M)
        if (row.size() != n) throw std::invalid_argument("determinant of a non-square matrix");
    if (n == 1) return M[0][0];
    if (n == 2) return M[0][0] * M[1][1] - M[0][1] * M[1][0];
    TruncatedSeries<S> acc = M[0][0] - M[0][0];
    for (std::size_t j = 0; j < n; ++j) {
        if (M[0][j].is_zero()) continue;
        SeriesMatrix<S> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<TruncatedSeries<S>> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(M[i][k]);
            minor.push_back(std::move(row));
        }
        TruncatedSeries<S> term = M[0][j] * series_determinant(minor);
        if (j % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

template <class S>
struct WedgeResult {
    TruncatedSeries<S> determinant;
    bool generically_transverse = false;
    bool transverse_at_origin = false;
};

// df_1 ^ ... ^ df_n as the Jacobian determinant, known to order N-1.
template <class S>
WedgeResult<S> wedge_top(const std::vector<TruncatedSeries<S>>& f, double eps = kDefaultEpsilon)
{
    if (f.empty()) throw std::invalid_argument("wedge_top needs at least one series");
    if (static_cast<int>(f.size()) != f[0].arity()) throw std::invalid_argument("wedge_top: number of series differs from arity");
    WedgeResult<S> r{series_determinant(jacobian(f))};
    if constexpr (ScalarTraits<S>::exact) {
        r.generically_transverse = !r.determinant.is_zero();
        r.transverse_at_origin = !r.determinant.constant_term().is_zero();
    } else {
        r.generically_transverse = !r.determinant.near_zero(eps);
        r.transverse_at_origin = std::abs(r.determinant.constant_term()) > eps;
    }
    return r;
}

template <class S>
TruncatedSeries<Float> to_float(const TruncatedSeries<S>& a)
{
    std::vector<Float> c;
    c.reserve(a.size());
    for (const auto& v : a.dense()) c.push_back(ScalarTraits<S>::to_complex(v));
    return TruncatedSeries<Float>(a.arity(), a.order(), std::move(c));
}

} // namespace foliage
