#include "foliage/darboux.hpp"

#include "foliage/polynomial.hpp"

#include <algorithm>
#include <deque>

namespace foliage {

namespace {

// Planar homogeneous polynomials of degree s are stored densely in the
// basis x^s, x^{s-1} y, ..., y^s, so the slot of x^a y^b is b.
using Hom = std::vector<Exact>;
using Poly = UniPoly<Exact>;
using PHom = std::vector<Poly>;  // coefficients polynomial in the branch parameter c

Hom hom_part(const ExactSeries& p, int s)
{
    Hom h(s + 1);
    if (s > p.order()) return h;
    for (int b = 0; b <= s; ++b) h[b] = p.coeff({s - b, b});
    return h;
}

ExactSeries to_series(const std::vector<Hom>& parts, int order)
{
    ExactSeries r(2, order);
    for (std::size_t s = 0; s < parts.size(); ++s)
        for (std::size_t b = 0; b < parts[s].size(); ++b)
            if (!parts[s][b].is_zero())
                r.add_term({static_cast<int>(s - b), static_cast<int>(b)}, parts[s][b]);
    return r;
}

PHom lift(const Hom& h)
{
    PHom r;
    for (const auto& v : h) r.emplace_back(v);
    return r;
}

Hom eval(const PHom& p, const Exact& c)
{
    Hom r;
    for (const auto& v : p) r.push_back(v(c));
    return r;
}

PHom substitute(const PHom& p, const Exact& c)
{
    return lift(eval(p, c));
}

PHom pmul(const PHom& a, const PHom& b)
{
    PHom r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
    return r;
}

void add_into(PHom& acc, const PHom& p, const Exact& scale = Exact(1))
{
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!p[i].is_zero()) acc[i] += p[i] * Poly(scale);
}

bool all_zero(const PHom& p)
{
    return std::all_of(p.begin(), p.end(), [](const Poly& v) { return v.is_zero(); });
}

// Homogeneous degree-l part of a planar field.
struct HomField {
    int l = 0;
    Hom a, b;  // coefficients of d/dx and d/dy, degree l
};

// X_l(g) for g homogeneous of degree s; result has degree s + l - 1.
PHom apply_part(const HomField& X, const PHom& g)
{
    const int s = static_cast<int>(g.size()) - 1;
    const int out = s + X.l - 1;
    PHom r(out + 1);
    if (out < 0) return r;
    for (int j = 0; j <= s; ++j) {
        if (g[j].is_zero()) continue;
        const int ax = s - j;
        if (ax > 0)  // d/dx: ax x^{ax-1} y^j, slot j
            for (int k = 0; k <= X.l; ++k)
                if (!X.a[k].is_zero()) r[j + k] += g[j] * Poly(X.a[k] * Exact(ax));
        if (j > 0)  // d/dy: j x^ax y^{j-1}, slot j-1
            for (int k = 0; k <= X.l; ++k)
                if (!X.b[k].is_zero()) r[j - 1 + k] += g[j] * Poly(X.b[k] * Exact(j));
    }
    return r;
}

Hom apply_const(const HomField& X, const Hom& g)
{
    return eval(apply_part(X, lift(g)), Exact(0));
}

struct Branch {
    int kappa = 0;
    Exact mu;
    std::vector<PHom> g;  // g[s], s = 0..d
    std::vector<PHom> K;  // K[j], j = 0..m-1
    bool param = false;
    int level = 0;  // next level to solve
};

Branch substitute(const Branch& br, const Exact& c)
{
    Branch r = br;
    for (auto& p : r.g) p = substitute(p, c);
    for (auto& p : r.K) p = substitute(p, c);
    r.param = false;
    return r;
}

// Eigen-linear forms l with X_1(l) = lambda l, as coefficient pairs.
struct EigenForms {
    bool in_field = true;
    bool diagonalizable = false;
    std::vector<std::pair<Exact, Hom>> forms;
};

EigenForms eigen_forms(const Matrix<Exact>& A)
{
    EigenForms ef;
    const Exact tr = A[0][0] + A[1][1];
    const Exact det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    Poly charpoly(std::vector<Exact>{det, -tr, Exact(1)});
    auto roots = field_roots(charpoly);
    // Multiplicities: a double root shows up once.
    if (roots.empty() || (roots.size() == 1 && !(charpoly == Poly(std::vector<Exact>{roots[0] * roots[0], Exact(-2) * roots[0], Exact(1)})))) {
        ef.in_field = false;
        return ef;
    }
    for (const auto& lam : roots) {
        // Left eigenvectors: w^T A = lam w^T, i.e. (A^T - lam) w = 0.
        Matrix<Exact> m = {{A[0][0] - lam, A[1][0]}, {A[0][1], A[1][1] - lam}};
        for (const auto& w : nullspace(m, 2)) ef.forms.emplace_back(lam, Hom{w[0], w[1]});
    }
    ef.diagonalizable = ef.forms.size() == 2;
    return ef;
}

Hom hom_mul(const Hom& a, const Hom& b)
{
    Hom r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Hom hom_pow(const Hom& a, int k)
{
    Hom r{Exact(1)};
    for (int i = 0; i < k; ++i) r = hom_mul(r, a);
    return r;
}

// Products l1^i l2^{s-i} with their eigenvalues, i = s..0.
std::vector<std::pair<Exact, Hom>> eigen_products(const EigenForms& ef, int s)
{
    std::vector<std::pair<Exact, Hom>> out;
    if (!ef.diagonalizable) return out;
    const auto& [l1, f1] = ef.forms[0];
    const auto& [l2, f2] = ef.forms[1];
    for (int i = s; i >= 0; --i)
        out.emplace_back(l1 * Exact(i) + l2 * Exact(s - i), hom_mul(hom_pow(f1, i), hom_pow(f2, s - i)));
    return out;
}

Matrix<Exact> operator_matrix(const HomField& X1, int s, const Exact& mu)
{
    auto M = zero_matrix<Exact>(s + 1, s + 1);
    for (int j = 0; j <= s; ++j) {
        Hom e(s + 1);
        e[j] = Exact(1);
        Hom img = apply_const(X1, e);
        for (int i = 0; i <= s; ++i) M[i][j] = img[i] - (i == j ? mu : Exact(0));
    }
    return M;
}

void normalize_curve(ExactSeries& g)
{
    auto lead = leading_index(g);
    if (!lead) return;
    g *= g.coeff_at(*lead).inverse();
}

bool graded_lex_less(const ExactSeries& a, const ExactSeries& b)
{
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    const int d = std::max(a.order(), b.order());
    auto pa = a.with_order(d), pb = b.with_order(d);
    for (std::size_t i = pa.size(); i-- > 0;) {
        if (pa.coeff_at(i) == pb.coeff_at(i)) continue;
        // Compare the first differing coefficient through its coordinates.
        auto ca = pa.coeff_at(i).coords(), cb = pb.coeff_at(i).coords();
        return ca < cb;
    }
    return false;
}

} // namespace

CurveSearchReport invariant_curves(const ExactField& Xin, int d, const CurveSearchOptions& options)
{
    if (Xin.arity() != 2) throw std::invalid_argument("invariant curve search needs a planar field");
    if (d < 1) throw std::invalid_argument("degree bound must be at least 1");
    const ExactField X = Xin.polynomial();
    const int m = X.degree();
    if (m < 1) throw std::invalid_argument("field degree must be at least 1");
    for (const auto& c : X.components())
        if (!c.constant_term().is_zero()) throw std::invalid_argument("invariant curve search needs X(0) = 0");

    std::vector<HomField> parts(m + 1);
    for (int l = 0; l <= m; ++l) parts[l] = HomField{l, hom_part(X[0], l), hom_part(X[1], l)};
    const HomField& X1 = parts[1];

    CurveSearchReport rep;
    const auto ef = eigen_forms(X.linear_part());
    rep.linear_eigenvalues_in_field = ef.in_field;

    auto fresh = [&](int kappa, const Exact& mu, const Hom& seed) {
        Branch b;
        b.kappa = kappa;
        b.mu = mu;
        for (int s = 0; s <= d; ++s) b.g.emplace_back(s + 1);
        for (int j = 0; j < m; ++j) b.K.emplace_back(j + 1);
        b.g[kappa] = lift(seed);
        b.K[0] = PHom{Poly(mu)};
        b.level = kappa + 1;
        return b;
    };

    std::deque<Branch> work;
    work.push_back(fresh(0, Exact(0), Hom{Exact(1)}));
    for (int kappa = 1; kappa <= d; ++kappa) {
        if (ef.diagonalizable) {
            for (const auto& [mu, vec] : eigen_products(ef, kappa)) work.push_back(fresh(kappa, mu, vec));
        } else if (ef.in_field) {
            std::vector<Exact> mus;
            for (const auto& [lam, f] : ef.forms) {
                Exact mu = lam * Exact(kappa);
                if (std::find(mus.begin(), mus.end(), mu) == mus.end()) mus.push_back(mu);
            }
            for (const auto& mu : mus)
                for (const auto& v : nullspace(operator_matrix(X1, kappa, mu), kappa + 1)) work.push_back(fresh(kappa, mu, v));
        }
    }
    rep.seeds = work.size();
    rep.branches = work.size();

    std::vector<InvariantCurve> found;
    const int top = d + m - 1;
    while (!work.empty()) {
        Branch br = std::move(work.front());
        work.pop_front();
        bool dead = false;
        bool forked = false;
        for (int s = br.level; s <= top && !dead && !forked; ++s) {
            const int kappa = br.kappa;
            const int ng = s <= d ? s + 1 : 0;
            const int jk = s - kappa;
            const int nk = jk <= m - 1 ? jk + 1 : 0;
            const std::size_t cols = ng + nk;

            PHom rhs(s + 1);
            for (int l = 2; l <= m; ++l) {
                const int i = s - l + 1;
                if (i < kappa || i > std::min(d, s - 1)) continue;
                add_into(rhs, apply_part(parts[l], br.g[i]), Exact(-1));
            }
            for (int i = kappa + 1; i <= std::min(d, s - 1); ++i) {
                const int j = s - i;
                if (j < 1 || j > m - 1) continue;
                add_into(rhs, pmul(br.g[i], br.K[j]));
            }

            auto M = zero_matrix<Exact>(s + 1, cols);
            if (ng) {
                auto op = operator_matrix(X1, s, br.mu);
                for (int i = 0; i <= s; ++i)
                    for (int j = 0; j < ng; ++j) M[i][j] = op[i][j];
            }
            if (nk) {
                const Hom gk = eval(br.g[kappa], Exact(0));
                for (int f = 0; f < nk; ++f)
                    for (std::size_t k = 0; k < gk.size(); ++k) M[f + k][ng + f] -= gk[k];
            }

            // y = T rhs: pivot rows give the particular solution, the rest
            // are consistency conditions.
            RrefResult<Exact> rr;
            if (cols) rr = rref(M);
            const std::size_t rank = cols ? rr.pivots.size() : 0;
            PHom y(s + 1);
            for (int i = 0; i <= s; ++i) {
                if (!cols) {
                    y[i] = rhs[i];
                    continue;
                }
                for (int k = 0; k <= s; ++k)
                    if (!rr.transform[i][k].is_zero() && !rhs[k].is_zero()) y[i] += rhs[k] * Poly(rr.transform[i][k]);
            }
            std::vector<Poly> constraints;
            for (int i = static_cast<int>(rank); i <= s; ++i)
                if (!y[i].is_zero()) constraints.push_back(y[i]);

            auto assign = [&](Branch& b, const PHom& yy, const std::vector<Exact>* dir) {
                PHom sol(cols);
                for (std::size_t i = 0; i < rank; ++i) sol[rr.pivots[i]] = yy[i];
                if (dir) {
                    Poly c = Poly::variable();
                    for (std::size_t k = 0; k < cols; ++k)
                        if (!(*dir)[k].is_zero()) sol[k] += c * Poly((*dir)[k]);
                    b.param = true;
                }
                for (int j = 0; j < ng; ++j) b.g[s][j] = sol[j];
                for (int f = 0; f < nk; ++f) b.K[jk][f] = sol[ng + f];
                b.level = s + 1;
            };

            std::vector<Branch> resolved;
            if (!constraints.empty()) {
                if (!br.param) {
                    dead = true;
                    break;
                }
                Poly g = constraints[0];
                for (std::size_t i = 1; i < constraints.size(); ++i) g = poly_gcd(g, constraints[i]);
                if (g.degree() < 1) {
                    dead = true;
                    break;
                }
                for (const auto& root : field_roots(g)) {
                    if (root.is_zero()) continue;  // c = 0 is the branch without this direction
                    Branch b = substitute(br, root);
                    PHom yy = substitute(y, root);
                    assign(b, yy, nullptr);
                    resolved.push_back(std::move(b));
                }
                if (resolved.empty()) {
                    dead = true;
                    break;
                }
            } else {
                Branch b = br;
                assign(b, y, nullptr);
                resolved.push_back(std::move(b));
            }

            // Kernel directions: eigen-adapted where possible.
            std::vector<std::vector<Exact>> kernel;
            if (cols) kernel = nullspace_from_rref(rr, cols);
            std::vector<std::vector<Exact>> dirs;
            if (!kernel.empty() && ng) {
                const auto prods = eigen_products(ef, s);
                Matrix<Exact> gproj(ng, std::vector<Exact>(kernel.size()));
                for (int r = 0; r < ng; ++r)
                    for (std::size_t k = 0; k < kernel.size(); ++k) gproj[r][k] = kernel[k][r];
                for (const auto& [mu, p] : prods) {
                    auto alpha = solve(gproj, p);
                    if (!alpha) continue;
                    std::vector<Exact> v(cols);
                    for (std::size_t k = 0; k < kernel.size(); ++k)
                        for (std::size_t c = 0; c < cols; ++c) v[c] += (*alpha)[k] * kernel[k][c];
                    auto trial = dirs;
                    trial.push_back(v);
                    if (foliage::rank(trial) > dirs.size()) dirs.push_back(std::move(v));
                }
            }
            for (const auto& v : kernel) {
                auto trial = dirs;
                trial.push_back(v);
                if (foliage::rank(trial) > dirs.size()) dirs.push_back(v);
            }

            br = std::move(resolved.front());
            for (std::size_t i = 1; i < resolved.size(); ++i) {
                if (rep.branches >= options.branch_cap) {
                    rep.overflow = true;
                    break;
                }
                ++rep.branches;
                work.push_back(std::move(resolved[i]));
            }
            if (!dirs.empty()) {
                if (br.param) {
                    rep.pruned_kernels += dirs.size();
                } else {
                    // The current branch keeps the particular solution; each
                    // direction spawns a parametrized sibling at level s + 1.
                    for (const auto& v : dirs) {
                        if (rep.branches >= options.branch_cap) {
                            rep.overflow = true;
                            break;
                        }
                        Branch b = br;
                        PHom sol(cols);
                        Poly c = Poly::variable();
                        for (int j = 0; j < ng; ++j) b.g[s][j] += c * Poly(v[j]);
                        for (int f = 0; f < nk; ++f) b.K[jk][f] += c * Poly(v[ng + f]);
                        b.param = true;
                        ++rep.branches;
                        work.push_back(std::move(b));
                    }
                }
            }
            (void)forked;
        }
        if (dead) {
            ++rep.dead_branches;
            continue;
        }
        if (br.param) ++rep.families;
        const Exact c = br.param ? Exact(1) : Exact(0);
        std::vector<Hom> gp, kp;
        for (const auto& p : br.g) gp.push_back(eval(p, c));
        for (const auto& p : br.K) kp.push_back(eval(p, c));
        ExactSeries g = to_series(gp, d), K = to_series(kp, std::max(m - 1, 0));
        if (g.degree() < 1) continue;
        normalize_curve(g);
        auto check = cofactor(X, g);
        if (!check || as_polynomial(*check) != as_polynomial(K) || as_polynomial(K).degree() > m - 1) continue;
        InvariantCurve curve{as_polynomial(g), as_polynomial(K), *g.lowest_degree()};
        bool dup = false;
        for (const auto& f : found)
            if (f.g == curve.g) dup = true;
        if (!dup) found.push_back(std::move(curve));
    }

    std::sort(found.begin(), found.end(), [](const InvariantCurve& a, const InvariantCurve& b) {
        if (a.kappa != b.kappa) return a.kappa < b.kappa;
        return graded_lex_less(a.g, b.g);
    });
    // Products of lower-degree solutions carry no new information.
    for (const auto& c : found) {
        bool reducible = false;
        for (const auto& o : found)
            if (o.g.degree() < c.g.degree() && polynomial_divide(c.g, o.g)) reducible = true;
        if (!reducible) rep.curves.push_back(c);
    }
    return rep;
}

std::string to_string(IntegralKind kind)
{
    return kind == IntegralKind::rational ? "rational" : "darboux";
}

std::optional<DarbouxIntegral> darboux_assemble(const ExactField& X, const std::vector<InvariantCurve>& curves)
{
    if (curves.empty()) throw std::invalid_argument("darboux_assemble needs at least one curve");
    for (std::size_t i = 0; i < curves.size(); ++i) {
        auto K = cofactor(X, curves[i].g);
        if (!K || as_polynomial(*K) != as_polynomial(curves[i].K))
            throw std::invalid_argument("curve " + std::to_string(i + 1) + " is not invariant for the given field");
    }
    int top = 0;
    for (const auto& c : curves) top = std::max(top, std::max(c.K.degree(), 0));
    const std::size_t rows = monomials_below(top + 1, 2);
    Matrix<Exact> M(rows, std::vector<Exact>(curves.size()));
    for (std::size_t j = 0; j < curves.size(); ++j) {
        auto K = curves[j].K.with_order(top);
        for (std::size_t i = 0; i < rows; ++i) M[i][j] = K.coeff_at(i);
    }
    auto ns = nullspace(M, curves.size());
    if (ns.empty()) return std::nullopt;

    DarbouxIntegral out;
    out.curves = curves;
    out.nullity = ns.size();
    std::vector<Exact> c = ns.front();
    std::size_t first = 0;
    while (c[first].is_zero()) ++first;
    const Exact inv = c[first].inverse();
    for (auto& v : c) v *= inv;
    bool rational = std::all_of(c.begin(), c.end(), [](const Exact& v) { return v.is_rational(); });
    if (rational) {
        Integer den = 1;
        for (const auto& v : c) den = lcm(den, v.rational_part().get_den());
        std::vector<Integer> ints;
        Integer g = 0;
        for (const auto& v : c) {
            Rational r = v.rational_part() * Rational(den);
            ints.push_back(r.get_num());
            g = gcd(g, r.get_num());
        }
        for (auto& k : ints) k /= g;
        out.integer_exponents = ints;
        out.kind = IntegralKind::rational;
        c.clear();
        for (const auto& k : ints) c.emplace_back(Rational(k));
    }
    out.exponents = c;

    ExactSeries sum(2, top);
    for (std::size_t j = 0; j < curves.size(); ++j) sum.add_scaled(curves[j].K.with_order(top), c[j]);
    out.verified = sum.is_zero();
    if (rational) {
        ExactSeries P = ExactSeries::constant(2, 0, Exact(1)), Q = P;
        for (std::size_t j = 0; j < curves.size(); ++j) {
            const Integer& k = (*out.integer_exponents)[j];
            ExactSeries& target = sgn(k) > 0 ? P : Q;
            for (Integer e = abs(k); e > 0; --e) target = poly_mul(target, curves[j].g);
        }
        out.verified = out.verified && rational_integral_residual(X, P, Q).is_zero();
        out.numerator = P;
        out.denominator = Q;
    }
    return out;
}

} // namespace foliage
