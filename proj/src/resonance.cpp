#include "foliage/resonance.hpp"

#include "foliage/linalg.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace foliage {

PolarRational::PolarRational(const Rational& magnitude, const Rational& turn) : magnitude_(magnitude), turn_(frac(turn))
{
    if (sgn(magnitude_) <= 0) throw std::invalid_argument("PolarRational magnitude must be positive");
}

PolarRational PolarRational::from_rational(const Rational& r)
{
    if (sgn(r) == 0) throw std::invalid_argument("zero has no polar form");
    return sgn(r) > 0 ? PolarRational(r, 0) : PolarRational(-r, make_rational(1, 2));
}

Complex PolarRational::to_complex() const
{
    return std::polar(magnitude_.get_d(), 2.0 * std::numbers::pi * turn_.get_d());
}

std::optional<Exact> PolarRational::to_exact() const
{
    Rational k = turn_ * 12;
    if (k.get_den() != 1) return std::nullopt;
    return Exact(magnitude_) * Exact::root_of_unity(k.get_num().get_si());
}

std::optional<PolarRational> PolarRational::from_exact(const Exact& v)
{
    if (v.is_zero()) return std::nullopt;
    for (long k = 0; k < 12; ++k) {
        Exact b = v * Exact::root_of_unity(-k);
        if (b.is_rational() && sgn(b.rational_part()) > 0) return PolarRational(b.rational_part(), make_rational(k, 12));
    }
    return std::nullopt;
}

PolarRational PolarRational::inverse() const
{
    return PolarRational(1 / magnitude_, -turn_);
}

PolarRational operator*(const PolarRational& a, const PolarRational& b)
{
    return PolarRational(a.magnitude_ * b.magnitude_, a.turn_ + b.turn_);
}

std::string PolarRational::str() const
{
    return to_string(magnitude_) + "*e^(2pi i*" + to_string(turn_) + ")";
}

PolarRational pow(const PolarRational& base, long e)
{
    const PolarRational b = e < 0 ? base.inverse() : base;
    const long n = e < 0 ? -e : e;
    Rational mag = b.magnitude(), r = 1;
    for (long k = n; k > 0; k >>= 1) {
        if (k & 1) r *= mag;
        if (k > 1) mag *= mag;
    }
    return PolarRational(r, b.turn() * n);
}

PolarRational power_product(const EigenTuple& lambda, const std::vector<long>& q)
{
    if (q.size() != lambda.size()) throw std::invalid_argument("multi-index length differs from eigenvalue count");
    PolarRational acc;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] != 0) acc = acc * pow(lambda[i], q[i]);
    return acc;
}

namespace {

// Prime factorization of a positive integer; trial division then a primality check.
std::map<Integer, long> factorize(Integer n)
{
    std::map<Integer, long> f;
    if (n < 1) throw std::invalid_argument("factorize expects a positive integer");
    for (Integer p = 2; p * p <= n; ++p) {
        if (p > 1000000) {
            if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) break;
            throw std::invalid_argument("magnitude too large to factor: " + n.get_str());
        }
        while (n % p == 0) {
            ++f[p];
            n /= p;
        }
    }
    if (n > 1) ++f[n];
    return f;
}

Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

} // namespace

std::vector<IntVector> integer_kernel(const std::vector<IntVector>& a, std::size_t cols)
{
    // Column operations on A, mirrored on U; zero columns of A*U span the kernel.
    std::vector<IntVector> acol(cols, IntVector(a.size()));
    std::vector<IntVector> ucol(cols, IntVector(cols));
    for (std::size_t j = 0; j < cols; ++j) {
        ucol[j][j] = 1;
        for (std::size_t i = 0; i < a.size(); ++i) acol[j][i] = a[i].at(j);
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size() && k < cols; ++i) {
        while (true) {
            std::size_t best = cols;
            for (std::size_t j = k; j < cols; ++j)
                if (acol[j][i] != 0 && (best == cols || abs(acol[j][i]) < abs(acol[best][i]))) best = j;
            if (best == cols) break;
            std::swap(acol[k], acol[best]);
            std::swap(ucol[k], ucol[best]);
            bool done = true;
            for (std::size_t j = k + 1; j < cols; ++j) {
                if (acol[j][i] == 0) continue;
                Integer q = acol[j][i] / acol[k][i];
                for (std::size_t r = 0; r < a.size(); ++r) acol[j][r] -= q * acol[k][r];
                for (std::size_t r = 0; r < cols; ++r) ucol[j][r] -= q * ucol[k][r];
                if (acol[j][i] != 0) done = false;
            }
            if (done) {
                ++k;
                break;
            }
        }
    }
    return {ucol.begin() + static_cast<std::ptrdiff_t>(k), ucol.end()};
}

std::vector<IntVector> hermite_rows(std::vector<IntVector> rows)
{
    if (rows.empty()) return rows;
    const std::size_t cols = rows[0].size();
    std::size_t p = 0;
    for (std::size_t c = 0; c < cols && p < rows.size(); ++c) {
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t r = p; r < rows.size(); ++r)
                if (rows[r][c] != 0 && (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c]))) best = r;
            if (best == rows.size()) break;
            std::swap(rows[p], rows[best]);
            bool done = true;
            for (std::size_t r = p + 1; r < rows.size(); ++r) {
                if (rows[r][c] == 0) continue;
                Integer q = rows[r][c] / rows[p][c];
                for (std::size_t k = 0; k < cols; ++k) rows[r][k] -= q * rows[p][k];
                if (rows[r][c] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[p][c] == 0) continue;
        if (rows[p][c] < 0)
            for (auto& v : rows[p]) v = -v;
        for (std::size_t r = 0; r < p; ++r) {
            Integer q = floor_div(rows[r][c], rows[p][c]);
            if (q != 0)
                for (std::size_t k = 0; k < cols; ++k) rows[r][k] -= q * rows[p][k];
        }
        ++p;
    }
    rows.resize(p);
    return rows;
}

std::vector<IntVector> resonance_lattice(const EigenTuple& lambda)
{
    const std::size_t n = lambda.size();
    std::map<Integer, std::vector<long>> exponents;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [prime, e] : factorize(lambda[i].magnitude().get_num())) {
            auto& row = exponents[prime];
            row.resize(n, 0);
            row[i] += e;
        }
        for (const auto& [prime, e] : factorize(lambda[i].magnitude().get_den())) {
            auto& row = exponents[prime];
            row.resize(n, 0);
            row[i] -= e;
        }
    }
    Integer den = 1;
    for (const auto& l : lambda) den = lcm(den, l.turn().get_den());

    // Rows [V | 0] for magnitudes and [t*D | -D] for the turn congruence.
    std::vector<IntVector> a;
    for (const auto& [prime, row] : exponents) {
        IntVector r(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) r[i] = row[i];
        a.push_back(r);
    }
    IntVector t(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) t[i] = lambda[i].turn().get_num() * (den / lambda[i].turn().get_den());
    t[n] = -den;
    a.push_back(t);

    std::vector<IntVector> basis;
    for (auto& v : integer_kernel(a, n + 1)) {
        v.pop_back();
        basis.push_back(std::move(v));
    }
    return hermite_rows(std::move(basis));
}

bool lattice_contains(const std::vector<IntVector>& hermite_basis, const std::vector<long>& q)
{
    IntVector r(q.begin(), q.end());
    for (const auto& row : hermite_basis) {
        std::size_t p = 0;
        while (row[p] == 0) ++p;
        if (r[p] % row[p] != 0) return false;
        Integer f = r[p] / row[p];
        for (std::size_t k = 0; k < r.size(); ++k) r[k] -= f * row[k];
    }
    return std::all_of(r.begin(), r.end(), [](const Integer& v) { return v == 0; });
}

ResonanceReport resonant_monomials(const EigenTuple& lambda, int degree_bound)
{
    if (degree_bound < 1) throw std::invalid_argument("degree bound must be at least 1");
    if (lambda.empty()) throw std::invalid_argument("empty eigenvalue tuple");
    ResonanceReport report;
    report.lattice_basis = resonance_lattice(lambda);
    const int n = static_cast<int>(lambda.size());
    for (int d = 1; d <= degree_bound; ++d) {
        for (const auto& q : monomials_of_degree_list(d, n)) {
            std::vector<long> ql(q.begin(), q.end());
            if (!lattice_contains(report.lattice_basis, ql)) continue;
            if (!power_product(lambda, ql).is_one()) throw std::logic_error("lattice membership disagrees with exact power");
            report.resonant.push_back(q);
        }
    }
    return report;
}

namespace {

Rational rational_det(std::vector<std::vector<Rational>> m)
{
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(m[piv][c]) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(m[i][c]) == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
        }
    }
    return det;
}

} // namespace

IntVector eigen_ratio(const std::vector<IntVector>& rows)
{
    if (rows.empty()) throw std::invalid_argument("eigen_ratio needs at least one row");
    const std::size_t n = rows[0].size();
    if (rows.size() + 1 != n) throw std::invalid_argument("eigen_ratio expects an (n-1) x n matrix");
    for (const auto& r : rows)
        if (r.size() != n) throw std::invalid_argument("ragged matrix rows");

    Matrix<Exact> q;
    for (const auto& r : rows) {
        std::vector<Exact> row;
        for (const auto& v : r) row.emplace_back(Rational(v));
        q.push_back(row);
    }
    if (rank(q) != n - 1) throw std::invalid_argument("matrix rows are linearly dependent");

    auto column = [&](std::size_t j) {
        std::vector<Rational> c;
        for (const auto& r : rows) c.emplace_back(r[j]);
        return c;
    };
    // Lexicographic (n-1)-subsets of columns: drop the last column first.
    for (std::size_t drop = n; drop-- > 0;) {
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < n; ++j)
            if (j != drop) cols.push_back(j);
        auto build = [&](std::size_t replace) {
            std::vector<std::vector<Rational>> a(n - 1, std::vector<Rational>(n - 1));
            for (std::size_t c = 0; c < cols.size(); ++c) {
                auto src = column(c == replace ? drop : cols[c]);
                for (std::size_t i = 0; i + 1 < n; ++i) a[i][c] = src[i];
            }
            return a;
        };
        Rational det_a = rational_det(build(n));
        if (sgn(det_a) == 0) continue;
        IntVector k(n);
        k[drop] = -det_a.get_num();
        for (std::size_t c = 0; c < cols.size(); ++c) k[cols[c]] = rational_det(build(c)).get_num();
        Integer g = 0;
        for (const auto& v : k) g = gcd(g, v);
        for (auto& v : k) v /= g;
        auto first = std::find_if(k.begin(), k.end(), [](const Integer& v) { return v != 0; });
        if (first != k.end() && *first < 0)
            for (auto& v : k) v = -v;
        for (const auto& r : rows) {
            Integer s = 0;
            for (std::size_t j = 0; j < n; ++j) s += r[j] * k[j];
            if (s != 0) throw std::logic_error("eigen_ratio produced a non-kernel vector");
        }
        return k;
    }
    throw std::invalid_argument("no invertible (n-1) x (n-1) column submatrix");
}

namespace {

// Sign of Re(exp(2 pi i * angle)) for a rational angle, exactly.
int cos_sign(const Rational& angle)
{
    Rational a = frac(angle);
    const Rational quarter(1, 4), three_quarters(3, 4);
    if (a == quarter || a == three_quarters) return 0;
    return (a < quarter || a > three_quarters) ? 1 : -1;
}

} // namespace

std::optional<StarWitness> star_condition(const EigenTuple& lambda)
{
    if (lambda.size() < 2) throw std::invalid_argument("condition (*) needs at least two eigenvalues");
    std::set<Rational> boundaries;
    for (const auto& l : lambda) {
        boundaries.insert(frac(l.turn() + make_rational(1, 4)));
        boundaries.insert(frac(l.turn() - make_rational(1, 4)));
    }
    std::vector<Rational> b(boundaries.begin(), boundaries.end());
    for (std::size_t k = 0; k < b.size(); ++k) {
        Rational lo = b[k];
        Rational hi = k + 1 < b.size() ? b[k + 1] : b[0] + 1;
        Rational tau = frac((lo + hi) / 2);
        // Re(lambda_i / v) has the sign of cos(2 pi (t_i - tau)).
        std::vector<int> signs;
        for (const auto& l : lambda) signs.push_back(cos_sign(l.turn() - tau));
        const auto positives = std::count(signs.begin(), signs.end(), 1);
        const auto negatives = std::count(signs.begin(), signs.end(), -1);
        if (positives == 1 && negatives == static_cast<long>(lambda.size()) - 1) {
            const auto idx = static_cast<std::size_t>(std::find(signs.begin(), signs.end(), 1) - signs.begin());
            return StarWitness{idx, tau};
        }
    }
    return std::nullopt;
}

namespace {

std::vector<ExactSeries> invariant_basis(const std::vector<ExactSeries>& G, int n, int bound)
{
    std::vector<ExactSeries> out;
    for (int d = 1; d <= bound; ++d) {
        const auto monos = monomials_of_degree_list(d, n);
        const std::size_t base = monomials_below(d, n);
        Matrix<Exact> m = zero_matrix<Exact>(monos.size(), monos.size());
        for (std::size_t j = 0; j < monos.size(); ++j) {
            ExactSeries f = ExactSeries::monomial(n, bound, monos[j], Exact(1));
            ExactSeries r = compose(f, G) - f;
            for (std::size_t i = 0; i < monos.size(); ++i) m[i][j] = r.coeff_at(base + i);
        }
        for (const auto& v : nullspace(m, monos.size())) {
            ExactSeries f(n, bound);
            for (std::size_t j = 0; j < monos.size(); ++j)
                if (!v[j].is_zero()) f.add_term(monos[j], v[j]);
            out.push_back(std::move(f));
        }
    }
    return out;
}

} // namespace

std::vector<ExactSeries> invariant_series_diagonal(const EigenTuple& lambda, int degree_bound)
{
    if (degree_bound < 1) throw std::invalid_argument("degree bound must be at least 1");
    const int n = static_cast<int>(lambda.size());
    std::vector<ExactSeries> G;
    bool exact = true;
    for (int i = 0; i < n; ++i) {
        auto v = lambda[i].to_exact();
        if (!v) {
            exact = false;
            break;
        }
        G.push_back(ExactSeries::monomial(n, degree_bound, [&] {
            MultiIndex e(n, 0);
            e[i] = 1;
            return e;
        }(), *v));
    }
    if (exact) return invariant_basis(G, n, degree_bound);

    // Eigenvalues outside Q(zeta_12): the system is diagonal with entries
    // Lambda^Q - 1, decided in PolarRational arithmetic.
    std::vector<ExactSeries> out;
    for (int d = 1; d <= degree_bound; ++d)
        for (const auto& q : monomials_of_degree_list(d, n))
            if (power_product(lambda, std::vector<long>(q.begin(), q.end())).is_one())
                out.push_back(ExactSeries::monomial(n, degree_bound, q, Exact(1)));
    return out;
}

std::vector<ExactSeries> invariant_series_jordan(const PolarRational& lambda, int degree_bound)
{
    if (degree_bound < 1) throw std::invalid_argument("degree bound must be at least 1");
    auto l = lambda.to_exact();
    if (!l) throw std::invalid_argument("Jordan eigenvalue must lie in Q(zeta_12) (turn a multiple of 1/12)");
    ExactSeries x1 = ExactSeries::variable(2, degree_bound, 0);
    ExactSeries x2 = ExactSeries::variable(2, degree_bound, 1);
    std::vector<ExactSeries> G{*l * x1 + x2, *l * x2};
    return invariant_basis(G, 2, degree_bound);
}

} // namespace foliage
