#include "foliage/cli.hpp"

#include "foliage/blowup.hpp"
#include "foliage/darboux.hpp"
#include "foliage/holonomy.hpp"
#include "foliage/manifest.hpp"
#include "foliage/orbit.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <type_traits>

namespace foliage::cli {

namespace {

struct Options {
    std::string input;
    std::string output;
    std::optional<int> truncation;
    std::optional<int> max_degree;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    // per-command
    std::optional<int> chart;
    std::optional<int> grid;
    std::optional<double> radius;
    std::optional<int> max_order;
    std::optional<int> max_period;
    std::optional<int> max;
    std::optional<int> factorial;
    std::optional<int> max_iter;
    std::string csv;
};

// Raised for numerical failures that should exit with code 3.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, Json detail = Json::object())
        : std::runtime_error(what), detail_(std::move(detail))
    {
    }
    const Json& detail() const { return detail_; }

private:
    Json detail_;
};

const std::set<std::string> kCommon = {"kind", "backend", "description"};

const std::map<std::string, std::set<std::string>> kSchema = {
    {"series", {"arity", "truncation", "series", "degree_bound"}},
    {"diffeo", {"arity", "truncation", "components", "function", "max_order"}},
    {"group", {"arity", "truncation", "generators", "elements", "diagonalizer"}},
    {"field", {"arity", "truncation", "components", "candidate", "integral", "curve", "chart", "degree_bound"}},
    {"darboux", {"arity", "truncation", "components", "degree_bound"}},
    {"eigen", {"eigenvalues", "matrix", "jordan", "degree_bound"}},
    {"holonomy",
     {"p", "q", "a1", "a2", "truncation", "section_radius", "loop_radius", "tube_radius", "first_integral", "grid",
      "seed", "tol", "max_order"}},
    {"orbit",
     {"arity", "truncation", "components", "points", "radius", "max_iter", "tol", "max_period", "grid", "seed"}},
};

struct Manifest {
    Json j;
    std::string kind;
    Backend backend = Backend::exact;

    bool has(const std::string& key) const { return j.contains(key); }
    const Json& at(const std::string& key) const
    {
        if (!j.contains(key)) throw ManifestError(key, "required field is missing");
        return j.at(key);
    }
};

Manifest validate(const Json& j, const std::vector<std::string>& accepted)
{
    if (!j.is_object()) throw ManifestError("", "manifest must be a JSON object");
    Manifest m;
    m.j = j;
    if (!j.contains("kind") || !j.at("kind").is_string()) throw ManifestError("kind", "required string field is missing");
    m.kind = j.at("kind").get<std::string>();
    auto schema = kSchema.find(m.kind);
    if (schema == kSchema.end()) throw ManifestError("kind", "unknown manifest kind '" + m.kind + "'");
    bool ok = false;
    std::string list;
    for (const auto& a : accepted) {
        if (m.kind == a) ok = true;
        list += (list.empty() ? "" : ", ") + std::string(a);
    }
    if (!ok) throw ManifestError("kind", "this command accepts kind " + list + ", got '" + m.kind + "'");
    if (j.contains("backend")) {
        const Json& b = j.at("backend");
        if (b == "exact")
            m.backend = Backend::exact;
        else if (b == "float")
            m.backend = Backend::floating;
        else
            throw ManifestError("backend", "expected \"exact\" or \"float\"");
    }
    if (j.contains("description") && !j.at("description").is_string())
        throw ManifestError("description", "expected a string");
    for (const auto& [key, value] : j.items())
        if (!kCommon.count(key) && !schema->second.count(key)) throw ManifestError(key, "unknown field");
    return m;
}

// Highest exponent degree appearing in (nested lists of) series literals.
int literal_degree(const Json& j)
{
    int d = 0;
    if (j.is_array()) {
        for (const auto& v : j) d = std::max(d, literal_degree(v));
    } else if (j.is_object() && j.contains("exponents") && j.at("exponents").is_array()) {
        int s = 0;
        for (const auto& e : j.at("exponents"))
            if (e.is_number_integer()) s += std::max(0, static_cast<int>(e.get<long long>()));
        d = s;
    }
    return d;
}

struct SeriesShape {
    int arity = 0;
    int parse_order = 0;  // order the literals are read at
    int order = 0;        // effective truncation after flag precedence
};

SeriesShape shape(const Manifest& m, const Options& o, std::initializer_list<const char*> literal_keys,
                  std::optional<int> fixed_arity = std::nullopt)
{
    SeriesShape s;
    if (fixed_arity)
        s.arity = *fixed_arity;
    else
        s.arity = read_int(m.at("arity"), "arity", 1);
    if (s.arity > 8) throw ManifestError("arity", "arity above 8 is not supported");
    int lit = 0;
    for (const char* k : literal_keys)
        if (m.has(k)) lit = std::max(lit, literal_degree(m.j.at(k)));
    if (m.has("truncation")) {
        s.parse_order = read_int(m.at("truncation"), "truncation", 0);
        if (s.parse_order > 64) throw ManifestError("truncation", "truncation above 64 is not supported");
    } else
        s.parse_order = std::max(lit, 1);
    s.order = o.truncation ? *o.truncation : s.parse_order;
    if (s.order < 0 || s.order > 64) throw ManifestError("--truncation", "must lie in [0, 64]");
    return s;
}

template <class S>
std::vector<TruncatedSeries<S>> series_list(const Manifest& m, const char* key, const SeriesShape& sh)
{
    auto v = read_series_list<S>(m.at(key), sh.arity, sh.parse_order, key);
    for (auto& f : v) f = f.with_order(sh.order);
    return v;
}

template <class S>
TruncatedSeries<S> series_one(const Manifest& m, const char* key, const SeriesShape& sh)
{
    return read_series<S>(m.at(key), sh.arity, sh.parse_order, key).with_order(sh.order);
}

template <class F>
auto with_backend(Backend b, F&& f)
{
    if (b == Backend::exact) return f(std::type_identity<Exact>{});
    return f(std::type_identity<Float>{});
}

void require_exact(const Manifest& m, const std::string& command)
{
    if (m.backend != Backend::exact)
        throw ManifestError("backend", command + " requires the exact backend (exactness is part of the result)");
}

template <class S>
void set_certificate(Json& report, int truncation, double tol)
{
    if constexpr (ScalarTraits<S>::exact) {
        report["certificate"] = "exact";
        report["truncation"] = truncation;
    } else {
        report["certificate"] = "numerical-evidence";
        report["truncation"] = truncation;
        report["tol"] = tol;
    }
}

Json index_list(const std::vector<MultiIndex>& v)
{
    Json a = Json::array();
    for (const auto& e : v) a.push_back(e);
    return a;
}

Json int_vector(const IntVector& v)
{
    Json a = Json::array();
    for (const auto& x : v) a.push_back(write_integer(x));
    return a;
}

EigenTuple eigenvalues(const Manifest& m)
{
    const Json& e = m.at("eigenvalues");
    if (!e.is_array() || e.empty()) throw ManifestError("eigenvalues", "expected a nonempty list of eigenvalues");
    EigenTuple lam;
    for (std::size_t i = 0; i < e.size(); ++i) lam.push_back(read_eigenvalue(e[i], "eigenvalues[" + std::to_string(i) + "]"));
    return lam;
}

int degree_bound(const Manifest& m, const Options& o, int fallback)
{
    if (o.max_degree) {
        if (*o.max_degree < 1) throw ManifestError("--max-degree", "must be at least 1");
        return *o.max_degree;
    }
    if (m.has("degree_bound")) return read_int(m.at("degree_bound"), "degree_bound", 1);
    return fallback;
}

double manifest_double(const Manifest& m, const char* key, std::optional<double> flag, double fallback)
{
    if (flag) return *flag;
    if (m.has(key)) return read_double(m.at(key), key);
    return fallback;
}

int manifest_int(const Manifest& m, const char* key, std::optional<int> flag, int fallback, int min)
{
    if (flag) {
        if (*flag < min) throw ManifestError(std::string("--") + key, "must be at least " + std::to_string(min));
        return *flag;
    }
    if (m.has(key)) return read_int(m.at(key), key, min);
    return fallback;
}

std::uint64_t seed_value(const Manifest& m, const Options& o)
{
    if (o.seed) return *o.seed;
    if (m.has("seed")) return static_cast<std::uint64_t>(read_int(m.at("seed"), "seed", 0));
    return 0;
}

// ---------------------------------------------------------------- eigen

void cmd_resonance(const Manifest& m, const Options& o, Json& r)
{
    auto lam = eigenvalues(m);
    const int bound = degree_bound(m, o, 6);
    auto rep = resonant_monomials(lam, bound);
    Json lb = Json::array();
    for (const auto& row : rep.lattice_basis) lb.push_back(int_vector(row));
    r["certificate"] = "exact";
    r["truncation"] = bound;
    r["verdict"] = {{"degree_bound", bound},
                    {"resonant_count", rep.resonant.size()},
                    {"resonant", index_list(rep.resonant)},
                    {"lattice_basis", lb}};
}

void cmd_eigen_ratio(const Manifest& m, const Options&, Json& r)
{
    auto rows = read_int_matrix(m.at("matrix"), "matrix");
    auto k = eigen_ratio(rows);
    bool kernel = true;
    for (const auto& row : rows) {
        Integer s = 0;
        for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * k[i];
        if (s != 0) kernel = false;
    }
    if (!kernel) throw NumericalFailure("eigen ratio failed its kernel check");
    r["certificate"] = "exact";
    r["truncation"] = nullptr;
    r["verdict"] = {{"k", int_vector(k)}, {"kernel_verified", kernel}};
}

void cmd_star(const Manifest& m, const Options&, Json& r)
{
    auto lam = eigenvalues(m);
    auto w = star_condition(lam);
    r["certificate"] = "exact";
    r["truncation"] = nullptr;
    Json v{{"holds", w.has_value()}};
    if (w) {
        v["index"] = w->index + 1;
        v["turn"] = to_string(w->turn);
    }
    r["verdict"] = v;
}

void cmd_invariant_series(const Manifest& m, const Options& o, Json& r)
{
    auto lam = eigenvalues(m);
    const int bound = degree_bound(m, o, 6);
    bool jordan = m.has("jordan") && read_bool(m.at("jordan"), "jordan");
    std::vector<ExactSeries> basis;
    Json v;
    if (jordan) {
        if (lam.size() != 1) throw ManifestError("eigenvalues", "a Jordan block takes exactly one eigenvalue");
        basis = invariant_series_jordan(lam[0], bound);
        v["linear_part"] = "jordan";
    } else {
        basis = invariant_series_diagonal(lam, bound);
        auto res = resonant_monomials(lam, bound);
        std::vector<MultiIndex> support;
        for (const auto& f : basis)
            for (const auto& [e, c] : f.terms()) support.push_back(e);
        v["linear_part"] = "diagonal";
        v["support_equals_resonant"] = support == res.resonant;
    }
    Json b = Json::array();
    for (const auto& f : basis) b.push_back(write_series(f));
    v["degree_bound"] = bound;
    v["dimension"] = basis.size();
    v["basis"] = b;
    r["certificate"] = "exact";
    r["truncation"] = bound;
    r["verdict"] = v;
}

// ---------------------------------------------------------------- diffeo

template <class S>
std::vector<FormalDiffeo<S>> diffeo_list(const Manifest& m, const char* key, const SeriesShape& sh)
{
    const Json& j = m.at(key);
    if (!j.is_array()) throw ManifestError(key, "expected a list of diffeomorphisms (lists of series literals)");
    std::vector<FormalDiffeo<S>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = std::string(key) + "[" + std::to_string(i) + "]";
        auto comps = read_series_list<S>(j[i], sh.arity, sh.parse_order, p);
        if (static_cast<int>(comps.size()) != sh.arity) throw ManifestError(p, "expected one series per coordinate");
        for (auto& c : comps) c = c.with_order(sh.order);
        try {
            out.emplace_back(std::move(comps));
        } catch (const std::invalid_argument& e) {
            throw ManifestError(p, e.what());
        }
    }
    return out;
}

template <class S>
FormalDiffeo<S> diffeo(const Manifest& m, const SeriesShape& sh)
{
    auto comps = series_list<S>(m, "components", sh);
    if (static_cast<int>(comps.size()) != sh.arity) throw ManifestError("components", "expected one series per coordinate");
    try {
        return FormalDiffeo<S>(std::move(comps));
    } catch (const std::invalid_argument& e) {
        throw ManifestError("components", e.what());
    }
}

template <class S>
Json write_diffeo(const FormalDiffeo<S>& G)
{
    Json c = Json::array();
    for (const auto& f : G.components()) c.push_back(write_series(f));
    return c;
}

template <class S>
Json write_matrix(const Matrix<S>& a)
{
    Json rows = Json::array();
    for (const auto& row : a) {
        Json rj = Json::array();
        for (const auto& v : row) {
            if constexpr (ScalarTraits<S>::exact)
                rj.push_back(write_exact(v));
            else
                rj.push_back(write_float(v));
        }
        rows.push_back(rj);
    }
    return rows;
}

void cmd_linearize(const Manifest& m, const Options& o, Json& r)
{
    with_backend(m.backend, [&]<class S>(std::type_identity<S>) {
        const double tol = o.tol.value_or(kDefaultEpsilon);
        GroupPresentation<S> group;
        SeriesShape sh;
        if (m.kind == "diffeo") {
            sh = shape(m, o, {"components"});
            group.generators.push_back(diffeo<S>(m, sh));
        } else {
            sh = shape(m, o, {"generators", "elements"});
            group.generators = diffeo_list<S>(m, "generators", sh);
            if (m.has("elements")) group.claimed_elements = diffeo_list<S>(m, "elements", sh);
        }
        std::vector<FormalDiffeo<S>> elements;
        try {
            elements = group_elements(group, 64, tol);
        } catch (const GroupClosureError& e) {
            throw ManifestError("elements", e.what());
        }
        std::optional<Matrix<S>> P;
        if (m.has("diagonalizer")) {
            const Json& d = m.at("diagonalizer");
            if (!d.is_array() || static_cast<int>(d.size()) != sh.arity) throw ManifestError("diagonalizer", "expected an n x n matrix");
            Matrix<S> a;
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (!d[i].is_array() || static_cast<int>(d[i].size()) != sh.arity)
                    throw ManifestError("diagonalizer[" + std::to_string(i) + "]", "expected a row of n scalars");
                std::vector<S> row;
                for (std::size_t k = 0; k < d[i].size(); ++k)
                    row.push_back(read_scalar<S>(d[i][k], "diagonalizer[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
                a.push_back(std::move(row));
            }
            P = a;
        } else if constexpr (ScalarTraits<S>::exact) {
            if (group.generators.size() == 1) P = root_of_unity_diagonalizer(group.generators[0].linear_part());
        }
        auto h = average_linearizer(elements, P, tol);
        auto hinv = invert(h);
        Json checks = Json::array();
        bool all = true, diagonal = true;
        for (std::size_t i = 0; i < elements.size(); ++i) {
            auto c = compose(hinv, compose(elements[i], h));
            auto L = FormalDiffeo<S>::linear(c.linear_part(), c.order());
            bool ok = true;
            for (int k = 0; k < c.arity(); ++k) ok = ok && same_series(c[k], L[k], tol);
            all = all && ok;
            diagonal = diagonal && c.is_diagonal_linear(tol);
            checks.push_back({{"element", i + 1}, {"linearized", ok}, {"linear_part", write_matrix(c.linear_part())}});
        }
        if (!all) throw NumericalFailure("linearizer failed its conjugation postcondition", Json{{"checks", checks}});
        set_certificate<S>(r, h.order(), tol);
        r["verdict"] = {{"group_order", elements.size()},
                        {"diagonalizer_used", P.has_value()},
                        {"all_linearized", all},
                        {"all_diagonal", diagonal},
                        {"h", write_diffeo(h)},
                        {"h_inverse", write_diffeo(hinv)},
                        {"elements", checks}};
    });
}

void cmd_invariance(const Manifest& m, const Options& o, Json& r)
{
    with_backend(m.backend, [&]<class S>(std::type_identity<S>) {
        const double tol = o.tol.value_or(kDefaultEpsilon);
        auto sh = shape(m, o, {"components", "function"});
        auto G = diffeo<S>(m, sh);
        auto f = series_one<S>(m, "function", sh);
        auto res = invariance_check(f, G);
        const bool inv = ScalarTraits<S>::exact ? res.is_zero() : res.near_zero(tol);
        set_certificate<S>(r, res.order(), tol);
        r["verdict"] = {{"invariant", inv}, {"residual", write_series(res)}, {"residual_max_abs", res.max_abs()}};
    });
}

void cmd_order(const Manifest& m, const Options& o, Json& r)
{
    with_backend(m.backend, [&]<class S>(std::type_identity<S>) {
        const double tol = o.tol.value_or(kDefaultEpsilon);
        auto sh = shape(m, o, {"components"});
        auto G = diffeo<S>(m, sh);
        const int max = manifest_int(m, "max_order", o.max, 64, 1);
        auto k = element_order(G, max, tol);
        Json v{{"max", max}, {"order", k ? Json(*k) : Json(nullptr)}};
        if (o.factorial) {
            if constexpr (ScalarTraits<S>::exact) {
                auto f = finite_order_test(G, *o.factorial);
                v["finite_order_test"] = {{"m", *o.factorial},
                                          {"exponent", f.exponent},
                                          {"identity", f.identity},
                                          {"certified_degree", f.certified_degree}};
            } else {
                throw ManifestError("backend", "--factorial needs the exact backend");
            }
        }
        set_certificate<S>(r, G.order(), tol);
        r["verdict"] = v;
    });
}

PointN read_point(const Json& j, int n, const std::string& path)
{
    if (!j.is_array() || static_cast<int>(j.size()) != n) throw ManifestError(path, "expected " + std::to_string(n) + " coordinates");
    PointN p;
    for (std::size_t i = 0; i < j.size(); ++i) p.push_back(read_float(j[i], path + "[" + std::to_string(i) + "]"));
    return p;
}

std::optional<std::vector<Exact>> read_exact_point(const Json& j, int n, const std::string& path)
{
    if (!j.is_array() || static_cast<int>(j.size()) != n) return std::nullopt;
    std::vector<Exact> p;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& v = j[i];
        bool textual = v.is_string() || v.is_number_integer();
        if (v.is_object())
            for (const auto& [k, x] : v.items()) textual = textual || x.is_string() || x.is_number_integer();
        if (v.is_object())
            for (const auto& [k, x] : v.items())
                if (x.is_number_float()) textual = false;
        if (!textual) return std::nullopt;
        p.push_back(read_exact(v, path + "[" + std::to_string(i) + "]"));
    }
    return p;
}

Json write_orbit(const OrbitRecord& rec, std::size_t max_iter)
{
    Json fwd = Json::array(), bwd = Json::array();
    for (std::size_t i = 0; i < rec.forward_hits.size() && i < 64; ++i) fwd.push_back(write_complex_point(rec.forward_hits[i]));
    for (std::size_t i = 0; i < rec.backward_hits.size() && i < 64; ++i) bwd.push_back(write_complex_point(rec.backward_hits[i]));
    return Json{{"x", write_complex_point(rec.x)},
                {"exact", rec.exact},
                {"escaped", to_string(rec.escaped)},
                {"period", rec.period ? Json(*rec.period) : Json(nullptr)},
                {"size", rec.size},
                {"mu", rec.mu ? Json(*rec.mu) : Json(">= " + std::to_string(max_iter))},
                {"forward_count", rec.forward_hits.size()},
                {"backward_count", rec.backward_hits.size()},
                {"forward_hits", fwd},
                {"backward_hits", bwd}};
}

void cmd_orbits(const Manifest& m, const Options& o, Json& r)
{
    with_backend(m.backend, [&]<class S>(std::type_identity<S>) {
        auto sh = shape(m, o, {"components"});
        auto G = diffeo<S>(m, sh);
        OrbitOptions opt;
        opt.radius = manifest_double(m, "radius", o.radius, 1.0);
        if (!(opt.radius > 0)) throw ManifestError("radius", "must be positive");
        opt.tol = manifest_double(m, "tol", o.tol, 1e-9);
        opt.max_iter = static_cast<std::size_t>(manifest_int(m, "max_iter", o.max_iter, 1000, 1));
        const int grid = manifest_int(m, "grid", o.grid, 64, 0);
        const int mp = manifest_int(m, "max_period", o.max_period, 12, 1);
        const auto seed = seed_value(m, o);
        Json orbits = Json::array();
        if (m.has("points")) {
            const Json& pts = m.at("points");
            if (!pts.is_array()) throw ManifestError("points", "expected a list of points");
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const std::string p = "points[" + std::to_string(i) + "]";
                PointN x = read_point(pts[i], sh.arity, p);
                if (!(norm(x) < opt.radius)) throw ManifestError(p, "point lies outside U");
                OrbitRecord rec;
                std::optional<std::vector<Exact>> ex;
                if constexpr (ScalarTraits<S>::exact) ex = read_exact_point(pts[i], sh.arity, p);
                if constexpr (ScalarTraits<S>::exact) {
                    bool gaussian = ex.has_value();
                    if (ex)
                        for (const auto& v : *ex) gaussian = gaussian && v.is_gaussian();
                    if (gaussian)
                        rec = orbit_exact(G, *ex, rationalize(opt.radius), std::min<std::size_t>(opt.max_iter, 64));
                    else
                        rec = orbit(G, x, opt);
                } else {
                    rec = orbit(G, x, opt);
                }
                orbits.push_back(write_orbit(rec, rec.exact ? std::min<std::size_t>(opt.max_iter, 64) : opt.max_iter));
            }
        }
        Json density = nullptr;
        if (grid > 0) {
            auto pts = orbit_grid(G.arity(), static_cast<std::size_t>(grid), opt.radius, seed);
            auto rep = periodic_scan(G, pts, static_cast<std::size_t>(mp), opt);
            Json hist = Json::object();
            for (const auto& [k, c] : rep.histogram) hist[std::to_string(k)] = c;
            Json wit = Json::array();
            for (const auto& w : rep.witnesses)
                wit.push_back({{"index", w.index}, {"point", write_complex_point(w.point)}, {"period", w.period}});
            density = {{"grid_size", rep.grid_size}, {"seed", seed},     {"max_period", rep.max_period},
                       {"fraction", rep.fraction},   {"histogram", hist}, {"witnesses", wit}};
        }
        r["certificate"] = "numerical-evidence";
        r["truncation"] = G.order();
        r["tol"] = opt.tol;
        r["verdict"] = {{"radius", opt.radius}, {"max_iter", opt.max_iter}, {"orbits", orbits}, {"density", density}};
    });
}

// ---------------------------------------------------------------- fields

template <class S>
PolyVectorField<S> field(const Manifest& m, const SeriesShape& sh)
{
    auto comps = series_list<S>(m, "components", sh);
    if (static_cast<int>(comps.size()) != sh.arity) throw ManifestError("components", "expected one series per coordinate");
    return PolyVectorField<S>(std::move(comps));
}

void cmd_first_integral(const Manifest& m, const Options& o, Json& r)
{
    with_backend(m.backend, [&]<class S>(std::type_identity<S>) {
        const double tol = o.tol.value_or(kDefaultEpsilon);
        auto sh = shape(m, o, {"components", "candidate"});
        auto X = field<S>(m, sh);
        auto F = series_list<S>(m, "candidate", sh);
        if (static_cast<int>(F.size()) != sh.arity - 1)
            throw ManifestError("candidate", "expected n - 1 = " + std::to_string(sh.arity - 1) + " series");
        auto v = first_integral_check(X, F, tol);
        Json res = Json::array();
        for (const auto& s : v.residuals) res.push_back(write_series(s));
        Json verdict{{"is_first_integral", v.is_first_integral()},
                     {"residuals_vanish", v.residuals_vanish},
                     {"wedge_nonzero", v.wedge_nonzero},
                     {"nonzero_minor_dropped_column", v.nonzero_minor ? Json(*v.nonzero_minor + 1) : Json(nullptr)},
                     {"certified_degree", v.certified_degree},
                     {"residuals", res}};
        if constexpr (ScalarTraits<S>::exact) {
            auto g = generic_form_analysis(X, F);
            Json lam = Json::array();
            for (const auto& l : g.lambda) lam.push_back(write_exact(l));
            Json gen{{"is_generic", g.is_generic}, {"failures", g.failures}, {"lambda", lam}};
            gen["integer_ratios"] = g.integer_ratios ? int_vector(*g.integer_ratios) : Json(nullptr);
            gen["ratios_consistent"] = g.ratios_consistent ? Json(*g.ratios_consistent) : Json(nullptr);
            if (g.star_evaluated) {
                gen["star_holds"] = g.star.has_value();
                if (g.star) gen["star"] = {{"index", g.star->index + 1}, {"turn", to_string(g.star->turn)}};
            }
            verdict["generic_form"] = gen;
        }
        set_certificate<S>(r, v.certified_degree, tol);
        r["verdict"] = verdict;
    });
}

void cmd_symmetries(const Manifest& m, const Options& o, Json& r)
{
    with_backend(m.backend, [&]<class S>(std::type_identity<S>) {
        const double tol = o.tol.value_or(kDefaultEpsilon);
        auto sh = shape(m, o, {"series"});
        auto fs = series_list<S>(m, "series", sh);
        if (fs.empty()) throw ManifestError("series", "need at least one series");
        const int bound = degree_bound(m, o, 3);
        auto basis = infinitesimal_symmetries(fs, bound, tol);
        Json b = Json::array();
        for (const auto& X : basis) b.push_back(write_field(X));
        Json v{{"degree_bound", bound}, {"dimension", basis.size()}, {"basis", b}};
        if (static_cast<int>(fs.size()) == sh.arity) {
            auto w = wedge_top(fs, tol);
            v["generically_transverse"] = w.generically_transverse;
            v["transverse_at_origin"] = w.transverse_at_origin;
        }
        set_certificate<S>(r, sh.order, tol);
        r["verdict"] = v;
    });
}

int chart_value(const Manifest& m, const Options& o)
{
    int c = o.chart ? *o.chart : (m.has("chart") ? read_int(m.at("chart"), "chart") : 1);
    if (c < 1 || c > 3) throw ManifestError(o.chart ? "--chart" : "chart", "chart must be 1, 2 or 3");
    return c;
}

Json write_chart(const ChartField& cf)
{
    Json j = write_field(cf.field);
    j["chart"] = cf.chart;
    j["nu"] = cf.nu;
    return j;
}

void cmd_blowup(const Manifest& m, const Options& o, Json& r)
{
    require_exact(m, "blowup");
    auto sh = shape(m, o, {"components"});
    if (sh.arity != 3) throw ManifestError("arity", "blow-up is implemented for fields on C^3");
    auto X = field<Exact>(m, sh);
    const int chart = chart_value(m, o);
    auto b = blowup_divisor_restriction(X, chart);
    auto push = pushforward_residual(X, b.total_transform, chart);
    Json v{{"chart", chart},
           {"nu", b.nu},
           {"dicritical", b.dicritical},
           {"total_transform", write_field(b.total_transform)},
           {"pushforward_identity", push.is_zero()},
           {"chart_field", b.chart_field ? write_chart(*b.chart_field) : Json(nullptr)}};
    if (b.chart_field) {
        Json trans = Json::object();
        for (int k = 1; k <= 3; ++k) {
            if (k == chart) continue;
            auto t = chart_transition(*b.chart_field, k);
            auto direct = blowup_divisor_restriction(X, k);
            Json tj = write_chart(t);
            tj["matches_direct_computation"] = direct.chart_field && direct.chart_field->field == t.field;
            trans[std::to_string(k)] = tj;
        }
        v["transitions"] = trans;
    }
    if (!push.is_zero()) throw NumericalFailure("total transform failed the pushforward identity");
    r["certificate"] = "exact";
    r["truncation"] = sh.order;
    r["verdict"] = v;
}

void cmd_projectivize(const Manifest& m, const Options& o, Json& r)
{
    require_exact(m, "projectivize");
    auto sh = shape(m, o, {"components", "integral", "curve"});
    if (sh.arity != 3) throw ManifestError("arity", "projectivization is implemented for fields on C^3");
    auto X = field<Exact>(m, sh);
    const int chart = chart_value(m, o);
    auto p = projectivize_homogeneous(X, chart);
    Json v{{"chart_field", write_chart(p.chart_field)},
           {"radial_multiple", p.radial_multiple},
           {"common_factor_suspected", p.common_factor_suspected}};
    if (m.has("integral")) {
        Fields f(m.at("integral"), "integral");
        RationalFunctionCP2 rf{read_series<Exact>(f.require("numerator"), 3, sh.parse_order, "integral.numerator"),
                               read_series<Exact>(f.require("denominator"), 3, sh.parse_order, "integral.denominator")};
        f.finish();
        std::optional<std::pair<ExactSeries, ExactSeries>> curve;
        if (m.has("curve")) {
            Fields c(m.at("curve"), "curve");
            curve = std::pair{read_series<Exact>(c.require("g"), 3, sh.parse_order, "curve.g"),
                              read_series<Exact>(c.require("h"), 3, sh.parse_order, "curve.h")};
            c.finish();
        }
        auto w = weak_first_integral_check(X, rf, curve);
        Json wj{{"vanishes", w.vanishes}, {"residual", write_series(w.residual)}};
        wj["cofactor_matches"] = w.cofactor_matches ? Json(*w.cofactor_matches) : Json(nullptr);
        wj["curve_identity"] = w.curve_identity ? Json(*w.curve_identity) : Json(nullptr);
        v["weak_first_integral"] = wj;
    } else if (m.has("curve")) {
        throw ManifestError("curve", "a curve is only checked together with an integral");
    }
    r["certificate"] = "exact";
    r["truncation"] = sh.order;
    r["verdict"] = v;
}

void cmd_darboux(const Manifest& m, const Options& o, Json& r)
{
    require_exact(m, "darboux");
    auto sh = shape(m, o, {"components"});
    if (sh.arity != 2) throw ManifestError("arity", "invariant curve search needs a planar field");
    auto X = field<Exact>(m, sh);
    const int d = degree_bound(m, o, 2);
    auto rep = invariant_curves(X, d);
    Json curves = Json::array();
    for (const auto& c : rep.curves) {
        auto K = cofactor(X, c.g);
        curves.push_back({{"g", write_series(c.g)},
                          {"K", write_series(c.K)},
                          {"kappa", c.kappa},
                          {"cofactor_verified", K && as_polynomial(*K) == as_polynomial(c.K)}});
    }
    Json stats{{"seeds", rep.seeds},
               {"branches", rep.branches},
               {"dead_branches", rep.dead_branches},
               {"families", rep.families},
               {"pruned_kernels", rep.pruned_kernels},
               {"overflow", rep.overflow},
               {"linear_eigenvalues_in_field", rep.linear_eigenvalues_in_field}};
    Json integral = nullptr;
    if (!rep.curves.empty()) {
        if (auto I = darboux_assemble(X, rep.curves)) {
            Json ex = Json::array();
            for (const auto& c : I->exponents) ex.push_back(write_exact(c));
            integral = {{"kind", to_string(I->kind)}, {"exponents", ex}, {"nullity", I->nullity}, {"verified", I->verified}};
            if (I->integer_exponents) integral["integer_exponents"] = int_vector(*I->integer_exponents);
            if (I->numerator) integral["numerator"] = write_series(*I->numerator);
            if (I->denominator) integral["denominator"] = write_series(*I->denominator);
        }
    }
    r["certificate"] = "exact";
    r["truncation"] = d;
    r["verdict"] = {{"degree_bound", d},
                    {"curves", curves},
                    {"integral", integral},
                    {"integral_found", !integral.is_null()},
                    {"note", integral.is_null() ? "none found at this bound" : "integral assembled from the curves found"},
                    {"search", stats}};
}

// ---------------------------------------------------------------- holonomy

HolonomySetup holonomy_setup(const Manifest& m, const Options& o, int& truncation)
{
    if (m.kind == "field") {
        SeriesShape sh;
        FloatField X = FloatField::zero(3, 0);
        if (m.backend == Backend::exact) {
            sh = shape(m, o, {"components"});
            if (sh.arity != 3) throw ManifestError("arity", "holonomy needs a field on C^3");
            auto E = field<Exact>(m, sh);
            std::vector<FloatSeries> c;
            for (const auto& s : E.components()) c.push_back(to_float(s));
            X = FloatField(std::move(c));
        } else {
            sh = shape(m, o, {"components"});
            if (sh.arity != 3) throw ManifestError("arity", "holonomy needs a field on C^3");
            X = field<Float>(m, sh);
        }
        auto x3 = FloatSeries::variable(3, X.order(), 2);
        if (!(X[2] - x3).near_zero(kDefaultEpsilon)) X = normalize_third_component(X);
        truncation = X.order();
        return setup_from_field(X);
    }
    HolonomySetup s;
    s.p = read_double(m.at("p"), "p");
    s.q = read_double(m.at("q"), "q");
    auto sh = shape(m, o, {"a1", "a2", "first_integral"}, 3);
    truncation = sh.order;
    auto as_float = [&](const char* key) {
        if (!m.has(key)) return FloatSeries(3, sh.order);
        if (m.backend == Backend::exact) return to_float(series_one<Exact>(m, key, sh));
        return series_one<Float>(m, key, sh);
    };
    s.a1 = as_float("a1");
    s.a2 = as_float("a2");
    for (const auto* a : {&s.a1, &s.a2})
        if (std::abs(a->constant_term()) > 0) throw ManifestError(a == &s.a1 ? "a1" : "a2", "corrections must vanish at 0");
    s.section_radius = manifest_double(m, "section_radius", o.radius, 0.1);
    s.loop_radius = manifest_double(m, "loop_radius", std::nullopt, 1.0);
    s.tube_radius = manifest_double(m, "tube_radius", std::nullopt, 1.0);
    if (!(s.section_radius > 0) || !(s.loop_radius > 0) || !(s.tube_radius > 0))
        throw ManifestError("section_radius", "radii must be positive");
    return s;
}

void cmd_holonomy(const Manifest& m, const Options& o, Json& r)
{
    int truncation = 0;
    HolonomySetup s = holonomy_setup(m, o, truncation);
    if (m.kind == "field" && o.radius) s.section_radius = *o.radius;
    const double tol = manifest_double(m, "tol", o.tol, 1e-10);
    if (!(tol > 0)) throw ManifestError("tol", "must be positive");
    const int n = manifest_int(m, "grid", o.grid, 25, 1);
    const int kmax = manifest_int(m, "max_order", o.max_order, 12, 1);
    const auto seed = seed_value(m, o);
    auto grid = section_grid(static_cast<std::size_t>(n), s.section_radius, seed);

    HolonomySample sample;
    try {
        sample = sample_holonomy(s, grid, tol);
    } catch (const IntegrationFailure& e) {
        throw NumericalFailure(e.what(), Json{{"last_t", e.last_t()}});
    }
    Json samples = Json::array();
    for (std::size_t i = 0; i < grid.size(); ++i)
        samples.push_back({{"input", write_complex_point(sample.inputs[i])}, {"output", write_complex_point(sample.outputs[i])}});
    Json v{{"p", s.p},
           {"q", s.q},
           {"section_radius", s.section_radius},
           {"loop_radius", s.loop_radius},
           {"grid", n},
           {"seed", seed},
           {"samples", samples},
           {"integrator", {{"steps", sample.stats.steps}, {"rejected", sample.stats.rejected}, {"max_scaled_local_error", sample.stats.max_local_error}}}};
    if (s.a1.is_zero() && s.a2.is_zero()) {
        double dev = 0;
        const Complex e1 = std::polar(1.0, 2 * std::numbers::pi * s.p), e2 = std::polar(1.0, 2 * std::numbers::pi * s.q);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            Point2 expect{e1 * grid[i][0], e2 * grid[i][1]};
            dev = std::max(dev, distance(expect, sample.outputs[i]));
        }
        v["closed_form_deviation"] = dev;
    }
    try {
        auto k = periodicity_probe(s, grid, kmax, std::max(1e-8, 100 * tol), tol);
        v["periodicity"] = {{"max_order", kmax}, {"order", k ? Json(*k) : Json(nullptr)}, {"evidence", "numerical"}};
        if (m.has("first_integral")) {
            auto sh = shape(m, o, {"a1", "a2", "first_integral"}, 3);
            FloatSeries f = m.backend == Backend::exact ? to_float(series_one<Exact>(m, "first_integral", sh))
                                                        : series_one<Float>(m, "first_integral", sh);
            auto inv = invariance_residual(f, s, grid, tol);
            v["invariance"] = {{"max_residual", inv.max_residual}, {"pure_x3_terms_vanish", inv.pure_x3_terms_vanish}};
        }
    } catch (const IntegrationFailure& e) {
        throw NumericalFailure(e.what(), Json{{"last_t", e.last_t()}});
    }
    if (!o.csv.empty()) {
        std::ofstream csv(o.csv);
        if (!csv) throw ManifestError("--csv", "cannot open '" + o.csv + "' for writing");
        csv.precision(17);
        csv << "point,t,re_g1,im_g1,re_g2,im_g2\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (const auto& tp : lift_loop(s, grid[i], tol, 1.0, true).trajectory)
                csv << i << ',' << tp.t << ',' << tp.gamma[0].real() << ',' << tp.gamma[0].imag() << ','
                    << tp.gamma[1].real() << ',' << tp.gamma[1].imag() << '\n';
        v["csv"] = o.csv;
    }
    r["certificate"] = "numerical-evidence";
    r["truncation"] = truncation;
    r["tol"] = tol;
    r["verdict"] = v;
}

// ---------------------------------------------------------------- driver

struct Command {
    std::string name;
    std::string help;
    std::vector<std::string> kinds;
    std::function<void(const Manifest&, const Options&, Json&)> fn;
};

const std::vector<Command>& commands()
{
    static const std::vector<Command> list = {
        {"resonance", "resonant monomials and resonance lattice", {"eigen"}, cmd_resonance},
        {"eigen-ratio", "integer eigenvalue ratios from an index matrix", {"eigen"}, cmd_eigen_ratio},
        {"star", "condition (*) separation test", {"eigen"}, cmd_star},
        {"invariant-series", "invariant series of a diagonal or Jordan linear map", {"eigen"}, cmd_invariant_series},
        {"linearize", "averaging linearizer of a finite group", {"group", "diffeo"}, cmd_linearize},
        {"invariance", "f o G - f residual", {"diffeo"}, cmd_invariance},
        {"first-integral", "formal first integral check", {"field"}, cmd_first_integral},
        {"symmetries", "infinitesimal symmetries of a tuple of series", {"series"}, cmd_symmetries},
        {"blowup", "blow-up at the origin and divisor restriction", {"field"}, cmd_blowup},
        {"projectivize", "induced foliation of a homogeneous field on CP2", {"field"}, cmd_projectivize},
        {"darboux", "invariant algebraic curves and Darboux integrals", {"darboux", "field"}, cmd_darboux},
        {"holonomy", "numerical holonomy of the x3-axis", {"holonomy", "field"}, cmd_holonomy},
        {"orbits", "orbits and periodic-point density", {"orbit", "diffeo"}, cmd_orbits},
        {"order", "order of a formal diffeomorphism", {"diffeo", "orbit"}, cmd_order},
    };
    return list;
}

Json flags_echo(const Options& o)
{
    Json f = Json::object();
    auto put = [&](const char* k, const auto& v) {
        if (v) f[k] = *v;
    };
    put("truncation", o.truncation);
    put("max_degree", o.max_degree);
    put("tol", o.tol);
    put("seed", o.seed);
    put("chart", o.chart);
    put("grid", o.grid);
    put("radius", o.radius);
    put("max_order", o.max_order);
    put("max_period", o.max_period);
    put("max", o.max);
    put("factorial", o.factorial);
    put("max_iter", o.max_iter);
    if (!o.csv.empty()) f["csv"] = o.csv;
    return f;
}

void emit(const Json& report, const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string text = report.dump(2) + "\n";
    if (o.output.empty() || o.output == "-") {
        out << text;
        return;
    }
    std::ofstream f(o.output);
    if (!f) {
        err << "foliage: cannot write report to '" << o.output << "'\n";
        out << text;
        return;
    }
    f << text;
}

} // namespace

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& c : commands()) n.push_back(c.name);
        return n;
    }();
    return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"foliage: computations for holomorphic foliations and formal diffeomorphisms", "foliage"};
    app.require_subcommand(1);
    Options o;
    const Command* chosen = nullptr;
    for (const auto& c : commands()) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--input,-i", o.input, "manifest file (JSON)")->required();
        sub->add_option("--output,-o", o.output, "report file (default: stdout)");
        sub->add_option("--truncation", o.truncation, "truncation order N (overrides the manifest)");
        sub->add_option("--max-degree", o.max_degree, "degree bound (overrides the manifest)");
        sub->add_option("--tol", o.tol, "numerical tolerance (overrides the manifest)");
        sub->add_option("--seed", o.seed, "grid seed (overrides the manifest)");
        if (c.name == "blowup" || c.name == "projectivize") sub->add_option("--chart", o.chart, "chart 1, 2 or 3");
        if (c.name == "holonomy") {
            sub->add_option("--grid", o.grid, "number of section points");
            sub->add_option("--radius", o.radius, "section radius");
            sub->add_option("--max-order", o.max_order, "periodicity probe bound");
            sub->add_option("--csv", o.csv, "dump trajectories as CSV");
        }
        if (c.name == "orbits") {
            sub->add_option("--grid", o.grid, "number of grid points");
            sub->add_option("--radius", o.radius, "radius of the ball U");
            sub->add_option("--max-period", o.max_period, "period bound m");
            sub->add_option("--max-iter", o.max_iter, "iterations per direction");
        }
        if (c.name == "order") {
            sub->add_option("--max", o.max, "largest order tried");
            sub->add_option("--factorial", o.factorial, "also test G^(m!) = id for this m <= 10");
        }
        sub->callback([&chosen, &c] { chosen = &c; });
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "foliage: " << e.what() << "\n";
        if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
        else err << app.help();
        return kExitInput;
    }
    if (!chosen) {
        err << app.help();
        return kExitInput;
    }

    const auto start = std::chrono::steady_clock::now();
    Json report{{"schema", "foliage/1"}, {"command", chosen->name}, {"input", o.input}, {"flags", flags_echo(o)}};
    auto elapsed = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };
    auto fail = [&](int code, const std::string& kind, const std::string& message, Json extra) {
        Json e{{"code", code}, {"kind", kind}, {"message", message}};
        for (auto& [k, v] : extra.items()) e[k] = v;
        report["status"] = "error";
        report["error"] = e;
        report["timing_ms"] = elapsed();
        err << "foliage " << chosen->name << ": " << message << "\n";
        emit(report, o, out, err);
        return code;
    };
    try {
        Json raw = load_json_file(o.input);
        report["manifest"] = raw;
        Manifest m = validate(raw, chosen->kinds);
        report["backend"] = to_string(m.backend);
        chosen->fn(m, o, report);
        report["status"] = "ok";
        report["timing_ms"] = elapsed();
        emit(report, o, out, err);
        return kExitOk;
    } catch (const ManifestError& e) {
        return fail(kExitInput, "input", e.what(), Json{{"field", e.field()}});
    } catch (const NumericalFailure& e) {
        return fail(kExitNumerical, "numerical", e.what(), e.detail());
    } catch (const IntegrationFailure& e) {
        return fail(kExitNumerical, "numerical", e.what(), Json{{"last_t", e.last_t()}});
    } catch (const std::invalid_argument& e) {
        return fail(kExitInput, "input", e.what(), Json::object());
    } catch (const std::exception& e) {
        return fail(kExitNumerical, "numerical", e.what(), Json::object());
    }
}

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace foliage::cli
