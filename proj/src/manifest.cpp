#include "foliage/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace foliage {

std::string to_string(Backend b)
{
    return b == Backend::exact ? "exact" : "float";
}

Fields::Fields(const Json& object, std::string path) : obj_(object), path_(std::move(path))
{
    if (!obj_.is_object()) throw ManifestError(path_, "expected an object");
}

std::string Fields::path(const std::string& key) const
{
    return path_.empty() ? key : path_ + "." + key;
}

bool Fields::has(const std::string& key) const
{
    return obj_.contains(key);
}

const Json& Fields::require(const std::string& key)
{
    if (!obj_.contains(key)) throw ManifestError(path(key), "required field is missing");
    seen_.push_back(key);
    return obj_.at(key);
}

const Json* Fields::optional(const std::string& key)
{
    if (!obj_.contains(key)) return nullptr;
    seen_.push_back(key);
    return &obj_.at(key);
}

void Fields::finish() const
{
    for (const auto& [key, value] : obj_.items())
        if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
            throw ManifestError(path(key), "unknown field");
}

Json load_json_file(const std::string& filename)
{
    std::ifstream in(filename);
    if (!in) throw ManifestError("", "cannot open input file '" + filename + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ManifestError("", std::string("malformed JSON: ") + e.what());
    }
}

int read_int(const Json& j, const std::string& path, std::optional<int> min)
{
    if (!j.is_number_integer()) throw ManifestError(path, "expected an integer");
    const long long v = j.get<long long>();
    if (v > 1'000'000'000LL || v < -1'000'000'000LL) throw ManifestError(path, "integer out of range");
    if (min && v < *min) throw ManifestError(path, "must be at least " + std::to_string(*min));
    return static_cast<int>(v);
}

double read_double(const Json& j, const std::string& path)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        try {
            return to_double(parse_rational(j.get<std::string>()));
        } catch (const std::invalid_argument& e) {
            throw ManifestError(path, e.what());
        }
    }
    throw ManifestError(path, "expected a number");
}

bool read_bool(const Json& j, const std::string& path)
{
    if (!j.is_boolean()) throw ManifestError(path, "expected true or false");
    return j.get<bool>();
}

Rational read_rational(const Json& j, const std::string& path)
{
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ManifestError(path, e.what());
        }
    }
    throw ManifestError(path, "expected a rational as \"p/q\" string or integer");
}

namespace {

Exact read_exact_parts(Fields& f)
{
    if (f.has("coords")) {
        if (f.has("re") || f.has("im")) throw ManifestError(f.path("coords"), "coords cannot be combined with re/im");
        const Json& c = f.require("coords");
        if (!c.is_array() || c.size() != 4) throw ManifestError(f.path("coords"), "expected four rational coordinates");
        std::array<Rational, 4> a;
        for (int k = 0; k < 4; ++k) a[k] = read_rational(c[k], f.path("coords") + "[" + std::to_string(k) + "]");
        return Exact(a);
    }
    Rational re = 0, im = 0;
    if (const Json* v = f.optional("re")) re = read_rational(*v, f.path("re"));
    if (const Json* v = f.optional("im")) im = read_rational(*v, f.path("im"));
    return Exact::gaussian(re, im);
}

Float read_float_parts(Fields& f)
{
    double re = 0, im = 0;
    if (const Json* v = f.optional("re")) re = read_double(*v, f.path("re"));
    if (const Json* v = f.optional("im")) im = read_double(*v, f.path("im"));
    return Float(re, im);
}

} // namespace

Exact read_exact(const Json& j, const std::string& path)
{
    if (j.is_object()) {
        Fields f(j, path);
        Exact v = read_exact_parts(f);
        f.finish();
        return v;
    }
    if (j.is_number_float()) throw ManifestError(path, "exact backend needs rationals as \"p/q\" strings");
    return Exact(read_rational(j, path));
}

Float read_float(const Json& j, const std::string& path)
{
    if (j.is_object()) {
        Fields f(j, path);
        Float v = read_float_parts(f);
        f.finish();
        return v;
    }
    return Float(read_double(j, path), 0.0);
}

template <class S>
TruncatedSeries<S> read_series(const Json& j, int arity, int order, const std::string& path)
{
    if (!j.is_array()) throw ManifestError(path, "expected a series literal (list of terms)");
    TruncatedSeries<S> s(arity, order);
    for (std::size_t t = 0; t < j.size(); ++t) {
        const std::string tp = path + "[" + std::to_string(t) + "]";
        Fields f(j[t], tp);
        const Json& e = f.require("exponents");
        if (!e.is_array() || static_cast<int>(e.size()) != arity)
            throw ManifestError(f.path("exponents"), "expected " + std::to_string(arity) + " exponents");
        MultiIndex idx;
        int deg = 0;
        for (std::size_t k = 0; k < e.size(); ++k) {
            idx.push_back(read_int(e[k], f.path("exponents") + "[" + std::to_string(k) + "]", 0));
            deg += idx.back();
        }
        if (deg > order) throw ManifestError(f.path("exponents"), "term degree exceeds the truncation order");
        S c;
        if constexpr (ScalarTraits<S>::exact)
            c = read_exact_parts(f);
        else
            c = read_float_parts(f);
        f.finish();
        s.add_term(idx, c);
    }
    return s;
}

template <class S>
std::vector<TruncatedSeries<S>> read_series_list(const Json& j, int arity, int order, const std::string& path)
{
    if (!j.is_array()) throw ManifestError(path, "expected a list of series literals");
    std::vector<TruncatedSeries<S>> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(read_series<S>(j[i], arity, order, path + "[" + std::to_string(i) + "]"));
    return out;
}

PolarRational read_eigenvalue(const Json& j, const std::string& path)
{
    if (!j.is_object()) {
        Rational r = read_rational(j, path);
        if (sgn(r) == 0) throw ManifestError(path, "eigenvalues must be nonzero");
        return PolarRational::from_rational(r);
    }
    Fields f(j, path);
    Rational mag = read_rational(f.require("magnitude"), f.path("magnitude"));
    Rational turn = 0;
    if (const Json* t = f.optional("turn")) turn = read_rational(*t, f.path("turn"));
    f.finish();
    if (sgn(mag) <= 0) throw ManifestError(f.path("magnitude"), "magnitude must be positive");
    return PolarRational(mag, turn);
}

std::vector<IntVector> read_int_matrix(const Json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) throw ManifestError(path, "expected a nonempty list of integer rows");
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array()) throw ManifestError(rp, "expected a row of integers");
        IntVector row;
        for (std::size_t k = 0; k < j[i].size(); ++k) {
            const Json& v = j[i][k];
            const std::string vp = rp + "[" + std::to_string(k) + "]";
            if (v.is_number_integer())
                row.emplace_back(static_cast<long>(v.get<long long>()));
            else if (v.is_string()) {
                Rational r = read_rational(v, vp);
                if (r.get_den() != 1) throw ManifestError(vp, "expected an integer");
                row.push_back(r.get_num());
            } else
                throw ManifestError(vp, "expected an integer");
        }
        if (!rows.empty() && row.size() != rows[0].size()) throw ManifestError(rp, "ragged matrix row");
        rows.push_back(std::move(row));
    }
    return rows;
}

Json write_rational(const Rational& r)
{
    return to_string(r);
}

Json write_integer(const Integer& v)
{
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

Json write_exact(const Exact& v)
{
    if (v.is_gaussian()) return Json{{"re", to_string(v.gaussian_re())}, {"im", to_string(v.gaussian_im())}};
    Json c = Json::array();
    for (const auto& r : v.coords()) c.push_back(to_string(r));
    return Json{{"coords", c}};
}

Json write_float(const Float& v)
{
    return Json{{"re", v.real()}, {"im", v.imag()}};
}

Json write_complex_point(std::span<const Complex> x)
{
    Json a = Json::array();
    for (const auto& v : x) a.push_back(write_float(v));
    return a;
}

Json write_eigenvalue(const PolarRational& v)
{
    return Json{{"magnitude", to_string(v.magnitude())}, {"turn", to_string(v.turn())}};
}

template <class S>
Json write_series(const TruncatedSeries<S>& s)
{
    Json out = Json::array();
    for (const auto& [e, c] : s.terms()) {
        Json t{{"exponents", e}};
        Json v;
        if constexpr (ScalarTraits<S>::exact)
            v = write_exact(c);
        else
            v = write_float(c);
        for (auto& [k, val] : v.items()) t[k] = val;
        out.push_back(std::move(t));
    }
    return out;
}

template <class S>
Json write_field(const PolyVectorField<S>& X)
{
    Json comps = Json::array();
    for (const auto& c : X.components()) comps.push_back(write_series(c));
    return Json{{"arity", X.arity()}, {"truncation", X.order()}, {"components", comps}};
}

template TruncatedSeries<Exact> read_series<Exact>(const Json&, int, int, const std::string&);
template TruncatedSeries<Float> read_series<Float>(const Json&, int, int, const std::string&);
template std::vector<TruncatedSeries<Exact>> read_series_list<Exact>(const Json&, int, int, const std::string&);
template std::vector<TruncatedSeries<Float>> read_series_list<Float>(const Json&, int, int, const std::string&);
template Json write_series<Exact>(const TruncatedSeries<Exact>&);
template Json write_series<Float>(const TruncatedSeries<Float>&);
template Json write_field<Exact>(const PolyVectorField<Exact>&);
template Json write_field<Float>(const PolyVectorField<Float>&);

} // namespace foliage
