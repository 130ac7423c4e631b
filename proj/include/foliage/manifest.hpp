#pragma once

#include "foliage/formal_diffeo.hpp"
#include "foliage/resonance.hpp"
#include "foliage/series.hpp"
#include "foliage/vector_field.hpp"

#include <json.hpp>

#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>

namespace foliage {

using Json = nlohmann::ordered_json;

// Malformed input; field is a JSON path such as "components[0][2].re".
class ManifestError : public std::invalid_argument {
public:
    ManifestError(std::string field, const std::string& message)
        : std::invalid_argument(field.empty() ? message : field + ": " + message), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class Backend { exact, floating };

std::string to_string(Backend b);

// Object reader that remembers which keys were consumed, so leftovers can
// be reported as unknown fields.
class Fields {
public:
    Fields(const Json& object, std::string path);

    bool has(const std::string& key) const;
    const Json& require(const std::string& key);
    const Json* optional(const std::string& key);
    // Throws ManifestError on any key not read so far.
    void finish() const;

    std::string path(const std::string& key) const;
    const std::string& path() const { return path_; }

private:
    const Json& obj_;
    std::string path_;
    std::vector<std::string> seen_;
};

Json load_json_file(const std::string& filename);

int read_int(const Json& j, const std::string& path, std::optional<int> min = std::nullopt);
double read_double(const Json& j, const std::string& path);
bool read_bool(const Json& j, const std::string& path);
Rational read_rational(const Json& j, const std::string& path);
// "p/q" string, integer, or {"re", "im"} / {"coords": [4]} object.
Exact read_exact(const Json& j, const std::string& path);
Float read_float(const Json& j, const std::string& path);

template <class S>
S read_scalar(const Json& j, const std::string& path)
{
    if constexpr (ScalarTraits<S>::exact)
        return read_exact(j, path);
    else
        return read_float(j, path);
}

// Series literal: [{"exponents": [...], "re": ..., "im": ...}, ...]; exact
// terms may give "coords": [a0, a1, a2, a3] in the basis 1, z, z^2, z^3 of
// Q(exp(2 pi i / 12)) instead of re/im.
template <class S>
TruncatedSeries<S> read_series(const Json& j, int arity, int order, const std::string& path);
template <class S>
std::vector<TruncatedSeries<S>> read_series_list(const Json& j, int arity, int order, const std::string& path);

PolarRational read_eigenvalue(const Json& j, const std::string& path);
std::vector<IntVector> read_int_matrix(const Json& j, const std::string& path);

Json write_rational(const Rational& r);
Json write_integer(const Integer& v);
Json write_exact(const Exact& v);
Json write_float(const Float& v);
Json write_complex_point(std::span<const Complex> x);
Json write_eigenvalue(const PolarRational& v);
template <class S>
Json write_series(const TruncatedSeries<S>& s);
template <class S>
Json write_field(const PolyVectorField<S>& X);

extern template TruncatedSeries<Exact> read_series<Exact>(const Json&, int, int, const std::string&);
extern template TruncatedSeries<Float> read_series<Float>(const Json&, int, int, const std::string&);
extern template std::vector<TruncatedSeries<Exact>> read_series_list<Exact>(const Json&, int, int, const std::string&);
extern template std::vector<TruncatedSeries<Float>> read_series_list<Float>(const Json&, int, int, const std::string&);
extern template Json write_series<Exact>(const TruncatedSeries<Exact>&);
extern template Json write_series<Float>(const TruncatedSeries<Float>&);
extern template Json write_field<Exact>(const PolyVectorField<Exact>&);
extern template Json write_field<Float>(const PolyVectorField<Float>&);

} // namespace foliage
