#include "foliage/cli.hpp"
#include "foliage/resonance.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace foliage;

namespace {

// Eigenvalues come in as (magnitude, turn) string pairs, e.g. ("1", "1/2").
EigenTuple to_tuple(const std::vector<std::pair<std::string, std::string>>& values)
{
    EigenTuple lam;
    for (const auto& [m, t] : values) lam.emplace_back(parse_rational(m), parse_rational(t));
    return lam;
}

std::vector<long> to_longs(const IntVector& v)
{
    std::vector<long> out;
    for (const auto& x : v) {
        if (!x.fits_slong_p()) throw std::overflow_error("integer does not fit in a machine word");
        out.push_back(x.get_si());
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "foliage: truncated power series, resonance and foliation tools";

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a foliage subcommand; returns (exit_code, stdout, stderr).");

    m.def("subcommands", &cli::subcommands);

    m.def(
        "eigen_ratio",
        [](const std::vector<std::vector<long>>& rows) {
            std::vector<IntVector> a;
            for (const auto& r : rows) {
                IntVector row;
                for (long v : r) row.emplace_back(v);
                a.push_back(std::move(row));
            }
            return to_longs(eigen_ratio(a));
        },
        py::arg("rows"));

    m.def(
        "star_condition",
        [](const std::vector<std::pair<std::string, std::string>>& values) -> std::optional<std::pair<int, std::string>> {
            auto w = star_condition(to_tuple(values));
            if (!w) return std::nullopt;
            return std::pair{static_cast<int>(w->index) + 1, to_string(w->turn)};
        },
        py::arg("eigenvalues"), "1-based index and direction turn, or None.");

    m.def(
        "resonant_monomials",
        [](const std::vector<std::pair<std::string, std::string>>& values, int bound) {
            auto rep = resonant_monomials(to_tuple(values), bound);
            std::vector<std::vector<long>> basis;
            for (const auto& row : rep.lattice_basis) basis.push_back(to_longs(row));
            return py::make_tuple(rep.resonant, basis);
        },
        py::arg("eigenvalues"), py::arg("degree_bound"));
}
