#include "foliage/vector_field.hpp"

namespace foliage {

GenericFormReport generic_form_analysis(const ExactField& X, const std::optional<std::vector<ExactSeries>>& candidate)
{
    GenericFormReport r;
    const int n = X.arity();
    auto nu = X.nu();
    r.singular = !nu || *nu >= 1;
    if (!r.singular) r.failures.push_back("origin is not a singular point");

    auto A = X.linear_part();
    r.linear_part_diagonal = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !A[i][j].is_zero()) r.linear_part_diagonal = false;
    r.linear_part_nonsingular = !determinant(A).is_zero();
    if (!r.linear_part_diagonal) r.failures.push_back("linear part is not diagonal");
    if (!r.linear_part_nonsingular) r.failures.push_back("linear part is singular");

    r.hyperplanes_invariant = true;
    for (int i = 0; i < n; ++i)
        for (const auto& [e, c] : X[i].terms())
            if (e[i] == 0) {
                r.hyperplanes_invariant = false;
                r.failures.push_back("component " + std::to_string(i + 1) + " is not divisible by x" +
                                     std::to_string(i + 1));
                break;
            }

    for (int i = 0; i < n; ++i) {
        r.lambda.push_back(A[i][i]);
        r.lambda_polar.push_back(A[i][i].is_zero() ? std::nullopt : PolarRational::from_exact(A[i][i]));
    }
    const int top = std::max(X.degree(), 0);
    for (int d = 0; d <= top; ++d) {
        auto part = X.homogeneous_part(d);
        if (!part.is_zero()) r.homogeneous_parts.emplace_back(d, part.polynomial());
    }
    r.is_generic = r.failures.empty();

    if (candidate) {
        std::vector<IntVector> rows;
        for (const auto& f : *candidate) {
            auto nz = f.nonzero_indices();
            if (nz.empty()) {
                r.failures.push_back("candidate component is identically zero");
                rows.clear();
                break;
            }
            MonomialBasis basis(f.arity(), f.order());
            r.lowest_indices.push_back(basis.exponents(nz.front()));
            IntVector row;
            for (int q : r.lowest_indices.back()) row.push_back(q);
            rows.push_back(std::move(row));
        }
        if (!rows.empty() && static_cast<int>(rows.size()) == n - 1) {
            try {
                r.integer_ratios = eigen_ratio(rows);
            } catch (const std::invalid_argument& e) {
                r.failures.push_back(std::string("eigen ratio: ") + e.what());
            }
        }
        if (r.integer_ratios) {
            bool ok = true;
            for (const auto& row : rows) {
                Exact s;
                for (int i = 0; i < n; ++i) s += Exact(Rational(row[i])) * r.lambda[i];
                if (!s.is_zero()) ok = false;
            }
            const auto& k = *r.integer_ratios;
            for (int i = 0; i < n && ok; ++i)
                for (int j = 0; j < n; ++j)
                    if (r.lambda[i] * Exact(Rational(k[j])) != r.lambda[j] * Exact(Rational(k[i]))) ok = false;
            r.ratios_consistent = ok;
        }
    }

    if (n == 3) {
        EigenTuple lam;
        for (const auto& p : r.lambda_polar)
            if (p) lam.push_back(*p);
        if (static_cast<int>(lam.size()) == n) {
            r.star_evaluated = true;
            r.star = star_condition(lam);
        }
    }
    return r;
}

} // namespace foliage
