#pragma once

#include "foliage/vector_field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace foliage {

// Algebraic solution {g = 0} of a planar field: X(g) = g K.
struct InvariantCurve {
    ExactSeries g;  // leading graded-lex coefficient 1
    ExactSeries K;
    int kappa = 0;  // order of g at the origin (0 when g(0) != 0)
};

struct CurveSearchReport {
    std::vector<InvariantCurve> curves;
    std::size_t seeds = 0;
    std::size_t branches = 0;
    std::size_t dead_branches = 0;
    std::size_t families = 0;        // branches whose parameter stayed free (instantiated at 1)
    std::size_t pruned_kernels = 0;  // kernel directions skipped while a parameter was active
    bool overflow = false;
    bool linear_eigenvalues_in_field = true;
};

struct CurveSearchOptions {
    std::size_t branch_cap = 256;
};

// Degree-by-degree search for invariant curves of degree <= d, seeded at
// eigenpairs of the linear part and at g(0) != 0 with K(0) = 0.
CurveSearchReport invariant_curves(const ExactField& X, int degree_bound, const CurveSearchOptions& options = {});

enum class IntegralKind { rational, darboux };

struct DarbouxIntegral {
    std::vector<InvariantCurve> curves;
    std::vector<Exact> exponents;
    std::optional<std::vector<Integer>> integer_exponents;
    IntegralKind kind = IntegralKind::darboux;
    std::size_t nullity = 0;
    // For rational integrals f = P / Q.
    std::optional<ExactSeries> numerator;
    std::optional<ExactSeries> denominator;
    bool verified = false;  // sum c_i K_i == 0 (and Q X(P) - P X(Q) == 0 when rational)
};

// Nonzero c with sum c_i K_i = 0, from the cofactor nullspace; nullopt when
// the cofactors are independent. Curves are re-checked against X.
std::optional<DarbouxIntegral> darboux_assemble(const ExactField& X, const std::vector<InvariantCurve>& curves);

std::string to_string(IntegralKind kind);

} // namespace foliage
