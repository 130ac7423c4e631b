#pragma once

#include "foliage/vector_field.hpp"

#include <optional>
#include <utility>

namespace foliage {

// Blow-up of C^3 at 0. Chart k (1..3) has x_k = z_k and x_j = z_k z_j for
// j != k; its divisor coordinates are the ratios x_j / x_k, j != k, in
// increasing j.
struct ChartField {
    int chart = 1;
    ExactField field = ExactField::zero(2, 0);
    int nu = 1;
};

struct BlowupResult {
    int nu = 0;
    bool dicritical = false;
    std::optional<ChartField> chart_field;
    ExactField total_transform = ExactField::zero(3, 0);
};

struct ProjectivizeResult {
    ChartField chart_field;
    bool radial_multiple = false;         // X~ vanishes identically
    bool common_factor_suspected = false;  // components share a factor on two random lines
};

// P / Q with P, Q homogeneous of equal degree in (x1, x2, x3).
struct RationalFunctionCP2 {
    ExactSeries numerator;
    ExactSeries denominator;
};

struct WeakIntegralVerdict {
    ExactSeries residual;  // Q X(P) - P X(Q)
    bool vanishes = false;
    std::optional<bool> cofactor_matches;  // cofactor(X, g) == h
    std::optional<bool> curve_identity;    // X~(g~) = g~ (-kappa a~ + h~) in chart 1
};

ProjectivizeResult projectivize_homogeneous(const ExactField& X, int chart);
BlowupResult blowup_divisor_restriction(const ExactField& X, int chart);
ChartField chart_transition(const ChartField& cf, int to_chart);
WeakIntegralVerdict weak_first_integral_check(const ExactField& X, const RationalFunctionCP2& f,
                                              const std::optional<std::pair<ExactSeries, ExactSeries>>& curve = std::nullopt);

// dE_k(z) X~(z) - X(E_k(z)); zero for every total transform.
ExactField pushforward_residual(const ExactField& X, const ExactField& total_transform, int chart);

// Dicriticality straight from the nu-jets: x_j a_k == x_k a_j for all j, k.
bool is_dicritical(const ExactField& X);

// Shared factor heuristic: gcd of the components restricted to two seeded
// random lines has positive degree on both.
bool common_factor_suspected(const ExactField& X, unsigned seed = 7);

} // namespace foliage
