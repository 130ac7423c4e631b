#include "foliage/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace foliage {

std::vector<Complex> numeric_roots(const std::vector<Complex>& coeffs)
{
    std::vector<Complex> c = coeffs;
    while (!c.empty() && c.back() == Complex(0.0)) c.pop_back();
    const int n = static_cast<int>(c.size()) - 1;
    if (n < 1) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<Complex> roots;
    for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()[i]);
    return roots;
}

std::vector<Exact> field_roots(const UniPoly<Exact>& p)
{
    std::vector<Exact> out;
    if (p.degree() < 1) return out;
    // Square-free part keeps the numerics well conditioned.
    UniPoly<Exact> sq = divmod(p, poly_gcd(p, p.derivative())).first;
    std::vector<Complex> c1, c5;
    for (const auto& v : sq.coeffs()) {
        c1.push_back(v.embed(1));
        c5.push_back(v.embed(5));
    }
    const auto r1 = numeric_roots(c1);
    const auto r5 = numeric_roots(c5);
    for (const auto& a : r1) {
        for (const auto& b : r5) {
            auto cand = Cyclo::recognize(a, b);
            if (!cand || !sq(*cand).is_zero()) continue;
            if (std::find(out.begin(), out.end(), *cand) == out.end()) out.push_back(*cand);
        }
    }
    return out;
}

} // namespace foliage
