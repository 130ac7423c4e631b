#pragma once

#include "foliage/series.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace foliage {

// Sparse float copy of a truncated polynomial, for repeated evaluation.
class SparsePolynomial {
public:
    SparsePolynomial() = default;
    template <class S>
    explicit SparsePolynomial(const TruncatedSeries<S>& p) : arity_(p.arity()), degree_(std::max(p.degree(), 0))
    {
        for (const auto& [e, c] : p.terms()) terms_.push_back({e, ScalarTraits<S>::to_complex(c)});
    }

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    Complex operator()(std::span<const Complex> x) const;

private:
    struct Term {
        MultiIndex e;
        Complex c;
    };
    int arity_ = 0;
    int degree_ = 0;
    std::vector<Term> terms_;
};

// Deterministic low-discrepancy points in the ball |x| <= radius of C^n
// (Euclidean norm on R^{2n}). Coordinates come from a Halton sequence in
// the first 2n prime bases, started at index seed + 1; each cube sample is
// mapped radially so the ball is covered with uniform radial density.
std::vector<std::vector<Complex>> halton_ball(int n, std::size_t count, double radius, std::uint64_t seed = 0);

double radical_inverse(std::uint64_t index, unsigned base);

double norm(std::span<const Complex> x);
double distance(std::span<const Complex> a, std::span<const Complex> b);

} // namespace foliage
