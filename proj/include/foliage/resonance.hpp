#pragma once

#include "foliage/rational.hpp"
#include "foliage/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace foliage {

// magnitude * exp(2 pi i * turn) with rational magnitude > 0 and turn in [0,1).
class PolarRational {
public:
    PolarRational() : magnitude_(1), turn_(0) {}
    PolarRational(const Rational& magnitude, const Rational& turn);

    // Nonzero rationals: sign goes into the turn.
    static PolarRational from_rational(const Rational& r);
    static PolarRational root_of_unity(long k, long m) { return PolarRational(1, make_rational(k, m)); }

    const Rational& magnitude() const { return magnitude_; }
    const Rational& turn() const { return turn_; }

    bool is_one() const { return magnitude_ == 1 && sgn(turn_) == 0; }
    Complex to_complex() const;
    // Exact image in Q(zeta_12), available when 12*turn is an integer.
    std::optional<Exact> to_exact() const;
    static std::optional<PolarRational> from_exact(const Exact& v);

    PolarRational inverse() const;
    friend PolarRational operator*(const PolarRational& a, const PolarRational& b);
    friend bool operator==(const PolarRational& a, const PolarRational& b)
    {
        return a.magnitude_ == b.magnitude_ && a.turn_ == b.turn_;
    }
    std::string str() const;

private:
    Rational magnitude_;
    Rational turn_;
};

PolarRational pow(const PolarRational& base, long e);

using EigenTuple = std::vector<PolarRational>;
using IntVector = std::vector<Integer>;

// Lambda^Q for a multi-index Q (negative entries allowed).
PolarRational power_product(const EigenTuple& lambda, const std::vector<long>& q);

struct ResonanceReport {
    std::vector<MultiIndex> resonant;  // graded-lex order, 1 <= |Q| <= bound
    std::vector<IntVector> lattice_basis;  // Hermite-reduced rows
};

// Basis of {Q in Z^n : Lambda^Q = 1}.
std::vector<IntVector> resonance_lattice(const EigenTuple& lambda);
bool lattice_contains(const std::vector<IntVector>& hermite_basis, const std::vector<long>& q);

ResonanceReport resonant_monomials(const EigenTuple& lambda, int degree_bound);

// Integer kernel generator k of an (n-1) x n integer matrix of full row rank,
// from maximal minors; gcd 1 and first nonzero entry positive.
IntVector eigen_ratio(const std::vector<IntVector>& rows);

struct StarWitness {
    std::size_t index;  // 0-based position of the separated eigenvalue
    Rational turn;      // direction v = exp(2 pi i * turn)
};

std::optional<StarWitness> star_condition(const EigenTuple& lambda);

// Basis of {f : f o G = f, deg f <= bound} for G = diag(lambda).
std::vector<ExactSeries> invariant_series_diagonal(const EigenTuple& lambda, int degree_bound);
// Same for the Jordan block G(x1, x2) = (lambda x1 + x2, lambda x2).
std::vector<ExactSeries> invariant_series_jordan(const PolarRational& lambda, int degree_bound);

// Integer matrix helpers used by the lattice code.
std::vector<IntVector> integer_kernel(const std::vector<IntVector>& a, std::size_t cols);
std::vector<IntVector> hermite_rows(std::vector<IntVector> rows);

} // namespace foliage
