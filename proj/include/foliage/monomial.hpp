#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace foliage {

using MultiIndex = std::vector<int>;

int degree(std::span<const int> e);

// Number of monomials of degree exactly d in n variables.
std::size_t monomials_of_degree(int d, int n);
// Number of monomials of degree < d in n variables.
std::size_t monomials_below(int d, int n);

// Position of an exponent vector in the graded-lex enumeration: degree first,
// then lexicographically decreasing in (e_1, e_2, ...). Independent of any
// truncation order, so a series truncated at N is a prefix of one at N+1.
std::size_t monomial_rank(std::span<const int> e);

// Enumeration of all monomials of degree <= order in `arity` variables.
class MonomialBasis {
public:
    int arity() const { return arity_; }
    int order() const { return order_; }
    std::size_t size() const { return degrees_.size(); }
    const MultiIndex& exponents(std::size_t idx) const { return exponents_[idx]; }
    int degree(std::size_t idx) const { return degrees_[idx]; }
    // First index of degree d (d may be order+1, giving size()).
    std::size_t degree_begin(int d) const { return monomials_below(d, arity_); }

    MonomialBasis(int arity, int order);

private:
    int arity_;
    int order_;
    std::vector<MultiIndex> exponents_;
    std::vector<int> degrees_;
};

// All exponent vectors of degree exactly d in n variables, in graded-lex order.
std::vector<MultiIndex> monomials_of_degree_list(int d, int n);

} // namespace foliage
