#include "foliage/monomial.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace foliage {

namespace {

std::size_t binom(long n, long k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (long i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

void enumerate_degree(int d, int n, MultiIndex& cur, int pos, std::vector<MultiIndex>& out)
{
    if (pos == n - 1) {
        cur[pos] = d;
        out.push_back(cur);
        return;
    }
    for (int a = d; a >= 0; --a) {
        cur[pos] = a;
        enumerate_degree(d - a, n, cur, pos + 1, out);
    }
}

} // namespace

int degree(std::span<const int> e)
{
    return std::accumulate(e.begin(), e.end(), 0);
}

std::size_t monomials_of_degree(int d, int n)
{
    if (d < 0) return 0;
    if (n == 0) return d == 0 ? 1 : 0;
    return binom(d + n - 1, n - 1);
}

std::size_t monomials_below(int d, int n)
{
    if (d <= 0) return 0;
    return binom(d - 1 + n, n);
}

std::size_t monomial_rank(std::span<const int> e)
{
    const int n = static_cast<int>(e.size());
    int rem = degree(e);
    std::size_t r = monomials_below(rem, n);
    for (int k = 0; k + 1 < n; ++k) {
        for (int a = rem; a > e[k]; --a) r += monomials_of_degree(rem - a, n - k - 1);
        rem -= e[k];
    }
    return r;
}

std::vector<MultiIndex> monomials_of_degree_list(int d, int n)
{
    std::vector<MultiIndex> out;
    if (n == 0) {
        if (d == 0) out.emplace_back();
        return out;
    }
    MultiIndex cur(n, 0);
    enumerate_degree(d, n, cur, 0, out);
    return out;
}

MonomialBasis::MonomialBasis(int arity, int order) : arity_(arity), order_(order)
{
    if (arity < 0 || order < 0) throw std::invalid_argument("negative arity or order");
    for (int d = 0; d <= order; ++d) {
        for (auto& e : monomials_of_degree_list(d, arity)) {
            exponents_.push_back(std::move(e));
            degrees_.push_back(d);
        }
    }
}

} // namespace foliage
