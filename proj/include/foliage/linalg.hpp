#pragma once

#include "foliage/scalar.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace foliage {

template <class S>
using Matrix = std::vector<std::vector<S>>;

template <class S>
Matrix<S> zero_matrix(std::size_t rows, std::size_t cols)
{
    return Matrix<S>(rows, std::vector<S>(cols, S{}));
}

template <class S>
Matrix<S> identity_matrix(std::size_t n)
{
    auto m = zero_matrix<S>(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = ScalarTraits<S>::from_int(1);
    return m;
}

template <class S>
struct RrefResult {
    Matrix<S> reduced;
    // T with T * input = reduced.
    Matrix<S> transform;
    std::vector<std::size_t> pivots;
};

namespace detail {

template <class S>
bool negligible(const S& v, double eps)
{
    return ScalarTraits<S>::near_zero(v, eps);
}

} // namespace detail

// Gauss-Jordan elimination. Exact backend pivots on the first nonzero entry;
// float backend uses partial pivoting and treats |v| <= eps as zero.
template <class S>
RrefResult<S> rref(Matrix<S> m, double eps = kDefaultEpsilon)
{
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    RrefResult<S> out{{}, identity_matrix<S>(rows), {}};
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = rows;
        if constexpr (ScalarTraits<S>::exact) {
            for (std::size_t i = r; i < rows; ++i)
                if (!m[i][c].is_zero()) {
                    piv = i;
                    break;
                }
        } else {
            double best = eps;
            for (std::size_t i = r; i < rows; ++i)
                if (std::abs(m[i][c]) > best) {
                    best = std::abs(m[i][c]);
                    piv = i;
                }
        }
        if (piv == rows) {
            if constexpr (!ScalarTraits<S>::exact)
                for (std::size_t i = r; i < rows; ++i) m[i][c] = S{};
            continue;
        }
        std::swap(m[piv], m[r]);
        std::swap(out.transform[piv], out.transform[r]);
        const S inv = ScalarTraits<S>::from_int(1) / m[r][c];
        for (auto& v : m[r]) v *= inv;
        for (auto& v : out.transform[r]) v *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || ScalarTraits<S>::is_zero(m[i][c])) continue;
            const S f = m[i][c];
            for (std::size_t k = c; k < cols; ++k)
                if (!ScalarTraits<S>::is_zero(m[r][k])) m[i][k] -= f * m[r][k];
            for (std::size_t k = 0; k < rows; ++k)
                if (!ScalarTraits<S>::is_zero(out.transform[r][k])) out.transform[i][k] -= f * out.transform[r][k];
            if constexpr (!ScalarTraits<S>::exact) m[i][c] = S{};
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.reduced = std::move(m);
    return out;
}

template <class S>
std::size_t rank(const Matrix<S>& m, double eps = kDefaultEpsilon)
{
    return rref(m, eps).pivots.size();
}

// Nullspace basis read off the reduced form: one vector per free column,
// carrying a 1 in that column.
template <class S>
std::vector<std::vector<S>> nullspace_from_rref(const RrefResult<S>& rr, std::size_t cols)
{
    std::vector<bool> is_pivot(cols, false);
    for (auto p : rr.pivots) is_pivot[p] = true;
    std::vector<std::vector<S>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<S> v(cols, S{});
        v[f] = ScalarTraits<S>::from_int(1);
        for (std::size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.reduced[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class S>
std::vector<std::vector<S>> nullspace(const Matrix<S>& m, std::size_t cols, double eps = kDefaultEpsilon)
{
    if (m.empty()) {
        std::vector<std::vector<S>> basis;
        for (std::size_t f = 0; f < cols; ++f) {
            std::vector<S> v(cols, S{});
            v[f] = ScalarTraits<S>::from_int(1);
            basis.push_back(std::move(v));
        }
        return basis;
    }
    return nullspace_from_rref(rref(m, eps), cols);
}

// One solution of m x = b, or nullopt when inconsistent.
template <class S>
std::optional<std::vector<S>> solve(const Matrix<S>& m, const std::vector<S>& b, double eps = kDefaultEpsilon)
{
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    auto rr = rref(m, eps);
    std::vector<S> tb(rows, S{});
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < rows; ++k)
            if (!ScalarTraits<S>::is_zero(rr.transform[i][k])) tb[i] += rr.transform[i][k] * b[k];
    for (std::size_t i = rr.pivots.size(); i < rows; ++i)
        if (!detail::negligible(tb[i], eps)) return std::nullopt;
    std::vector<S> x(cols, S{});
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) x[rr.pivots[i]] = tb[i];
    return x;
}

template <class S>
S determinant(Matrix<S> m, double eps = kDefaultEpsilon)
{
    const std::size_t n = m.size();
    S det = ScalarTraits<S>::from_int(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        double best = -1;
        for (std::size_t i = c; i < n; ++i) {
            if (ScalarTraits<S>::exact) {
                if (!ScalarTraits<S>::is_zero(m[i][c])) {
                    piv = i;
                    break;
                }
            } else if (ScalarTraits<S>::magnitude(m[i][c]) > std::max(best, eps)) {
                best = ScalarTraits<S>::magnitude(m[i][c]);
                piv = i;
            }
        }
        if (piv == n) return S{};
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        const S inv = ScalarTraits<S>::from_int(1) / m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (ScalarTraits<S>::is_zero(m[i][c])) continue;
            const S f = m[i][c] * inv;
            for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
        }
    }
    return det;
}

template <class S>
std::optional<Matrix<S>> inverse(const Matrix<S>& m, double eps = kDefaultEpsilon)
{
    auto rr = rref(m, eps);
    if (rr.pivots.size() != m.size()) return std::nullopt;
    return rr.transform;
}

template <class S>
Matrix<S> multiply(const Matrix<S>& a, const Matrix<S>& b)
{
    const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    auto c = zero_matrix<S>(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (ScalarTraits<S>::is_zero(a[i][l])) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

template <class S>
std::vector<S> apply(const Matrix<S>& a, const std::vector<S>& x)
{
    std::vector<S> y(a.size(), S{});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!ScalarTraits<S>::is_zero(a[i][j])) y[i] += a[i][j] * x[j];
    return y;
}

} // namespace foliage
