#include "foliage/formal_diffeo.hpp"

namespace foliage {

template class FormalDiffeo<Exact>;
template class FormalDiffeo<Float>;

std::optional<Matrix<Exact>> root_of_unity_diagonalizer(const Matrix<Exact>& a)
{
    const std::size_t n = a.size();
    std::vector<std::vector<Exact>> columns;
    for (long k = 0; k < 12; ++k) {
        Matrix<Exact> shifted = a;
        const Exact ev = Exact::root_of_unity(k);
        for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= ev;
        for (auto& v : nullspace(shifted, n)) columns.push_back(std::move(v));
    }
    if (columns.size() != n) return std::nullopt;
    auto p = zero_matrix<Exact>(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) p[i][j] = columns[j][i];
    return p;
}

} // namespace foliage
