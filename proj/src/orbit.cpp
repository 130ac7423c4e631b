#include "foliage/orbit.hpp"

#include "foliage/parallel.hpp"

#include <algorithm>

namespace foliage {

namespace {

class PolyMap {
public:
    template <class S>
    explicit PolyMap(const FormalDiffeo<S>& G)
    {
        for (const auto& c : G.components()) comps_.emplace_back(c);
    }

    PointN operator()(const PointN& x) const
    {
        PointN y(comps_.size());
        for (std::size_t i = 0; i < comps_.size(); ++i) y[i] = comps_[i](x);
        return y;
    }

private:
    std::vector<SparsePolynomial> comps_;
};

struct Direction {
    std::vector<PointN> hits;
    bool escaped = false;
    std::optional<std::size_t> period;
};

Direction iterate(const PolyMap& map, const PointN& x, const OrbitOptions& opt, std::size_t limit)
{
    Direction d;
    PointN y = x;
    for (std::size_t k = 1; k <= limit; ++k) {
        y = map(y);
        if (!(norm(y) < opt.radius)) {
            d.escaped = true;
            return d;
        }
        d.hits.push_back(y);
        if (distance(y, x) <= opt.tol) {
            d.period = k;
            return d;
        }
    }
    return d;
}

Escape classify(bool fwd, bool bwd)
{
    if (fwd && bwd) return Escape::both;
    if (fwd) return Escape::forward;
    if (bwd) return Escape::backward;
    return Escape::neither;
}

void finish(OrbitRecord& r, const Direction& f, const Direction& b)
{
    r.forward_hits = f.hits;
    r.backward_hits = b.hits;
    r.escaped = classify(f.escaped, b.escaped);
    r.period = f.period ? f.period : b.period;
    if (r.period) {
        r.size = *r.period;
        r.mu = r.size;
        return;
    }
    r.size = f.hits.size() + b.hits.size();
    if (f.escaped && b.escaped) r.mu = r.size;
}

template <class S>
OrbitRecord orbit_impl(const FormalDiffeo<S>& G, const PointN& x, const OrbitOptions& opt)
{
    if (static_cast<int>(x.size()) != G.arity()) throw std::invalid_argument("point dimension differs from arity");
    if (!(opt.radius > 0)) throw std::invalid_argument("radius must be positive");
    if (!(norm(x) < opt.radius)) throw std::invalid_argument("orbit start point lies outside U");
    const PolyMap fwd(G), bwd(invert(G));
    OrbitRecord r;
    r.x = x;
    finish(r, iterate(fwd, x, opt, opt.max_iter), iterate(bwd, x, opt, opt.max_iter));
    return r;
}

template <class S>
DensityReport scan_impl(const FormalDiffeo<S>& G, const std::vector<PointN>& grid, std::size_t m,
                        const OrbitOptions& opt)
{
    if (m < 1) throw std::invalid_argument("period bound must be at least 1");
    const PolyMap map(G);
    std::vector<std::optional<std::size_t>> periods(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        if (static_cast<int>(grid[i].size()) != G.arity()) throw std::invalid_argument("grid point dimension differs from arity");
        if (!(norm(grid[i]) < opt.radius)) throw std::invalid_argument("grid point lies outside U");
        periods[i] = iterate(map, grid[i], opt, m).period;
    });
    DensityReport rep;
    rep.grid_size = grid.size();
    rep.max_period = m;
    rep.radius = opt.radius;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!periods[i]) continue;
        ++hits;
        ++rep.histogram[*periods[i]];
        if (rep.witnesses.size() < 16) rep.witnesses.push_back({i, grid[i], *periods[i]});
    }
    rep.fraction = grid.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(grid.size());
    return rep;
}

bool inside(const std::vector<Exact>& y, const Rational& r2)
{
    Rational s = 0;
    for (const auto& v : y) {
        if (!v.is_gaussian()) throw std::invalid_argument("exact orbit needs Gaussian-rational iterates");
        s += v.gaussian_re() * v.gaussian_re() + v.gaussian_im() * v.gaussian_im();
    }
    return s < r2;
}

PointN to_point(const std::vector<Exact>& y)
{
    PointN p;
    for (const auto& v : y) p.push_back(v.to_complex());
    return p;
}

} // namespace

std::string to_string(Escape e)
{
    switch (e) {
    case Escape::forward: return "forward";
    case Escape::backward: return "backward";
    case Escape::both: return "both";
    default: return "neither";
    }
}

OrbitRecord orbit(const FloatDiffeo& G, const PointN& x, const OrbitOptions& options)
{
    return orbit_impl(G, x, options);
}

OrbitRecord orbit(const ExactDiffeo& G, const PointN& x, const OrbitOptions& options)
{
    return orbit_impl(G, x, options);
}

OrbitRecord orbit_exact(const ExactDiffeo& G, const std::vector<Exact>& x, const Rational& radius, std::size_t max_iter)
{
    if (static_cast<int>(x.size()) != G.arity()) throw std::invalid_argument("point dimension differs from arity");
    if (radius <= 0) throw std::invalid_argument("radius must be positive");
    const Rational r2 = radius * radius;
    if (!inside(x, r2)) throw std::invalid_argument("orbit start point lies outside U");
    auto run = [&](const ExactDiffeo& map) {
        Direction d;
        std::vector<Exact> y = x;
        for (std::size_t k = 1; k <= max_iter; ++k) {
            std::vector<Exact> z;
            for (const auto& c : map.components()) z.push_back(c.evaluate_exact(y));
            y = std::move(z);
            if (!inside(y, r2)) {
                d.escaped = true;
                break;
            }
            d.hits.push_back(to_point(y));
            if (y == x) {
                d.period = k;
                break;
            }
        }
        return d;
    };
    OrbitRecord r;
    r.x = to_point(x);
    r.exact = true;
    finish(r, run(G), run(invert(G)));
    return r;
}

DensityReport periodic_scan(const FloatDiffeo& G, const std::vector<PointN>& grid, std::size_t m, const OrbitOptions& options)
{
    return scan_impl(G, grid, m, options);
}

DensityReport periodic_scan(const ExactDiffeo& G, const std::vector<PointN>& grid, std::size_t m, const OrbitOptions& options)
{
    return scan_impl(G, grid, m, options);
}

std::vector<PointN> orbit_grid(int n, std::size_t count, double radius, std::uint64_t seed, double shrink)
{
    if (!(shrink > 0 && shrink < 1)) throw std::invalid_argument("grid shrink factor must lie in (0, 1)");
    return halton_ball(n, count, radius * shrink, seed);
}

FiniteOrderVerdict finite_order_test(const ExactDiffeo& G, int m)
{
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (m > 10) throw std::invalid_argument("m too large: at most 10 (m! iterations)");
    FiniteOrderVerdict v;
    for (int k = 2; k <= m; ++k) v.exponent *= static_cast<unsigned long>(k);
    v.certified_degree = G.order();
    v.identity = power(G, v.exponent).is_identity();
    return v;
}

} // namespace foliage
