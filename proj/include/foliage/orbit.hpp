#pragma once

#include "foliage/formal_diffeo.hpp"
#include "foliage/numeric.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace foliage {

using PointN = std::vector<Complex>;

enum class Escape { neither, forward, backward, both };

std::string to_string(Escape e);

struct OrbitOptions {
    double radius = 1.0;          // U is the open ball |x| < radius
    std::size_t max_iter = 1000;  // per direction
    double tol = 1e-9;            // return threshold |G^k(x) - x| <= tol
};

// Orbit of x in U under the truncated polynomial representative of G.
// Iteration in each direction stops at the first iterate outside U, at a
// return to x, or after max_iter steps.
struct OrbitRecord {
    PointN x;
    std::vector<PointN> forward_hits;
    std::vector<PointN> backward_hits;
    Escape escaped = Escape::neither;
    std::optional<std::size_t> period;
    std::size_t size = 0;             // |O_U(x, G)|
    std::optional<std::size_t> mu;    // nullopt: at least max_iter
    bool exact = false;               // iterates computed in exact arithmetic
};

OrbitRecord orbit(const FloatDiffeo& G, const PointN& x, const OrbitOptions& options = {});
OrbitRecord orbit(const ExactDiffeo& G, const PointN& x, const OrbitOptions& options = {});

// Exact iteration for Gaussian-rational data: x has exact coordinates,
// membership in U is decided on |x|^2 < radius^2 and returns are exact
// equalities (tol unused). Backward iterates use the truncated inverse.
OrbitRecord orbit_exact(const ExactDiffeo& G, const std::vector<Exact>& x, const Rational& radius,
                        std::size_t max_iter = 64);

struct PeriodicWitness {
    std::size_t index;
    PointN point;
    std::size_t period;
};

struct DensityReport {
    std::size_t grid_size = 0;
    std::size_t max_period = 0;
    double radius = 0;
    std::uint64_t seed = 0;
    double fraction = 0;
    std::vector<PeriodicWitness> witnesses;
    std::map<std::size_t, std::size_t> histogram;  // period -> count
};

// Fraction of grid points returning within tol after at most m steps, all
// intermediate iterates staying in U.
DensityReport periodic_scan(const FloatDiffeo& G, const std::vector<PointN>& grid, std::size_t m,
                            const OrbitOptions& options = {});
DensityReport periodic_scan(const ExactDiffeo& G, const std::vector<PointN>& grid, std::size_t m,
                            const OrbitOptions& options = {});

// Grid for periodic_scan: Halton points in the ball of radius shrink * radius.
std::vector<PointN> orbit_grid(int n, std::size_t count, double radius, std::uint64_t seed = 0, double shrink = 0.9);

struct FiniteOrderVerdict {
    bool identity = false;         // G^{m!} == id up to truncation
    unsigned long exponent = 1;    // m!
    int certified_degree = 0;      // truncation order N
};

// Exact check of G^{m!} = id on the truncation; m <= 10.
FiniteOrderVerdict finite_order_test(const ExactDiffeo& G, int m);

} // namespace foliage
