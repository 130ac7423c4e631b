#pragma once

#include "foliage/numeric.hpp"
#include "foliage/vector_field.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace foliage {

using Point2 = std::array<Complex, 2>;

// Field p x1 (1 + a1) d1 + q x2 (1 + a2) d2 + x3 d3 near the x3-axis, with
// a1, a2 polynomials in (x1, x2, x3) vanishing at 0.
struct HolonomySetup {
    double p = 0;
    double q = 0;
    FloatSeries a1 = FloatSeries(3, 0);
    FloatSeries a2 = FloatSeries(3, 0);
    double section_radius = 0.1;  // sample points satisfy |x| <= section_radius
    double loop_radius = 1.0;     // loop t -> loop_radius * exp(2 pi i t)
    double tube_radius = 1.0;     // integration stops when |(G1, G2)| exceeds this

    static HolonomySetup linear(double p, double q);
};

struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_local_error = 0;  // scaled error estimate of accepted steps (<= 1 means within tol)
};

struct TrajectoryPoint {
    double t;
    Point2 gamma;
};

struct LiftResult {
    Point2 value{};
    IntegratorStats stats;
    std::vector<TrajectoryPoint> trajectory;  // filled when requested
};

// Integration could not finish: step size underflow or the solution left
// the evaluation tube. last_t is the last accepted time.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, double last_t) : std::runtime_error(what), last_t_(last_t) {}
    double last_t() const { return last_t_; }

private:
    double last_t_;
};

// Lifts the loop x3 = r exp(2 pi i t), t in [0, winding], through the leaf
// of (x, r) with an adaptive Dormand-Prince 5(4) pair. tol bounds the local
// error per step, relative to max(1, |state|).
LiftResult lift_loop(const HolonomySetup& setup, const Point2& x, double tol = 1e-10, double winding = 1.0,
                     bool record = false);

// Flow along the real segment x3 from r_from to r_to (both > 0), carrying
// a point of the section at r_from to the section at r_to.
Point2 transport(const HolonomySetup& setup, const Point2& x, double r_from, double r_to, double tol = 1e-10);

struct HolonomySample {
    std::vector<Point2> inputs;
    std::vector<Point2> outputs;
    IntegratorStats stats;  // summed steps, max error
};

HolonomySample sample_holonomy(const HolonomySetup& setup, const std::vector<Point2>& grid, double tol = 1e-10);

// Smallest k <= max_order with max_x |h^k(x) - x| <= tol; numerical evidence.
std::optional<int> periodicity_probe(const HolonomySetup& setup, const std::vector<Point2>& grid, int max_order,
                                     double tol, double integrator_tol = 1e-11);

struct InvarianceReport {
    double max_residual = 0;            // max |f(h(x), r) - f(x, r)|
    bool pure_x3_terms_vanish = true;   // f has no nonconstant terms x3^k alone
};

InvarianceReport invariance_residual(const FloatSeries& f, const HolonomySetup& setup, const std::vector<Point2>& grid,
                                     double tol = 1e-10);

// Restriction f(x1, x2, r) as a polynomial in (x1, x2).
FloatSeries restrict_to_section(const FloatSeries& f, double r = 1.0);

// X / (-k3 (1 + a3)) for X3 = -k3 x3 (1 + a3); the result has third
// component x3 up to truncation.
FloatField normalize_third_component(const FloatField& X);

// Reads p, q, a1, a2 off a field in the normalized form above.
HolonomySetup setup_from_field(const FloatField& X, double eps = 1e-12);

// Grid of count points in the ball of the given radius in C^2.
std::vector<Point2> section_grid(std::size_t count, double radius, std::uint64_t seed = 0);

} // namespace foliage
