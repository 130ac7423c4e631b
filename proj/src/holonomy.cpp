#include "foliage/holonomy.hpp"

#include "foliage/parallel.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace foliage {

namespace {

namespace odeint = boost::numeric::odeint;

using State = Point2;
using Rhs = std::function<void(const State&, State&, double)>;

constexpr double kMinStep = 1e-12;

struct Integration {
    State x;
    IntegratorStats stats;
    std::vector<TrajectoryPoint> trajectory;
};

// Dormand-Prince 5(4) with a standard step-size controller: the scaled
// error max_i |err_i| / (tol max(1, |x_i|)) must not exceed 1.
Integration integrate(const Rhs& rhs, State x, double t0, double t1, double tol, double tube, bool record)
{
    Integration out;
    if (!(tol > 0)) throw std::invalid_argument("integrator tolerance must be positive");
    odeint::runge_kutta_dopri5<State> stepper;
    const double span = t1 - t0;
    double t = t0;
    double dt = std::min(0.01, span);
    State dxdt, xnew, dxdtnew, xerr;
    rhs(x, dxdt, t);
    if (record) out.trajectory.push_back({t, x});
    while (t < t1) {
        const bool last = t + dt >= t1;
        const double h = last ? t1 - t : dt;
        stepper.do_step(rhs, x, dxdt, t, xnew, dxdtnew, h, xerr);
        double err = 0;
        bool finite = true;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(xnew[i].real()) || !std::isfinite(xnew[i].imag())) finite = false;
            err = std::max(err, std::abs(xerr[i]) / (tol * std::max(1.0, std::abs(x[i]))));
        }
        if (!finite) err = std::numeric_limits<double>::infinity();
        if (err <= 1.0) {
            t = last ? t1 : t + h;
            x = xnew;
            dxdt = dxdtnew;
            ++out.stats.steps;
            out.stats.max_local_error = std::max(out.stats.max_local_error, err);
            if (record) out.trajectory.push_back({t, x});
            if (norm(x) > tube) throw IntegrationFailure("leaf left the evaluation tube", t);
            const double grow = err == 0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
            dt = std::max(h, dt) * grow;
        } else {
            ++out.stats.rejected;
            const double shrink = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            dt = h * shrink;
            if (dt < kMinStep) throw IntegrationFailure("step size underflow", t);
        }
    }
    out.x = x;
    return out;
}

void check_point(const HolonomySetup& setup, const Point2& x)
{
    const double r = norm(x);
    if (r > setup.section_radius * (1 + 1e-12))
        throw std::invalid_argument("section point lies outside the sampling radius");
}

void merge(IntegratorStats& into, const IntegratorStats& s)
{
    into.steps += s.steps;
    into.rejected += s.rejected;
    into.max_local_error = std::max(into.max_local_error, s.max_local_error);
}

} // namespace

HolonomySetup HolonomySetup::linear(double p, double q)
{
    HolonomySetup s;
    s.p = p;
    s.q = q;
    return s;
}

LiftResult lift_loop(const HolonomySetup& setup, const Point2& x, double tol, double winding, bool record)
{
    check_point(setup, x);
    if (!(winding > 0)) throw std::invalid_argument("winding must be positive");
    const SparsePolynomial a1(setup.a1), a2(setup.a2);
    const Complex c1(0, 2 * std::numbers::pi * setup.p), c2(0, 2 * std::numbers::pi * setup.q);
    const double r = setup.loop_radius;
    Rhs rhs = [&](const State& g, State& d, double t) {
        const Complex pt[3] = {g[0], g[1], std::polar(r, 2 * std::numbers::pi * t)};
        d[0] = c1 * g[0] * (1.0 + (a1.is_zero() ? Complex(0) : a1(pt)));
        d[1] = c2 * g[1] * (1.0 + (a2.is_zero() ? Complex(0) : a2(pt)));
    };
    auto res = integrate(rhs, x, 0.0, winding, tol, setup.tube_radius, record);
    return LiftResult{res.x, res.stats, std::move(res.trajectory)};
}

Point2 transport(const HolonomySetup& setup, const Point2& x, double r_from, double r_to, double tol)
{
    if (!(r_from > 0) || !(r_to > 0)) throw std::invalid_argument("transport radii must be positive");
    if (r_from == r_to) return x;
    const SparsePolynomial a1(setup.a1), a2(setup.a2);
    // sigma = log x3, so that dx3/dsigma = x3.
    Rhs rhs = [&](const State& g, State& d, double sigma) {
        const Complex pt[3] = {g[0], g[1], Complex(std::exp(sigma), 0)};
        d[0] = setup.p * g[0] * (1.0 + (a1.is_zero() ? Complex(0) : a1(pt)));
        d[1] = setup.q * g[1] * (1.0 + (a2.is_zero() ? Complex(0) : a2(pt)));
    };
    const double s0 = std::log(r_from), s1 = std::log(r_to);
    if (s1 > s0) return integrate(rhs, x, s0, s1, tol, setup.tube_radius, false).x;
    // Backward flow: integrate the reversed field forward.
    Rhs rev = [&](const State& g, State& d, double tau) {
        rhs(g, d, s0 - tau);
        d[0] = -d[0];
        d[1] = -d[1];
    };
    return integrate(rev, x, 0.0, s0 - s1, tol, setup.tube_radius, false).x;
}

HolonomySample sample_holonomy(const HolonomySetup& setup, const std::vector<Point2>& grid, double tol)
{
    HolonomySample s;
    s.inputs = grid;
    s.outputs.resize(grid.size());
    std::vector<IntegratorStats> stats(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        auto r = lift_loop(setup, grid[i], tol);
        s.outputs[i] = r.value;
        stats[i] = r.stats;
    });
    for (const auto& st : stats) merge(s.stats, st);
    return s;
}

std::optional<int> periodicity_probe(const HolonomySetup& setup, const std::vector<Point2>& grid, int max_order,
                                     double tol, double integrator_tol)
{
    if (grid.empty()) throw std::invalid_argument("periodicity probe needs a nonempty grid");
    if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
    std::vector<std::vector<double>> dist(grid.size(), std::vector<double>(max_order));
    parallel_for(grid.size(), [&](std::size_t i) {
        check_point(setup, grid[i]);
        // Iterates may leave the sampling radius; only the tube bounds them.
        HolonomySetup wide = setup;
        wide.section_radius = setup.tube_radius;
        Point2 y = grid[i];
        for (int k = 0; k < max_order; ++k) {
            y = lift_loop(wide, y, integrator_tol).value;
            dist[i][k] = distance(y, grid[i]);
        }
    });
    for (int k = 0; k < max_order; ++k) {
        double worst = 0;
        for (const auto& d : dist) worst = std::max(worst, d[k]);
        if (worst <= tol) return k + 1;
    }
    return std::nullopt;
}

FloatSeries restrict_to_section(const FloatSeries& f, double r)
{
    if (f.arity() != 3) throw std::invalid_argument("restriction needs a series in three variables");
    FloatSeries out(2, f.order());
    for (const auto& [e, c] : f.terms()) out.add_term({e[0], e[1]}, c * std::pow(r, e[2]));
    return out;
}

InvarianceReport invariance_residual(const FloatSeries& f, const HolonomySetup& setup, const std::vector<Point2>& grid,
                                     double tol)
{
    if (f.arity() != 3) throw std::invalid_argument("first integral candidate must have three variables");
    InvarianceReport rep;
    for (const auto& [e, c] : f.terms())
        if (e[0] == 0 && e[1] == 0 && e[2] > 0 && std::abs(c) > kDefaultEpsilon) rep.pure_x3_terms_vanish = false;
    const SparsePolynomial fs(restrict_to_section(f, setup.loop_radius));
    std::vector<double> res(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        auto h = lift_loop(setup, grid[i], tol).value;
        res[i] = std::abs(fs(h) - fs(grid[i]));
    });
    for (double v : res) rep.max_residual = std::max(rep.max_residual, v);
    return rep;
}

FloatField normalize_third_component(const FloatField& X)
{
    if (X.arity() != 3) throw std::invalid_argument("normalization needs a field on C^3");
    const auto& X3 = X[2];
    const int N = X3.order();
    if (N < 1) throw std::invalid_argument("third component is truncated below degree 1");
    FloatSeries u(3, N - 1);
    for (const auto& [e, c] : X3.terms()) {
        if (e[2] == 0) {
            if (std::abs(c) > kDefaultEpsilon) throw std::invalid_argument("third component is not divisible by x3");
            continue;
        }
        MultiIndex t = e;
        t[2] -= 1;
        u.add_term(t, c);
    }
    if (std::abs(u.constant_term()) <= kDefaultEpsilon) throw std::invalid_argument("third eigenvalue k3 vanishes");
    const FloatSeries inv = reciprocal(u);
    std::vector<FloatSeries> comps;
    for (int i = 0; i < 3; ++i) comps.push_back(FloatSeries::multiply(X[i].with_order(N - 1), inv, N - 1));
    return FloatField(std::move(comps));
}

HolonomySetup setup_from_field(const FloatField& X, double eps)
{
    if (X.arity() != 3) throw std::invalid_argument("holonomy setup needs a field on C^3");
    const int N = X.order();
    if (N < 1) throw std::invalid_argument("field truncated below degree 1");
    auto x3 = FloatSeries::variable(3, N, 2);
    if (!(X[2].with_order(N) - x3).near_zero(eps)) throw std::invalid_argument("third component is not x3; normalize first");
    HolonomySetup s;
    double* coef[2] = {&s.p, &s.q};
    FloatSeries* corr[2] = {&s.a1, &s.a2};
    for (int i = 0; i < 2; ++i) {
        MultiIndex unit{0, 0, 0};
        unit[i] = 1;
        const Complex lead = X[i].coeff(unit);
        if (std::abs(lead.imag()) > eps) throw std::invalid_argument("eigenvalue ratio must be real");
        *coef[i] = lead.real();
        FloatSeries a(3, N - 1);
        for (const auto& [e, c] : X[i].terms()) {
            if (e[i] == 0) {
                if (std::abs(c) > eps) throw std::invalid_argument("component " + std::to_string(i + 1) + " is not divisible by its coordinate");
                continue;
            }
            if (e == unit) continue;
            if (std::abs(lead) <= eps) throw std::invalid_argument("zero eigenvalue with nonzero correction");
            MultiIndex t = e;
            t[i] -= 1;
            a.add_term(t, c / lead);
        }
        *corr[i] = a;
    }
    return s;
}

std::vector<Point2> section_grid(std::size_t count, double radius, std::uint64_t seed)
{
    std::vector<Point2> out;
    for (const auto& p : halton_ball(2, count, radius, seed)) out.push_back({p[0], p[1]});
    return out;
}

} // namespace foliage
