#include <doctest.h>

#include <cmath>

#include "islm/defaults.hpp"
#include "islm/slowfast.hpp"

using namespace islm;

namespace {

// Fixed-step classical RK4 reference used as a step-halving oracle.
State rk4_reference(const State& s0, const ModelConfig& cfg, double t_end, double h) {
    auto f = [&](double y, double r) {
        const VectorFieldValue v = vector_field(State(std::max(0.0, y), r), cfg);
        return std::pair<double, double>(v.dy_dt, v.dr_dt);
    };
    double y = s0.y, r = s0.r;
    const long n = std::lround(t_end / h);
    for (long k = 0; k < n; ++k) {
        const auto [k1y, k1r] = f(y, r);
        const auto [k2y, k2r] = f(y + 0.5 * h * k1y, r + 0.5 * h * k1r);
        const auto [k3y, k3r] = f(y + 0.5 * h * k2y, r + 0.5 * h * k2r);
        const auto [k4y, k4r] = f(y + h * k3y, r + h * k3r);
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        r += h / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r);
    }
    return State(y, r);
}

} // namespace

TEST_CASE("a trajectory started at an attractor stays there") {
    const ModelConfig c = default_kaldor();
    const auto eqs = find_equilibria(c, default_grid(c));
    REQUIRE(!eqs.empty());
    const State& fixed = eqs.front().state; // the low attractor
    const Trajectory traj = integrate(fixed, c, 50.0);
    for (const auto& s : traj.samples) {
        CHECK(std::abs(s.state.y - fixed.y) < 1e-8);
        CHECK(std::abs(s.state.r - fixed.r) < 1e-8);
    }
}

TEST_CASE("adaptive integrator matches a fine fixed-step reference at eps = 1") {
    ModelConfig c = default_kaldor();
    c.epsilon = 1.0;
    const State s0(2.0, 0.5);
    const double t_end = 5.0;
    const Trajectory traj = integrate(s0, c, t_end);
    const State got = traj.samples.back().state;
    const State ref = rk4_reference(s0, c, t_end, 1e-4); // 10x finer than any step taken
    CHECK(got.y == doctest::Approx(ref.y).epsilon(1e-6));
    CHECK(got.r == doctest::Approx(ref.r).epsilon(1e-6));
    CHECK(traj.samples.front().t == 0.0);
    for (std::size_t k = 1; k < traj.samples.size(); ++k)
        CHECK(traj.samples[k].t > traj.samples[k - 1].t);
}

TEST_CASE("off-curve start produces an initial fast segment") {
    const ModelConfig c = default_kaldor();
    // Far from the IS curve: the fast equation dominates by >> 100x.
    const State s0(8.0, 0.0);
    const Trajectory traj = integrate(s0, c, 5.0);
    double max_ratio = 0.0;
    for (std::size_t k = 0; k < traj.samples.size() / 2; ++k) {
        const VectorFieldValue v = vector_field(traj.samples[k].state, c);
        if (std::abs(v.dr_dt) > 1e-300)
            max_ratio = std::max(max_ratio, std::abs(v.dy_dt) / std::abs(v.dr_dt));
    }
    CHECK(max_ratio > 100.0);
}

TEST_CASE("StepFloorReached fires when the floor cannot meet the tolerance") {
    ModelConfig c = kaldor_cycle();
    StepControl ctrl;
    ctrl.rel_tol = 1e-14;
    ctrl.abs_tol = 1e-16;
    ctrl.h_init = 40.0;
    ctrl.h_min = 40.0; // floor equals the step: no room to subdivide
    ctrl.h_max = 40.0;
    CHECK_THROWS_AS(integrate(State(8.0, 1.2), c, 400.0, ctrl), StepFloorReached);
}

TEST_CASE("DomainExit fires when the flow crosses Y = 0") {
    ModelConfig c = default_kaldor();
    c.epsilon = 1.0;
    // Start where I - S < 0 and far left: the goods flow pushes Y down.
    const State s0(0.05, 5.0);
    CHECK_THROWS_AS(integrate(s0, c, 50.0), DomainExit);
}

TEST_CASE("signed area orientation oracle") {
    // Counterclockwise unit square: positive area.
    std::vector<std::pair<double, double>> ccw{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(signed_area(ccw) == doctest::Approx(1.0));
    std::vector<std::pair<double, double>> cw(ccw.rbegin(), ccw.rend());
    CHECK(signed_area(cw) == doctest::Approx(-1.0));
}

TEST_CASE("goods-market cycle is clockwise with two jumps") {
    const ModelConfig c = kaldor_cycle();
    const CycleReport rep = detect_cycle(c, cycle_seed(c));
    CHECK(rep.orientation == Orientation::Clockwise);
    CHECK(rep.poincare_residual < 1e-6);
    CHECK(rep.jumps.size() == 2);
    CHECK(rep.period > 0.0);

    // Jump slow-variable drift stays below 5% of the cycle's slow range.
    const double slow_range = rep.r_range.second - rep.r_range.first;
    for (const auto& j : rep.jumps)
        CHECK(std::abs(j.to.r - j.from.r) < 0.05 * slow_range);

    // Closure in state space.
    const auto& first = rep.cycle_samples.front().state;
    const auto& last = rep.cycle_samples.back().state;
    CHECK(std::hypot(first.y - last.y, first.r - last.r) < 1e-6);
}

TEST_CASE("money-market cycle is counterclockwise") {
    const ModelConfig c = three_phase_cycle();
    const CycleReport rep = detect_cycle(c, cycle_seed(c));
    CHECK(rep.orientation == Orientation::Counterclockwise);
    CHECK(rep.poincare_residual < 1e-6);
    CHECK(rep.jumps.size() == 2);
    const double slow_range = rep.y_range.second - rep.y_range.first;
    for (const auto& j : rep.jumps)
        CHECK(std::abs(j.to.y - j.from.y) < 0.05 * slow_range);
}

TEST_CASE("orientation is invariant under sampling density") {
    const ModelConfig c = kaldor_cycle();
    const CycleReport rep = detect_cycle(c, cycle_seed(c));
    // Halve the sampling: drop every other sample.
    std::vector<TrajectorySample> sparse;
    for (std::size_t k = 0; k < rep.cycle_samples.size(); k += 2)
        sparse.push_back(rep.cycle_samples[k]);
    CHECK(cycle_orientation(sparse, c) == rep.orientation);
}

TEST_CASE("equilibrium capture reports NoCycle") {
    // Default Kaldor: attractors on A1/A3 capture the flow.
    const ModelConfig c = default_kaldor();
    CHECK_THROWS_AS(detect_cycle(c, cycle_seed(c)), NoCycle);
}

TEST_CASE("singular orbit orientation matches the finite-eps cycle") {
    const SingularOrbit goods = singular_orbit(kaldor_cycle());
    CHECK(goods.orientation == Orientation::Clockwise);
    const SingularOrbit money = singular_orbit(three_phase_cycle());
    CHECK(money.orientation == Orientation::Counterclockwise);
}

TEST_CASE("singular orbit jumps are parallel to the fast axis") {
    const ModelConfig c = kaldor_cycle();
    const SingularOrbit orbit = singular_orbit(c);
    // Goods market: jumps move Y at fixed R.
    CHECK(std::abs(orbit.jump_low.first.r - orbit.jump_low.second.r) < 1e-8);
    CHECK(std::abs(orbit.jump_high.first.r - orbit.jump_high.second.r) < 1e-8);
    // Endpoints lie on the isocline.
    for (const State& s : {orbit.jump_low.first, orbit.jump_low.second, orbit.jump_high.first,
                           orbit.jump_high.second})
        CHECK(std::abs(curve_residual(CurveId::IS, s.y, s.r, c)) < 1e-8);
}

TEST_CASE("no return drift when LM sits far above IS") {
    ModelConfig c = kaldor_cycle();
    c.m_s = 9.0; // L - M - m_s < 0 along the whole curve: drift never reverses
    CHECK_THROWS_AS(singular_orbit(c), NoReturnDrift);
}

TEST_CASE("FoldCountMismatch for fold-free configs") {
    const ModelConfig c = original_degenerate();
    CHECK_THROWS_AS(singular_orbit(c), FoldCountMismatch);
}

TEST_CASE("hausdorff distance basics") {
    std::vector<State> a{State(0, 0), State(1, 0)};
    std::vector<State> b{State(0, 0.5), State(1, 0.5)};
    CHECK(hausdorff_distance(a, b) == doctest::Approx(0.5));
    CHECK(hausdorff_distance(a, a) == 0.0);
}

TEST_CASE("cycle hugs the stable arcs within O(eps) between jumps") {
    const ModelConfig base = kaldor_cycle();
    const IsoclineCurve curve = trace_isocline(CurveId::IS, base, default_grid(base));

    auto arc_distance = [&](double eps) {
        ModelConfig c = base;
        c.epsilon = eps;
        const CycleReport rep = detect_cycle(c, cycle_seed(c));
        // Trim the jump runs plus a flank on both sides.
        std::vector<bool> in_jump(rep.cycle_samples.size(), false);
        const std::size_t flank = rep.cycle_samples.size() / 20;
        for (const auto& j : rep.jumps) {
            const std::size_t lo = j.begin > flank ? j.begin - flank : 0;
            const std::size_t hi = std::min(rep.cycle_samples.size(), j.end + flank);
            for (std::size_t k = lo; k < hi; ++k) in_jump[k] = true;
        }
        double worst = 0.0;
        for (std::size_t k = 0; k < rep.cycle_samples.size(); ++k) {
            if (in_jump[k]) continue;
            const State& s = rep.cycle_samples[k].state;
            double best = 1e300;
            for (std::size_t i = 0; i + 1 < curve.points.size(); ++i)
                best = std::min(best,
                                point_segment_distance(s, curve.points[i], curve.points[i + 1]));
            worst = std::max(worst, best);
        }
        return worst;
    };

    const double d2 = arc_distance(1e-2);
    const double d3 = arc_distance(1e-3);
    const double fitted_c = d2 / 1e-2;
    CHECK(d3 <= 1.5 * fitted_c * 1e-3); // slack covers the fold boundary layer
}

TEST_CASE("epsilon convergence toward the singular orbit") {
    const ModelConfig c = kaldor_cycle();
    const auto distances = epsilon_convergence(c, {1e-2, 1e-3});
    REQUIRE(distances.size() == 2);
    CHECK(distances[0].second > distances[1].second);

    // Single-entry list yields a single distance, no monotonicity claim.
    const auto single = epsilon_convergence(c, {1e-2});
    CHECK(single.size() == 1);
    CHECK(single[0].second == doctest::Approx(distances[0].second).epsilon(1e-6));
}

TEST_CASE("epsilon convergence propagates equilibrium capture") {
    const ModelConfig c = default_kaldor(); // attractors capture the flow
    CHECK_THROWS_AS(epsilon_convergence(c, {1e-2, 1e-3}), NoCycle);
}
