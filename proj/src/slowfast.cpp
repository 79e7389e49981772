#include "islm/slowfast.hpp"

#include <algorithm>
#include <cmath>

namespace islm {

namespace {

struct Vec2 {
    double y = 0.0, r = 0.0;
};

Vec2 rhs(const ModelConfig& cfg, Vec2 x) {
    const auto [goods, money] = residuals(x.y, x.r, cfg);
    if (cfg.fast_side == FastSide::Goods)
        return {cfg.alpha * goods, cfg.epsilon * cfg.beta * money};
    return {cfg.epsilon * cfg.alpha * goods, cfg.beta * money};
}

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                 A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
constexpr double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
                 E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;

struct StepResult {
    Vec2 x;
    double err = 0.0; // scaled error estimate
};

StepResult dp_step(const ModelConfig& cfg, Vec2 x, Vec2 k1, double h, const StepControl& ctrl) {
    const Vec2 k2 = rhs(cfg, {x.y + h * A21 * k1.y, x.r + h * A21 * k1.r});
    const Vec2 k3 = rhs(cfg, {x.y + h * (A31 * k1.y + A32 * k2.y), x.r + h * (A31 * k1.r + A32 * k2.r)});
    const Vec2 k4 = rhs(cfg, {x.y + h * (A41 * k1.y + A42 * k2.y + A43 * k3.y),
                              x.r + h * (A41 * k1.r + A42 * k2.r + A43 * k3.r)});
    const Vec2 k5 = rhs(cfg, {x.y + h * (A51 * k1.y + A52 * k2.y + A53 * k3.y + A54 * k4.y),
                              x.r + h * (A51 * k1.r + A52 * k2.r + A53 * k3.r + A54 * k4.r)});
    const Vec2 k6 = rhs(cfg, {x.y + h * (A61 * k1.y + A62 * k2.y + A63 * k3.y + A64 * k4.y + A65 * k5.y),
                              x.r + h * (A61 * k1.r + A62 * k2.r + A63 * k3.r + A64 * k4.r + A65 * k5.r)});
    Vec2 xn{x.y + h * (B1 * k1.y + B3 * k3.y + B4 * k4.y + B5 * k5.y + B6 * k6.y),
            x.r + h * (B1 * k1.r + B3 * k3.r + B4 * k4.r + B5 * k5.r + B6 * k6.r)};
    const Vec2 k7 = rhs(cfg, xn);
    const double ey = h * (E1 * k1.y + E3 * k3.y + E4 * k4.y + E5 * k5.y + E6 * k6.y + E7 * k7.y);
    const double er = h * (E1 * k1.r + E3 * k3.r + E4 * k4.r + E5 * k5.r + E6 * k6.r + E7 * k7.r);
    const double sy = ctrl.abs_tol + ctrl.rel_tol * std::max(std::abs(x.y), std::abs(xn.y));
    const double sr = ctrl.abs_tol + ctrl.rel_tol * std::max(std::abs(x.r), std::abs(xn.r));
    StepResult res;
    res.x = xn;
    res.err = std::sqrt(0.5 * ((ey / sy) * (ey / sy) + (er / sr) * (er / sr)));
    return res;
}

class Integrator {
  public:
    Integrator(const ModelConfig& cfg, const StepControl& ctrl, Vec2 x0, double t0)
        : cfg_(cfg), ctrl_(ctrl), x_(x0), t_(t0), h_(ctrl.h_init) {
        k1_ = rhs(cfg_, x_);
    }

    double t() const { return t_; }
    Vec2 x() const { return x_; }
    std::size_t accepted = 0;
    std::size_t rejected = 0;

    // Advances one accepted step, at most to t_limit. Returns false once the
    // limit is reached exactly.
    bool step_to(double t_limit) {
        if (t_ >= t_limit) return false;
        for (;;) {
            double h = std::min(h_, t_limit - t_);
            const StepResult res = dp_step(cfg_, x_, k1_, h, ctrl_);
            if (res.err <= 1.0 || h <= ctrl_.h_min) {
                if (res.err > 1.0 && h <= ctrl_.h_min)
                    throw StepFloorReached("step floor reached at t = " + std::to_string(t_));
                prev_x_ = x_;
                prev_t_ = t_;
                x_ = res.x;
                t_ += h;
                k1_ = rhs(cfg_, x_);
                ++accepted;
                const double grow = res.err > 0.0 ? 0.9 * std::pow(res.err, -0.2) : 5.0;
                h_ = std::min(ctrl_.h_max, h * std::clamp(grow, 0.2, 5.0));
                if (x_.y < 0.0) {
                    // Locate the boundary crossing before reporting the exit.
                    Vec2 lo = prev_x_, hi = x_;
                    double tlo = prev_t_, thi = t_;
                    for (int it = 0; it < 60; ++it) {
                        Vec2 mid{0.5 * (lo.y + hi.y), 0.5 * (lo.r + hi.r)};
                        const double tm = 0.5 * (tlo + thi);
                        if (mid.y < 0.0) {
                            hi = mid;
                            thi = tm;
                        } else {
                            lo = mid;
                            tlo = tm;
                        }
                    }
                    x_ = {0.0, lo.r};
                    t_ = tlo;
                    throw DomainExit("trajectory reached Y = 0 at t = " + std::to_string(t_));
                }
                return true;
            }
            ++rejected;
            h_ = std::max(ctrl_.h_min, h * std::clamp(0.9 * std::pow(res.err, -0.2), 0.2, 1.0));
        }
    }

    Vec2 prev_x() const { return prev_x_; }
    double prev_t() const { return prev_t_; }

  private:
    const ModelConfig& cfg_;
    StepControl ctrl_;
    Vec2 x_, prev_x_{};
    double t_, prev_t_ = 0.0;
    double h_;
    Vec2 k1_;
};

} // namespace

std::string to_string(Orientation o) {
    return o == Orientation::Clockwise ? "clockwise" : "counterclockwise";
}

Trajectory integrate(const State& s0, const ModelConfig& cfg, double t_end,
                     const StepControl& ctrl) {
    Trajectory traj;
    Integrator integ(cfg, ctrl, {s0.y, s0.r}, 0.0);
    traj.samples.push_back({0.0, s0});
    try {
        while (integ.step_to(t_end)) {
            const Vec2 x = integ.x();
            traj.samples.push_back({integ.t(), State(x.y, x.r)});
        }
    } catch (DomainExit&) {
        const Vec2 x = integ.x();
        traj.samples.push_back({integ.t(), State(std::max(0.0, x.y), x.r)});
        traj.steps_accepted = integ.accepted;
        traj.steps_rejected = integ.rejected;
        throw;
    }
    traj.steps_accepted = integ.accepted;
    traj.steps_rejected = integ.rejected;
    return traj;
}

void mark_jumps(Trajectory& traj, const ModelConfig& cfg, double jump_speed_factor) {
    traj.jumps.clear();
    const std::size_t n = traj.samples.size();
    if (n < 3) return;

    std::vector<bool> fastflag(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const VectorFieldValue v = vector_field(traj.samples[k].state, cfg);
        const double fast = cfg.fast_side == FastSide::Goods ? std::abs(v.dy_dt) : std::abs(v.dr_dt);
        const double slow = cfg.fast_side == FastSide::Goods ? std::abs(v.dr_dt) : std::abs(v.dy_dt);
        fastflag[k] = fast > jump_speed_factor * slow;
    }
    std::size_t k = 0;
    while (k < n) {
        if (!fastflag[k]) {
            ++k;
            continue;
        }
        std::size_t e = k;
        while (e < n && fastflag[e]) ++e;
        traj.jumps.push_back({k, e, traj.samples[k].state, traj.samples[e - 1].state});
        k = e;
    }
}

double signed_area(const std::vector<std::pair<double, double>>& poly) {
    double a = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& [x1, y1] = poly[i];
        const auto& [x2, y2] = poly[(i + 1) % n];
        a += x1 * y2 - x2 * y1;
    }
    return 0.5 * a;
}

Orientation cycle_orientation(const std::vector<TrajectorySample>& cycle, const ModelConfig& cfg) {
    std::vector<std::pair<double, double>> poly;
    poly.reserve(cycle.size());
    for (const auto& s : cycle) {
        if (cfg.fast_side == FastSide::Goods)
            poly.emplace_back(s.state.r, s.state.y); // slow horizontal, fast vertical
        else
            poly.emplace_back(s.state.y, s.state.r);
    }
    return signed_area(poly) < 0.0 ? Orientation::Clockwise : Orientation::Counterclockwise;
}

namespace {

struct Section {
    Vec2 anchor;
    Vec2 normal;  // unit flow direction at the anchor
    Vec2 in_line; // unit vector along the section line
    double radius = 0.0;
};

double side_of(const Section& sec, Vec2 x) {
    return (x.y - sec.anchor.y) * sec.normal.y + (x.r - sec.anchor.r) * sec.normal.r;
}

double along_of(const Section& sec, Vec2 x) {
    return (x.y - sec.anchor.y) * sec.in_line.y + (x.r - sec.anchor.r) * sec.in_line.r;
}

Section make_section(const ModelConfig& cfg, const IsoclineCurve& curve) {
    // Anchor at the midpoint of arc A1 in the fast coordinate.
    const Arc* a1 = nullptr;
    for (const auto& a : curve.arcs)
        if (a.label == ArcLabel::A1) a1 = &a;
    if (!a1 && !curve.arcs.empty()) a1 = &curve.arcs.front();
    if (!a1) throw NoCycle("no arc available for the Poincare section");

    const State lo = curve.points[a1->begin];
    const State hi = curve.points[a1->end - 1];
    const double cmid = 0.5 * (fast_coordinate(curve.which, lo, cfg) +
                               fast_coordinate(curve.which, hi, cfg));
    std::size_t best = a1->begin;
    double dbest = 1e300;
    for (std::size_t k = a1->begin; k < a1->end; ++k) {
        const double d = std::abs(fast_coordinate(curve.which, curve.points[k], cfg) - cmid);
        if (d < dbest) {
            dbest = d;
            best = k;
        }
    }
    Section sec;
    sec.anchor = {curve.points[best].y, curve.points[best].r};
    const VectorFieldValue v = vector_field(curve.points[best], cfg);
    const double n = std::hypot(v.dy_dt, v.dr_dt);
    if (n < 1e-300) throw NoCycle("flow vanishes at the section anchor");
    sec.normal = {v.dy_dt / n, v.dr_dt / n};
    sec.in_line = {-sec.normal.r, sec.normal.y};
    // Keep the section local: a fraction of the slow extent of the arc.
    const double slow_lo = curve.which == CurveId::IS ? lo.r : lo.y;
    const double slow_hi = curve.which == CurveId::IS ? hi.r : hi.y;
    sec.radius = std::max(0.2 * std::abs(slow_hi - slow_lo), 1e-3);
    return sec;
}

} // namespace

State cycle_seed(const ModelConfig& cfg) {
    const CurveId which = fast_curve(cfg);
    IsoclineCurve curve = arc_stability(trace_isocline(which, cfg, default_grid(cfg)), cfg);
    for (const auto& a : curve.arcs) {
        if (a.stability != Stability::Stable) continue;
        const std::size_t mid = a.begin + (a.end - a.begin) / 2;
        State s = curve.points[mid];
        // Nudge off the curve in the fast direction.
        if (which == CurveId::IS)
            s = State(s.y + 1e-2, s.r);
        else
            s = State(s.y, s.r + 1e-2);
        return s;
    }
    throw NoCycle("no stable arc to seed from");
}

CycleReport detect_cycle(const ModelConfig& cfg, const State& s0, const StepControl& ctrl) {
    const CurveId which = fast_curve(cfg);
    IsoclineCurve curve = arc_stability(trace_isocline(which, cfg, default_grid(cfg)), cfg);
    const Section sec = make_section(cfg, curve);

    // Time scales: the slow variable crosses its range at a rate O(eps).
    const double slow_rate = cfg.epsilon * (cfg.fast_side == FastSide::Goods ? cfg.beta : cfg.alpha);
    const double leg_budget = 400.0 / slow_rate;
    const double burn = 0.2 * leg_budget;
    const int max_returns = 50;
    const double return_tol = 1e-6;

    Integrator integ(cfg, ctrl, {s0.y, s0.r}, 0.0);

    // Capture threshold: far below any on-cycle slow speed (O(eps)), far above
    // the integrator's hover noise around an attractor.
    auto equilibrium_captured = [&](Vec2 x) {
        const VectorFieldValue v = vector_field(State(std::max(0.0, x.y), x.r), cfg);
        return std::hypot(v.dy_dt, v.dr_dt) < 1e-7;
    };

    // Burn-in past the transient.
    while (integ.t() < burn) {
        if (!integ.step_to(burn)) break;
        if (equilibrium_captured(integ.x()))
            throw NoCycle("trajectory settled at an equilibrium during burn-in");
    }

    struct Crossing {
        double t;
        Vec2 x;
    };
    std::vector<Crossing> crossings;
    std::vector<TrajectorySample> record;
    bool recording = false;

    double leg_start = integ.t();
    double prev_side = side_of(sec, integ.x());
    Vec2 prev_x = integ.x();
    double prev_t = integ.t();

    while (static_cast<int>(crossings.size()) < max_returns) {
        if (!integ.step_to(integ.t() + leg_budget)) break;
        const Vec2 x = integ.x();
        const double t = integ.t();
        const double side = side_of(sec, x);

        if (recording) record.push_back({t, State(std::max(0.0, x.y), x.r)});

        if (prev_side < 0.0 && side >= 0.0) {
            // Linear interpolation of the crossing, then locality filter.
            const double w = prev_side / (prev_side - side);
            Vec2 cx{prev_x.y + w * (x.y - prev_x.y), prev_x.r + w * (x.r - prev_x.r)};
            const double ct = prev_t + w * (t - prev_t);
            if (std::abs(along_of(sec, cx)) <= sec.radius) {
                crossings.push_back({ct, cx});
                leg_start = t;
                if (crossings.size() >= 2) {
                    const auto& a = crossings[crossings.size() - 2];
                    const auto& b = crossings.back();
                    const double gap = std::hypot(a.x.y - b.x.y, a.x.r - b.x.r);
                    if (gap < return_tol) {
                        CycleReport rep;
                        rep.poincare_residual = gap;
                        rep.period = b.t - a.t;
                        // The recorded samples cover the final return loop.
                        std::vector<TrajectorySample> cyc;
                        cyc.push_back({a.t, State(std::max(0.0, a.x.y), a.x.r)});
                        for (const auto& s : record)
                            if (s.t > a.t && s.t < b.t) cyc.push_back(s);
                        cyc.push_back({b.t, State(std::max(0.0, b.x.y), b.x.r)});
                        if (cyc.size() < 16) throw NoCycle("returns collapsed to a point");
                        double ylo = 1e300, yhi = -1e300, rlo = 1e300, rhi = -1e300;
                        for (const auto& s : cyc) {
                            ylo = std::min(ylo, s.state.y);
                            yhi = std::max(yhi, s.state.y);
                            rlo = std::min(rlo, s.state.r);
                            rhi = std::max(rhi, s.state.r);
                        }
                        if ((yhi - ylo) + (rhi - rlo) < 1e-3)
                            throw NoCycle("returns converged to a point");
                        rep.cycle_samples = std::move(cyc);
                        rep.y_range = {ylo, yhi};
                        rep.r_range = {rlo, rhi};
                        rep.orientation = cycle_orientation(rep.cycle_samples, cfg);
                        Trajectory tmp;
                        tmp.samples = rep.cycle_samples;
                        mark_jumps(tmp, cfg);
                        rep.jumps = std::move(tmp.jumps);
                        return rep;
                    }
                    // Restart the recording for the next candidate loop.
                    record.clear();
                    recording = true;
                } else {
                    recording = true;
                    record.clear();
                }
            }
        }

        if (t - leg_start > leg_budget) {
            if (equilibrium_captured(x))
                throw NoCycle("trajectory settled at an equilibrium");
            throw NonConvergent("no section return within the leg budget");
        }
        prev_side = side;
        prev_x = x;
        prev_t = t;
    }
    throw NonConvergent("returns failed to settle within max_returns");
}

namespace {

// Slow drift sign on an arc: the sign of the *other* equation there.
double drift_sign(const ModelConfig& cfg, const State& s) {
    const auto [goods, money] = residuals(s.y, s.r, cfg);
    return cfg.fast_side == FastSide::Goods ? money : goods;
}

double slow_of(const ModelConfig& cfg, const State& s) {
    return cfg.fast_side == FastSide::Goods ? s.r : s.y;
}

} // namespace

SingularOrbit singular_orbit(const ModelConfig& cfg) {
    const CurveId which = fast_curve(cfg);
    IsoclineCurve curve = arc_stability(trace_isocline(which, cfg, default_grid(cfg)), cfg);
    if (curve.folds.size() != 2)
        throw FoldCountMismatch("singular orbit needs exactly two folds, found " +
                                std::to_string(curve.folds.size()));
    const FoldPair fp = fold_values(curve);

    const Arc* a1 = nullptr;
    const Arc* a3 = nullptr;
    for (const auto& a : curve.arcs) {
        if (a.label == ArcLabel::A1) a1 = &a;
        if (a.label == ArcLabel::A3) a3 = &a;
    }
    if (!a1 || !a3) throw FoldCountMismatch("arc labels missing after fold split");

    // The drift must push each stable arc toward its own fold, with opposite
    // slow directions, otherwise the loop cannot close.
    auto arc_mid = [&](const Arc& a) { return curve.points[a.begin + (a.end - a.begin) / 2]; };
    const double d1 = drift_sign(cfg, arc_mid(*a1));
    const double d3 = drift_sign(cfg, arc_mid(*a3));
    if (d1 == 0.0 || d3 == 0.0 || (d1 > 0.0) == (d3 > 0.0))
        throw NoReturnDrift("slow drift does not reverse between the stable arcs");

    // Fold adjacent to each stable arc: the arcs were cut at index + 1.
    const FoldPoint& fold_a = curve.folds.front();
    const FoldPoint& fold_b = curve.folds.back();
    const FoldPoint& a1_fold = (fold_a.index + 1 == a1->end) ? fold_a : fold_b;
    const FoldPoint& a3_fold = (&a1_fold == &fold_a) ? fold_b : fold_a;

    // Landing point of a jump: same slow value on the other stable arc,
    // refined by Newton on the fast variable so the jump stays exactly
    // parallel to the fast axis.
    auto landing = [&](const Arc& target, double slow_value) {
        double best = 1e300;
        std::size_t bi = target.begin;
        for (std::size_t k = target.begin; k < target.end; ++k) {
            const double d = std::abs(slow_of(cfg, curve.points[k]) - slow_value);
            if (d < best) {
                best = d;
                bi = k;
            }
        }
        if (best > 0.25 * std::abs(fp.high - fp.low))
            throw NoReturnDrift("jump landing missing on the opposite arc");
        const bool goods = cfg.fast_side == FastSide::Goods;
        double fast = goods ? curve.points[bi].y : curve.points[bi].r;
        for (int it = 0; it < 80; ++it) {
            const double y = goods ? fast : slow_value;
            const double r = goods ? slow_value : fast;
            const double f = curve_residual(curve.which, y, r, cfg);
            if (std::abs(f) < 1e-12) break;
            const double df = fast_partial(curve.which, y, r, cfg) /
                              (goods ? cfg.alpha : cfg.beta);
            if (std::abs(df) < 1e-12) break;
            fast -= f / df;
        }
        return goods ? State(fast, slow_value) : State(slow_value, fast);
    };

    const double a1_fold_slow = slow_of(cfg, a1_fold.state);
    const double a3_fold_slow = slow_of(cfg, a3_fold.state);
    const State c_on_a3 = landing(*a3, a1_fold_slow);
    const State c_on_a1 = landing(*a1, a3_fold_slow);

    // Assemble: A1 from landing to fold, jump to A3, A3 back to its fold,
    // jump home. Arc segments are clipped between the two slow values.
    auto arc_segment = [&](const Arc& a, double from_slow, double to_slow) {
        std::vector<State> seg;
        const bool increasing = from_slow < to_slow;
        for (std::size_t k = a.begin; k < a.end; ++k) {
            const double sv = slow_of(cfg, curve.points[k]);
            if (sv >= std::min(from_slow, to_slow) - 1e-12 &&
                sv <= std::max(from_slow, to_slow) + 1e-12)
                seg.push_back(curve.points[k]);
        }
        std::sort(seg.begin(), seg.end(), [&](const State& x, const State& y) {
            return increasing ? slow_of(cfg, x) < slow_of(cfg, y)
                              : slow_of(cfg, x) > slow_of(cfg, y);
        });
        return seg;
    };

    SingularOrbit orbit;
    std::vector<State> seg1 = arc_segment(*a1, a3_fold_slow, a1_fold_slow);
    std::vector<State> seg3 = arc_segment(*a3, a1_fold_slow, a3_fold_slow);
    if (seg1.size() < 2 || seg3.size() < 2)
        throw NoReturnDrift("stable arcs do not span the fold window");

    orbit.loop.clear();
    orbit.loop.insert(orbit.loop.end(), seg1.begin(), seg1.end());
    orbit.loop.push_back(a1_fold.state);
    orbit.loop.push_back(c_on_a3);
    orbit.loop.insert(orbit.loop.end(), seg3.begin(), seg3.end());
    orbit.loop.push_back(a3_fold.state);
    orbit.loop.push_back(c_on_a1);

    const bool low_is_a1 = a1_fold_slow < a3_fold_slow;
    orbit.jump_low = low_is_a1 ? std::make_pair(a1_fold.state, c_on_a3)
                               : std::make_pair(a3_fold.state, c_on_a1);
    orbit.jump_high = low_is_a1 ? std::make_pair(a3_fold.state, c_on_a1)
                                : std::make_pair(a1_fold.state, c_on_a3);

    std::vector<std::pair<double, double>> poly;
    for (const auto& s : orbit.loop) {
        if (cfg.fast_side == FastSide::Goods)
            poly.emplace_back(s.r, s.y);
        else
            poly.emplace_back(s.y, s.r);
    }
    orbit.orientation =
        signed_area(poly) < 0.0 ? Orientation::Clockwise : Orientation::Counterclockwise;
    return orbit;
}

double point_segment_distance(const State& p, const State& a, const State& b) {
    const double vy = b.y - a.y, vr = b.r - a.r;
    const double len2 = vy * vy + vr * vr;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.y - a.y) * vy + (p.r - a.r) * vr) / len2, 0.0, 1.0);
    return std::hypot(p.y - (a.y + t * vy), p.r - (a.r + t * vr));
}

double hausdorff_distance(const std::vector<State>& a, const std::vector<State>& b) {
    // Both sets are treated as closed polylines; vertex-to-segment distance
    // removes the sampling-resolution floor a pure point metric would have.
    auto directed = [](const std::vector<State>& u, const std::vector<State>& v) {
        double worst = 0.0;
        for (const auto& p : u) {
            double best = 1e300;
            for (std::size_t k = 0; k < v.size(); ++k)
                best = std::min(best, point_segment_distance(p, v[k], v[(k + 1) % v.size()]));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

std::vector<std::pair<double, double>> epsilon_convergence(const ModelConfig& cfg,
                                                           const std::vector<double>& eps_list) {
    const SingularOrbit orbit = singular_orbit(cfg);
    std::vector<std::pair<double, double>> out;
    for (const double eps : eps_list) {
        ModelConfig c = cfg;
        c.epsilon = eps;
        const CycleReport rep = detect_cycle(c, cycle_seed(c));
        std::vector<State> cyc;
        cyc.reserve(rep.cycle_samples.size());
        for (const auto& s : rep.cycle_samples) cyc.push_back(s.state);
        out.emplace_back(eps, hausdorff_distance(cyc, orbit.loop));
    }
    return out;
}

} // namespace islm
