#include "islm/isocline.hpp"

#include <algorithm>
#include <cmath>

namespace islm {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kStepInit = 1e-2;
constexpr double kStepMin = 1e-5;
constexpr double kStepMax = 5e-2;
constexpr double kTurnLimit = 5e-2; // radians per step before shrinking

struct Vec2 {
    double y, r;
};

double dot(Vec2 a, Vec2 b) { return a.y * b.y + a.r * b.r; }
double norm(Vec2 a) { return std::hypot(a.y, a.r); }

} // namespace

std::string to_string(CurveId c) { return c == CurveId::IS ? "IS" : "LM"; }

std::string to_string(ArcLabel a) {
    switch (a) {
    case ArcLabel::A1: return "A1";
    case ArcLabel::A2: return "A2";
    case ArcLabel::A3: return "A3";
    case ArcLabel::Monotone: return "monotone";
    }
    return "?";
}

std::string to_string(Stability s) { return s == Stability::Stable ? "stable" : "unstable"; }

double curve_residual(CurveId which, double y, double r, const ModelConfig& cfg) {
    const FunctionValues f = eval_at(y, r, cfg);
    return which == CurveId::IS ? f.invest - f.saving : f.demand - f.supply - cfg.m_s;
}

double fast_partial(CurveId which, double y, double r, const ModelConfig& cfg) {
    const Partials p = partials_at(y, r, cfg);
    return which == CurveId::IS ? cfg.alpha * (p.i_y - p.s_y) : cfg.beta * (p.l_r - p.m_r);
}

double fast_coordinate(CurveId which, const State& s, const ModelConfig& cfg) {
    return which == CurveId::IS ? s.y : short_rate(s.r, cfg);
}

CurveId fast_curve(const ModelConfig& cfg) {
    return cfg.fast_side == FastSide::Goods ? CurveId::IS : CurveId::LM;
}

namespace {

Vec2 gradient(CurveId which, double y, double r, const ModelConfig& cfg) {
    const Partials p = partials_at(y, r, cfg);
    if (which == CurveId::IS) return {p.i_y - p.s_y, p.i_r - p.s_r};
    return {p.l_y - p.m_y, p.l_r - p.m_r};
}

// Newton projection back onto the zero set along the gradient direction.
bool project(CurveId which, const ModelConfig& cfg, Vec2& x) {
    for (int it = 0; it < 60; ++it) {
        const double f = curve_residual(which, x.y, x.r, cfg);
        if (std::abs(f) < kResidualTol) return true;
        const Vec2 g = gradient(which, x.y, x.r, cfg);
        const double g2 = dot(g, g);
        if (g2 < 1e-300) return false;
        x.y -= f * g.y / g2;
        x.r -= f * g.r / g2;
        if (!std::isfinite(x.y) || !std::isfinite(x.r)) return false;
    }
    return std::abs(curve_residual(which, x.y, x.r, cfg)) < kResidualTol;
}

bool inside(const GridSpec& w, Vec2 x) {
    return x.y >= w.y_min && x.y <= w.y_max && x.r >= w.r_min && x.r <= w.r_max;
}

// Unit tangent (gradient rotated by 90 degrees), oriented to match `along`.
Vec2 tangent(CurveId which, const ModelConfig& cfg, Vec2 x, Vec2 along) {
    const Vec2 g = gradient(which, x.y, x.r, cfg);
    Vec2 t{g.r, -g.y};
    const double n = norm(t);
    t.y /= n;
    t.r /= n;
    if (dot(t, along) < 0.0) {
        t.y = -t.y;
        t.r = -t.r;
    }
    return t;
}

// Seed from a sign change along grid edges, bisected onto the curve.
Vec2 find_seed(CurveId which, const ModelConfig& cfg, const GridSpec& w) {
    const std::size_t n = 96;
    auto f = [&](double y, double r) { return curve_residual(which, y, r, cfg); };
    auto yc = [&](std::size_t i) {
        return w.y_min + (w.y_max - w.y_min) * static_cast<double>(i) / static_cast<double>(n);
    };
    auto rc = [&](std::size_t j) {
        return w.r_min + (w.r_max - w.r_min) * static_cast<double>(j) / static_cast<double>(n);
    };
    for (std::size_t i = 0; i <= n; ++i) {
        double prev = f(yc(i), rc(0));
        for (std::size_t j = 1; j <= n; ++j) {
            const double cur = f(yc(i), rc(j));
            if (prev == 0.0) return {yc(i), rc(j - 1)};
            if (prev * cur < 0.0) {
                double a = rc(j - 1), b = rc(j), fa = prev;
                for (int it = 0; it < 80; ++it) {
                    const double m = 0.5 * (a + b);
                    const double fm = f(yc(i), m);
                    if (fm == 0.0) return {yc(i), m};
                    if (fa * fm < 0.0)
                        b = m;
                    else {
                        a = m;
                        fa = fm;
                    }
                }
                return {yc(i), 0.5 * (a + b)};
            }
            prev = cur;
        }
    }
    throw SeedNotFound(to_string(which) + " isocline does not intersect the window");
}

// One-sided continuation until the window boundary; returns points beyond the
// seed (seed itself excluded).
std::vector<Vec2> march(CurveId which, const ModelConfig& cfg, const GridSpec& w, Vec2 seed,
                        Vec2 dir0) {
    std::vector<Vec2> pts;
    Vec2 x = seed;
    Vec2 dir = dir0;
    double h = kStepInit;
    const std::size_t cap = 200000;
    while (pts.size() < cap) {
        const Vec2 t = tangent(which, cfg, x, dir);
        Vec2 pred{x.y + h * t.y, x.r + h * t.r};
        Vec2 corr = pred;
        if (!project(which, cfg, corr)) {
            h *= 0.5;
            if (h < kStepMin) break;
            continue;
        }
        // Curvature control via the turn angle between successive tangents.
        const Vec2 tn = tangent(which, cfg, corr, t);
        const double cosang = std::clamp(dot(t, tn), -1.0, 1.0);
        const double ang = std::acos(cosang);
        if (ang > kTurnLimit && h > kStepMin) {
            h = std::max(kStepMin, 0.5 * h);
            continue;
        }
        if (!inside(w, corr)) {
            // Bisect along the step so the final sample lands on the boundary.
            Vec2 lo = x, hi = corr;
            for (int it = 0; it < 60; ++it) {
                Vec2 mid{0.5 * (lo.y + hi.y), 0.5 * (lo.r + hi.r)};
                if (!project(which, cfg, mid)) break;
                if (inside(w, mid))
                    lo = mid;
                else
                    hi = mid;
            }
            if (inside(w, lo) && (lo.y != x.y || lo.r != x.r)) pts.push_back(lo);
            break;
        }
        dir = Vec2{corr.y - x.y, corr.r - x.r};
        x = corr;
        pts.push_back(x);
        if (ang < 0.2 * kTurnLimit) h = std::min(kStepMax, 1.4 * h);
    }
    return pts;
}

} // namespace

IsoclineCurve trace_isocline(CurveId which, const ModelConfig& cfg, const GridSpec& window) {
    const Vec2 seed = find_seed(which, cfg, window);
    Vec2 seed_proj = seed;
    if (!project(which, cfg, seed_proj))
        throw SeedNotFound("seed projection failed for " + to_string(which));

    const Vec2 t0 = tangent(which, cfg, seed_proj, Vec2{1.0, 0.0});
    std::vector<Vec2> fwd = march(which, cfg, window, seed_proj, t0);
    std::vector<Vec2> bwd = march(which, cfg, window, seed_proj, Vec2{-t0.y, -t0.r});

    std::vector<Vec2> all;
    all.reserve(fwd.size() + bwd.size() + 1);
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) all.push_back(*it);
    all.push_back(seed_proj);
    for (const auto& p : fwd) all.push_back(p);

    IsoclineCurve curve;
    curve.which = which;
    if (all.size() < 2) throw SeedNotFound("curve degenerate inside window");

    // Canonical orientation: fast coordinate increasing front to back.
    const double c0 = fast_coordinate(which, State(std::max(0.0, all.front().y), all.front().r), cfg);
    const double c1 = fast_coordinate(which, State(std::max(0.0, all.back().y), all.back().r), cfg);
    if (c0 > c1) std::reverse(all.begin(), all.end());

    curve.points.reserve(all.size());
    curve.arc_params.reserve(all.size());
    double s = 0.0;
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (k > 0)
            s += std::hypot(all[k].y - all[k - 1].y, all[k].r - all[k - 1].r);
        curve.points.emplace_back(std::max(0.0, all[k].y), all[k].r);
        curve.arc_params.push_back(s);
    }

    // Folds: sign changes of the fast partial, bisected along the curve.
    for (std::size_t k = 0; k + 1 < curve.points.size(); ++k) {
        const State& a = curve.points[k];
        const State& b = curve.points[k + 1];
        const double fa = fast_partial(which, a.y, a.r, cfg);
        const double fb = fast_partial(which, b.y, b.r, cfg);
        if (fa == 0.0) {
            curve.folds.push_back({k, a, curve.arc_params[k]});
            continue;
        }
        if (fa * fb >= 0.0) continue;
        Vec2 lo{a.y, a.r}, hi{b.y, b.r};
        double flo = fa;
        double tl = 0.0, th = 1.0;
        for (int it = 0; it < 80 && (th - tl) > 1e-10; ++it) {
            Vec2 mid{0.5 * (lo.y + hi.y), 0.5 * (lo.r + hi.r)};
            if (!project(which, cfg, mid)) break;
            const double fm = fast_partial(which, mid.y, mid.r, cfg);
            if (flo * fm <= 0.0) {
                hi = mid;
                th = 0.5 * (tl + th);
            } else {
                lo = mid;
                flo = fm;
                tl = 0.5 * (tl + th);
            }
        }
        const State fold_state(std::max(0.0, 0.5 * (lo.y + hi.y)), 0.5 * (lo.r + hi.r));
        const double param = curve.arc_params[k] +
                             (th + tl) * 0.5 * (curve.arc_params[k + 1] - curve.arc_params[k]);
        curve.folds.push_back({k, fold_state, param});
    }
    return curve;
}

FoldPair fold_values(const IsoclineCurve& c) {
    if (c.folds.size() != 2)
        throw FoldCountMismatch(to_string(c.which) + " curve has " +
                                std::to_string(c.folds.size()) + " folds, expected 2");
    const double slow0 = c.which == CurveId::IS ? c.folds[0].state.r : c.folds[0].state.y;
    const double slow1 = c.which == CurveId::IS ? c.folds[1].state.r : c.folds[1].state.y;
    FoldPair fp;
    fp.low = std::min(slow0, slow1);
    fp.high = std::max(slow0, slow1);
    if (!(fp.low < fp.high)) throw FoldCountMismatch("fold slow values coincide");
    return fp;
}

IsoclineCurve arc_stability(IsoclineCurve c, const ModelConfig& cfg) {
    c.arcs.clear();
    if (c.points.empty()) return c;

    // Samples in a small neighbourhood of a fold may carry either sign; the
    // split indices come from the refined folds, labels from arc interiors.
    std::vector<std::size_t> cuts;
    for (const auto& f : c.folds) cuts.push_back(f.index + 1);
    std::sort(cuts.begin(), cuts.end());

    std::vector<Arc> arcs;
    std::size_t begin = 0;
    auto close_arc = [&](std::size_t end) {
        if (end <= begin) return;
        // Probe stability at the sample farthest from the arc ends.
        const std::size_t mid = begin + (end - begin) / 2;
        const State& s = c.points[mid];
        const double fp = fast_partial(c.which, s.y, s.r, cfg);
        const double fold_dist = [&] {
            double dmin = 1e300;
            for (const auto& f : c.folds)
                dmin = std::min(dmin, std::abs(c.arc_params[mid] - f.arc_param));
            return dmin;
        }();
        if (std::abs(fp) < 1e-12 && fold_dist > 1e-6)
            throw AmbiguousSign("fast partial vanishes away from a fold");
        arcs.push_back({begin, end, ArcLabel::Monotone,
                        fp < 0.0 ? Stability::Stable : Stability::Unstable});
        begin = end;
    };
    for (const std::size_t cut : cuts) close_arc(cut);
    close_arc(c.points.size());

    if (arcs.size() == 3) {
        arcs[0].label = ArcLabel::A1;
        arcs[1].label = ArcLabel::A2;
        arcs[2].label = ArcLabel::A3;
    }
    c.arcs = std::move(arcs);
    return c;
}

} // namespace islm
