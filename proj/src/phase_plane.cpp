#include "islm/phase_plane.hpp"

#include <algorithm>
#include <cmath>

namespace islm {

namespace {

// Relative threshold: a pair counts as degenerate when the small eigenvalue is
// tiny against the large one. Keeps labels invariant under common scaling of
// alpha and beta.
constexpr double kDegenerateRatio = 1e-5;
constexpr double kDiscriminantNodeTol = 1e-12;

} // namespace

std::string to_string(EquilibriumKind k) {
    switch (k) {
    case EquilibriumKind::StableNode: return "stable_node";
    case EquilibriumKind::StableFocus: return "stable_focus";
    case EquilibriumKind::UnstableNode: return "unstable_node";
    case EquilibriumKind::UnstableFocus: return "unstable_focus";
    case EquilibriumKind::Saddle: return "saddle";
    case EquilibriumKind::DegenerateZeroEig: return "degenerate_zero_eig";
    }
    return "?";
}

std::pair<double, double> residuals(double y, double r, const ModelConfig& cfg) {
    const FunctionValues f = eval_at(y, r, cfg);
    return {f.invest - f.saving, f.demand - f.supply - cfg.m_s};
}

VectorFieldValue vector_field(const State& s, const ModelConfig& cfg) {
    const auto [goods, money] = residuals(s.y, s.r, cfg);
    VectorFieldValue v;
    if (cfg.fast_side == FastSide::Goods) {
        v.dy_dt = cfg.alpha * goods;
        v.dr_dt = cfg.epsilon * cfg.beta * money;
    } else {
        v.dy_dt = cfg.epsilon * cfg.alpha * goods;
        v.dr_dt = cfg.beta * money;
    }
    return v;
}

Jacobian2 jacobian(const State& s, const ModelConfig& cfg) {
    const Partials p = partials_at(s.y, s.r, cfg);
    const double gy = cfg.alpha * (p.i_y - p.s_y);
    const double gr = cfg.alpha * (p.i_r - p.s_r);
    const double my = cfg.beta * (p.l_y - p.m_y);
    const double mr = cfg.beta * (p.l_r - p.m_r);

    Jacobian2 j;
    if (cfg.fast_side == FastSide::Goods) {
        j.j11 = gy;
        j.j12 = gr;
        j.j21 = cfg.epsilon * my;
        j.j22 = cfg.epsilon * mr;
    } else {
        j.j11 = cfg.epsilon * gy;
        j.j12 = cfg.epsilon * gr;
        j.j21 = my;
        j.j22 = mr;
    }
    j.trace = j.j11 + j.j22;
    j.det = j.j11 * j.j22 - j.j12 * j.j21;
    return j;
}

std::pair<std::complex<double>, std::complex<double>> eigen2(const Jacobian2& j) {
    const double t = j.trace;
    const double d = j.det;
    const double disc = t * t - 4.0 * d;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        // Avoid cancellation: compute the larger-magnitude root first.
        double l1;
        if (t >= 0.0)
            l1 = 0.5 * (t + root);
        else
            l1 = 0.5 * (t - root);
        const double l2 = (l1 != 0.0) ? d / l1 : 0.5 * (t + (t >= 0.0 ? -root : root));
        return {std::complex<double>(l1, 0.0), std::complex<double>(l2, 0.0)};
    }
    const double re = 0.5 * t;
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

EquilibriumKind classify(const Jacobian2& j) {
    const auto [l1, l2] = eigen2(j);
    const double a1 = std::abs(l1), a2 = std::abs(l2);
    const double big = std::max(a1, a2);
    const double small = std::min(a1, a2);
    if (big == 0.0 || small <= kDegenerateRatio * big)
        return EquilibriumKind::DegenerateZeroEig;
    if (j.det < 0.0)
        return EquilibriumKind::Saddle;
    const double disc = j.trace * j.trace - 4.0 * j.det;
    const bool node = disc >= -kDiscriminantNodeTol; // boundary reported as node
    if (j.trace < 0.0)
        return node ? EquilibriumKind::StableNode : EquilibriumKind::StableFocus;
    return node ? EquilibriumKind::UnstableNode : EquilibriumKind::UnstableFocus;
}

Equilibrium make_equilibrium(const State& s, const ModelConfig& cfg) {
    Equilibrium e;
    e.state = s;
    e.jac = jacobian(s, cfg);
    e.eigs = eigen2(e.jac);
    e.kind = classify(e.jac);
    return e;
}

std::optional<State> refine_equilibrium(double y0, double r0, const ModelConfig& cfg,
                                        double tol) {
    double y = y0, r = r0;
    auto norm = [&](double a, double b) { return std::max(std::abs(a), std::abs(b)); };
    auto [f1, f2] = residuals(y, r, cfg);
    double fn = norm(f1, f2);

    for (int it = 0; it < 50; ++it) {
        if (fn < tol) break;
        const Partials p = partials_at(y, r, cfg);
        const double a = p.i_y - p.s_y, b = p.i_r - p.s_r;
        const double c = p.l_y - p.m_y, d = p.l_r - p.m_r;
        const double det = a * d - b * c;
        if (std::abs(det) < 1e-300) return std::nullopt;
        const double dy = (d * f1 - b * f2) / det;
        const double dr = (a * f2 - c * f1) / det;

        // Backtracking damping.
        double lambda = 1.0;
        bool improved = false;
        for (int half = 0; half < 30; ++half) {
            const double yn = y - lambda * dy;
            const double rn = r - lambda * dr;
            auto [g1, g2] = residuals(yn, rn, cfg);
            if (norm(g1, g2) < fn) {
                y = yn;
                r = rn;
                f1 = g1;
                f2 = g2;
                fn = norm(f1, f2);
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) return std::nullopt;
    }
    if (!(fn < tol) || !std::isfinite(y) || !std::isfinite(r)) return std::nullopt;
    if (y < 0.0) return std::nullopt; // income domain is Y >= 0
    return State(y, r);
}

namespace {

// Cell-level fallback: subdivide and rescan when Newton fails from the center.
// A 3x3 stencil keeps close root pairs near folds from slipping through.
void scan_cell(const ModelConfig& cfg, double y0, double y1, double r0, double r1, int depth,
               std::vector<State>& roots) {
    double c1[9], c2[9];
    int n = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double y = y0 + 0.5 * i * (y1 - y0);
            const double r = r0 + 0.5 * j * (r1 - r0);
            const auto [f1, f2] = residuals(y, r, cfg);
            c1[n] = f1;
            c2[n] = f2;
            ++n;
        }
    auto sign_change = [](const double* c) {
        double lo = c[0], hi = c[0];
        for (int k = 1; k < 9; ++k) {
            lo = std::min(lo, c[k]);
            hi = std::max(hi, c[k]);
        }
        return lo <= 0.0 && hi >= 0.0;
    };
    if (!sign_change(c1) || !sign_change(c2)) return;

    if (auto s = refine_equilibrium(0.5 * (y0 + y1), 0.5 * (r0 + r1), cfg)) {
        // Accept only roots that stay near the seeding cell; distant
        // convergence is picked up by that root's own cell.
        const double wy = (y1 - y0), wr = (r1 - r0);
        if (s->y >= y0 - wy && s->y <= y1 + wy && s->r >= r0 - wr && s->r <= r1 + wr) {
            roots.push_back(*s);
            return;
        }
    }
    if (depth >= 6) return;
    const double ym = 0.5 * (y0 + y1), rm = 0.5 * (r0 + r1);
    scan_cell(cfg, y0, ym, r0, rm, depth + 1, roots);
    scan_cell(cfg, ym, y1, r0, rm, depth + 1, roots);
    scan_cell(cfg, y0, ym, rm, r1, depth + 1, roots);
    scan_cell(cfg, ym, y1, rm, r1, depth + 1, roots);
}

} // namespace

std::vector<Equilibrium> find_equilibria(const ModelConfig& cfg, const GridSpec& grid) {
    std::vector<State> roots;
    for (std::size_t i = 0; i + 1 < grid.ny; ++i)
        for (std::size_t j = 0; j + 1 < grid.nr; ++j)
            scan_cell(cfg, grid.y_at(i), grid.y_at(i + 1), grid.r_at(j), grid.r_at(j + 1), 0,
                      roots);

    // Merge duplicates within 1e-6 in state space.
    std::vector<State> unique;
    for (const State& s : roots) {
        bool dup = false;
        for (const State& u : unique)
            if (std::abs(s.y - u.y) < 1e-6 && std::abs(s.r - u.r) < 1e-6) {
                dup = true;
                break;
            }
        if (!dup) unique.push_back(s);
    }
    if (unique.empty())
        throw NoEquilibrium("no equilibrium found in the grid window; check condition (13)");

    std::sort(unique.begin(), unique.end(), [](const State& a, const State& b) { return a.y < b.y; });

    std::vector<Equilibrium> out;
    out.reserve(unique.size());
    for (const State& s : unique) {
        const VectorFieldValue v = vector_field(s, cfg);
        if (std::max(std::abs(v.dy_dt), std::abs(v.dr_dt)) > 1e-10) continue;
        out.push_back(make_equilibrium(s, cfg));
    }
    if (out.empty())
        throw NoEquilibrium("refined roots failed the vector-field tolerance");
    return out;
}

} // namespace islm
