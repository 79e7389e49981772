#include "islm/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "islm/slowfast.hpp"

namespace islm {

std::string to_string(SweepParameter p) {
    return p == SweepParameter::MonetaryMS ? "monetary_ms" : "fiscal_shift";
}

ModelConfig shifted(const ModelConfig& cfg, SweepParameter parameter, double value) {
    ModelConfig c = cfg;
    if (parameter == SweepParameter::MonetaryMS) {
        if (!(value > 0.0))
            throw std::invalid_argument("MonetaryMS shift requires m_s > 0");
        c.m_s = value;
    } else {
        c.invest.i0 = cfg.invest.i0 + value;
    }
    return c;
}

ModelConfig apply_shift(const ModelConfig& cfg, SweepParameter parameter, double value,
                        const GridSpec& grid) {
    const ModelConfig c = shifted(cfg, parameter, value);
    const ConditionReport rep = verify_conditions(c, grid);
    if (!rep.passed())
        throw ConditionBroken("shifted config fails verification, first violation: " +
                              (rep.violations.empty() ? std::string("(13)")
                                                      : rep.violations.front().condition));
    return c;
}

namespace {

std::vector<Equilibrium> equilibria_at(const ModelConfig& base, SweepParameter param, double value,
                                       const GridSpec& grid,
                                       const std::vector<Equilibrium>* warm) {
    const ModelConfig c = shifted(base, param, value);
    std::vector<Equilibrium> found;
    auto push_unique = [&](const Equilibrium& e) {
        for (const auto& f : found)
            if (std::abs(e.state.y - f.state.y) < 1e-6 && std::abs(e.state.r - f.state.r) < 1e-6)
                return;
        found.push_back(e);
    };
    if (warm) {
        for (const auto& e : *warm)
            if (auto s = refine_equilibrium(e.state.y, e.state.r, c))
                push_unique(make_equilibrium(*s, c));
    }
    // The grid scan always runs; warm seeds only add robustness near folds.
    std::vector<Equilibrium> scanned;
    try {
        scanned = find_equilibria(c, grid);
    } catch (const NoEquilibrium&) {
        if (found.empty()) throw;
    }
    for (const auto& e : scanned) push_unique(e);
    std::sort(found.begin(), found.end(),
              [](const Equilibrium& a, const Equilibrium& b) { return a.state.y < b.state.y; });
    return found;
}

} // namespace

BranchDiagram sweep(const SweepSpec& spec, const GridSpec& grid) {
    if (spec.values.size() < 2)
        throw std::invalid_argument("sweep needs at least two values");
    for (std::size_t k = 1; k < spec.values.size(); ++k)
        if (!(spec.values[k] > spec.values[k - 1]))
            throw std::invalid_argument("sweep values must be strictly increasing");

    BranchDiagram diag;
    diag.parameter = spec.parameter;

    const std::vector<Equilibrium>* warm = nullptr;
    for (const double v : spec.values) {
        BranchSlice slice;
        slice.value = v;
        slice.equilibria = equilibria_at(spec.base, spec.parameter, v, grid, warm);
        diag.slices.push_back(std::move(slice));
        warm = &diag.slices.back().equilibria;
    }

    // Refine each count change by bisection on the parameter, cross-checked
    // by the vanishing determinant at the merging pair.
    for (std::size_t k = 0; k + 1 < diag.slices.size(); ++k) {
        const std::size_t n0 = diag.slices[k].equilibria.size();
        const std::size_t n1 = diag.slices[k + 1].equilibria.size();
        if (n0 == n1) continue;
        double lo = diag.slices[k].value, hi = diag.slices[k + 1].value;
        const std::vector<Equilibrium>* seeds = &diag.slices[k].equilibria;
        // The merging pair lives on the side with more equilibria; keep its
        // latest incarnation for seeding the Newton polish.
        std::vector<Equilibrium> rich_eqs =
            n0 > n1 ? diag.slices[k].equilibria : diag.slices[k + 1].equilibria;
        for (int it = 0; it < 60 && (hi - lo) > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            auto eqs = equilibria_at(spec.base, spec.parameter, mid, grid, seeds);
            const bool rich = eqs.size() == std::max(n0, n1);
            if (rich) rich_eqs = eqs;
            if (eqs.size() == n0)
                lo = mid;
            else
                hi = mid;
        }
        // Polish with the extended-system Newton, seeded by the flattest
        // equilibrium of the merging pair.
        double fold = 0.5 * (lo + hi);
        const Equilibrium* flattest = nullptr;
        for (const auto& e : rich_eqs)
            if (!flattest || std::abs(e.jac.det) < std::abs(flattest->jac.det)) flattest = &e;
        if (flattest) {
            if (auto loc = locate_fold(spec.base, spec.parameter, fold, flattest->state))
                fold = loc->value;
        }
        diag.fold_values.push_back(fold);
    }
    return diag;
}

std::optional<FoldLocation> locate_fold(const ModelConfig& base, SweepParameter parameter,
                                        double value_guess, const State& state_guess) {
    // Unknowns u = (y, r, v); equations: both residuals and the unscaled
    // determinant (I_Y-S_Y)(L_R-M_R) - (I_R-S_R)(L_Y-M_Y).
    auto delta = [&](double y, double r, const ModelConfig& c) {
        const Partials p = partials_at(y, r, c);
        return (p.i_y - p.s_y) * (p.l_r - p.m_r) - (p.i_r - p.s_r) * (p.l_y - p.m_y);
    };
    double y = state_guess.y, r = state_guess.r, v = value_guess;
    for (int it = 0; it < 80; ++it) {
        if (parameter == SweepParameter::MonetaryMS && !(v > 0.0)) return std::nullopt;
        const ModelConfig c = shifted(base, parameter, v);
        const auto [f1, f2] = residuals(y, r, c);
        const double f3 = delta(y, r, c);
        if (std::max({std::abs(f1), std::abs(f2), std::abs(f3)}) < 1e-12) {
            if (y < 0.0) return std::nullopt;
            return FoldLocation{v, State(y, r)};
        }
        const Partials p = partials_at(y, r, c);
        const double h = 1e-6;
        const double d_y = (delta(y + h, r, c) - delta(y - h, r, c)) / (2 * h);
        const double d_r = (delta(y, r + h, c) - delta(y, r - h, c)) / (2 * h);
        // Parameter column: m_s enters f2 with -1; i0 enters f1 with +1.
        const double f1_v = parameter == SweepParameter::FiscalShift ? 1.0 : 0.0;
        const double f2_v = parameter == SweepParameter::MonetaryMS ? -1.0 : 0.0;
        const double J[3][3] = {{p.i_y - p.s_y, p.i_r - p.s_r, f1_v},
                                {p.l_y - p.m_y, p.l_r - p.m_r, f2_v},
                                {d_y, d_r, 0.0}};
        // Cramer's rule on the 3x3 system J * du = -f.
        const double det3 = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                            J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                            J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
        if (std::abs(det3) < 1e-300) return std::nullopt;
        const double b[3] = {-f1, -f2, -f3};
        auto solve_col = [&](int col) {
            double M[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) M[i][j] = J[i][j];
            for (int i = 0; i < 3; ++i) M[i][col] = b[i];
            return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                    M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                    M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
                   det3;
        };
        const double dy = solve_col(0), dr = solve_col(1), dv = solve_col(2);
        y += dy;
        r += dr;
        v += dv;
        if (!std::isfinite(y) || !std::isfinite(r) || !std::isfinite(v)) return std::nullopt;
    }
    return std::nullopt;
}

namespace {

// Relaxes the state to the nearest attractor under the full flow; caps the
// settling horizon. Returns nullopt when it fails to settle (cycling).
std::optional<State> settle(const ModelConfig& cfg, const State& from) {
    StepControl ctrl;
    ctrl.rel_tol = 1e-9;
    ctrl.abs_tol = 1e-11;
    State cur = from;
    double t_done = 0.0;
    const double cap = 1e5;
    const double chunk = 2000.0;
    while (t_done < cap) {
        Trajectory traj;
        try {
            traj = integrate(cur, cfg, std::min(chunk, cap - t_done), ctrl);
        } catch (const DomainExit&) {
            return std::nullopt;
        }
        cur = traj.samples.back().state;
        t_done += traj.samples.back().t;
        // Newton polish: settled once the flow has carried the state into an
        // equilibrium's convergence basin. A nearby ghost after a fold makes
        // Newton converge far away instead, so the distance gate matters.
        if (auto s = refine_equilibrium(cur.y, cur.r, cfg)) {
            if (std::hypot(s->y - cur.y, s->r - cur.r) < 1e-3) return s;
        }
    }
    return std::nullopt;
}

} // namespace

HysteresisReport hysteresis_run(const ModelConfig& cfg, SweepParameter parameter,
                                const std::vector<double>& path, const GridSpec& grid) {
    if (path.size() < 3) throw std::invalid_argument("hysteresis path too short");

    HysteresisReport rep;
    rep.parameter = parameter;
    rep.path_step = std::abs(path[1] - path[0]);

    auto run_leg = [&](const std::vector<double>& values,
                       std::vector<std::pair<double, State>>& branch) -> std::optional<double> {
        const ModelConfig first = shifted(cfg, parameter, values.front());
        auto eqs = find_equilibria(first, grid);
        // Follow the attractor the system actually relaxes to at the start.
        const Equilibrium* start = nullptr;
        for (const auto& e : eqs)
            if (e.kind == EquilibriumKind::StableNode || e.kind == EquilibriumKind::StableFocus) {
                start = &e;
                break;
            }
        if (!start) throw NoHysteresis("no attractor at the start of the path");
        State cur = start->state;
        branch.emplace_back(values.front(), cur);

        std::optional<double> jump_at;
        for (std::size_t k = 1; k < values.size(); ++k) {
            const ModelConfig c = shifted(cfg, parameter, values[k]);
            // A small nudge prevents metastable lingering on a branch that
            // has just turned weakly repelling.
            const State nudged(std::max(0.0, cur.y * (1.0 + 1e-9) + 1e-9), cur.r + 1e-9);
            const auto settled = settle(c, nudged);
            if (!settled) throw NoHysteresis("state failed to settle while tracking");
            const double moved = std::hypot(settled->y - cur.y, settled->r - cur.r);
            const double scale = std::max(1e-3, 0.05 * (std::abs(cur.y) + std::abs(cur.r)));
            if (!jump_at && moved > std::max(10.0 * rep.path_step, scale))
                jump_at = values[k];
            cur = *settled;
            branch.emplace_back(values[k], cur);
        }
        return jump_at;
    };

    std::vector<double> up(path);
    std::sort(up.begin(), up.end());
    std::vector<double> down(up.rbegin(), up.rend());

    const auto up_jump = run_leg(up, rep.up_branch);
    const auto down_jump = run_leg(down, rep.down_branch);
    if (!up_jump || !down_jump)
        throw NoHysteresis("no jump detected along the path (single-branch region)");
    rep.up_jump = *up_jump;
    rep.down_jump = *down_jump;

    auto before = [&](const std::vector<std::pair<double, State>>& branch, double at) {
        State s = branch.front().second;
        for (const auto& [v, st] : branch) {
            if (v == at) break;
            s = st;
        }
        return s;
    };
    rep.up_state_before = before(rep.up_branch, rep.up_jump);
    rep.down_state_before = before(rep.down_branch, rep.down_jump);
    return rep;
}

} // namespace islm
