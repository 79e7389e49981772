#include <doctest.h>

#include <cmath>

#include "islm/defaults.hpp"
#include "islm/isocline.hpp"
#include "islm/scenario.hpp"

using namespace islm;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v;
    for (std::size_t k = 0; k < n; ++k)
        v.push_back(a + (b - a) * double(k) / double(n - 1));
    return v;
}

bool is_attractor(const Equilibrium& e) {
    return e.kind == EquilibriumKind::StableNode || e.kind == EquilibriumKind::StableFocus;
}

} // namespace

TEST_CASE("FiscalShift of zero is the identity") {
    const ModelConfig c = default_kaldor();
    const ModelConfig s = apply_shift(c, SweepParameter::FiscalShift, 0.0, default_grid(c));
    CHECK(s.invest.i0 == c.invest.i0);
    CHECK(s.m_s == c.m_s);
}

TEST_CASE("MonetaryMS of zero violates the precondition") {
    const ModelConfig c = default_kaldor();
    CHECK_THROWS_AS(apply_shift(c, SweepParameter::MonetaryMS, 0.0, default_grid(c)),
                    std::invalid_argument);
}

TEST_CASE("MonetaryMS doubling on the affine config moves R down along IS") {
    const ModelConfig c = original_degenerate();
    GridSpec g = default_grid(c);
    g.y_max = 20.0;

    // Linear-solve oracle for the affine system at a given m_s.
    auto solve = [&](double ms) {
        const double a11 = c.invest.linear_slope - c.save.s;
        const double a12 = -c.invest.h - c.save.g;
        const double b1 = -(c.invest.i0 - c.save.s0);
        const double a21 = c.demand.l;
        const double a22 = -c.demand.d;
        const double det = a11 * a22 - a12 * a21;
        return State((b1 * a22 - a12 * ms) / det, (a11 * ms - b1 * a21) / det);
    };

    const ModelConfig doubled = apply_shift(c, SweepParameter::MonetaryMS, 2.0 * c.m_s, g);
    const auto eqs1 = find_equilibria(c, g);
    const auto eqs2 = find_equilibria(doubled, g);
    REQUIRE(eqs1.size() == 1);
    REQUIRE(eqs2.size() == 1);
    const State o1 = solve(c.m_s), o2 = solve(2.0 * c.m_s);
    CHECK(eqs1[0].state.y == doctest::Approx(o1.y).epsilon(1e-8));
    CHECK(eqs2[0].state.y == doctest::Approx(o2.y).epsilon(1e-8));
    CHECK(eqs2[0].state.r < eqs1[0].state.r); // R decreases, movement along IS
    // The moved equilibrium still sits on the IS curve.
    CHECK(std::abs(curve_residual(CurveId::IS, eqs2[0].state.y, eqs2[0].state.r, doubled)) <
          1e-9);
}

TEST_CASE("ConditionBroken when a shift destroys a regime condition") {
    ModelConfig c = default_kaldor();
    // A huge negative intercept pushes R_IS(0) below R_LM(0): condition (13).
    CHECK_THROWS_AS(apply_shift(c, SweepParameter::FiscalShift, -60.0, default_grid(c)),
                    ConditionBroken);
}

TEST_CASE("MonetaryMS sweep on the Kaldor default: counts 1 -> 3 -> 1") {
    const ModelConfig c = default_kaldor();
    SweepSpec spec;
    spec.parameter = SweepParameter::MonetaryMS;
    spec.base = c;
    spec.values = linspace(0.5, 2.6, 29);
    const BranchDiagram diag = sweep(spec, default_grid(c));

    REQUIRE(diag.fold_values.size() == 2);
    std::vector<std::size_t> counts;
    for (const auto& s : diag.slices) counts.push_back(s.equilibria.size());
    CHECK(counts.front() == 1);
    CHECK(counts.back() == 1);
    CHECK(*std::max_element(counts.begin(), counts.end()) == 3);
    // Counts change only at the folds: 1...1 3...3 1...1.
    std::size_t transitions = 0;
    for (std::size_t k = 1; k < counts.size(); ++k)
        if (counts[k] != counts[k - 1]) ++transitions;
    CHECK(transitions == 2);

    for (const auto& s : diag.slices) {
        if (s.equilibria.size() != 3) continue;
        CHECK(is_attractor(s.equilibria[0]));
        CHECK(s.equilibria[1].kind == EquilibriumKind::Saddle);
        CHECK(is_attractor(s.equilibria[2]));
    }
}

TEST_CASE("affine config sweep keeps a single branch with no folds") {
    const ModelConfig c = original_degenerate();
    GridSpec g = default_grid(c);
    g.y_max = 30.0;
    SweepSpec spec;
    spec.parameter = SweepParameter::MonetaryMS;
    spec.base = c;
    spec.values = linspace(0.5, 3.0, 11);
    const BranchDiagram diag = sweep(spec, g);
    CHECK(diag.fold_values.empty());
    for (const auto& s : diag.slices) CHECK(s.equilibria.size() == 1);
}

TEST_CASE("FiscalShift sweep on the three-phase default: 1 -> 3 -> 1, middle saddle") {
    const ModelConfig c = default_three_phase();
    SweepSpec spec;
    spec.parameter = SweepParameter::FiscalShift;
    spec.base = c;
    // Shifts relative to i0 = 1; the fold window sits near i0 = 2.14..2.31.
    spec.values = linspace(0.8, 1.6, 33);
    const BranchDiagram diag = sweep(spec, default_grid(c));

    REQUIRE(diag.fold_values.size() == 2);
    std::vector<std::size_t> counts;
    for (const auto& s : diag.slices) counts.push_back(s.equilibria.size());
    CHECK(counts.front() == 1);
    CHECK(counts.back() == 1);
    CHECK(*std::max_element(counts.begin(), counts.end()) == 3);
    for (const auto& s : diag.slices) {
        if (s.equilibria.size() != 3) continue;
        CHECK(s.equilibria[1].kind == EquilibriumKind::Saddle);
    }
}

TEST_CASE("warm and cold sweeps produce identical diagrams") {
    const ModelConfig c = default_kaldor();
    const GridSpec g = default_grid(c);
    SweepSpec spec;
    spec.parameter = SweepParameter::MonetaryMS;
    spec.base = c;
    spec.values = linspace(0.6, 2.4, 13);
    const BranchDiagram warm = sweep(spec, g);
    // Cold: evaluate each slice in isolation.
    for (std::size_t k = 0; k < spec.values.size(); ++k) {
        const ModelConfig at = shifted(c, SweepParameter::MonetaryMS, spec.values[k]);
        const auto cold = find_equilibria(at, g);
        REQUIRE(cold.size() == warm.slices[k].equilibria.size());
        for (std::size_t i = 0; i < cold.size(); ++i) {
            CHECK(cold[i].kind == warm.slices[k].equilibria[i].kind);
            CHECK(cold[i].state.y ==
                  doctest::Approx(warm.slices[k].equilibria[i].state.y).epsilon(1e-8));
        }
    }
}

TEST_CASE("fold determinant vanishes at the refined fold parameters") {
    const ModelConfig c = default_kaldor();
    const GridSpec g = default_grid(c);
    SweepSpec spec;
    spec.parameter = SweepParameter::MonetaryMS;
    spec.base = c;
    spec.values = linspace(0.5, 2.6, 29);
    const BranchDiagram diag = sweep(spec, g);
    REQUIRE(diag.fold_values.size() == 2);
    for (const double fold : diag.fold_values) {
        // On the 3-count side of the fold, the merging pair's |det| is tiny.
        const ModelConfig at = shifted(c, SweepParameter::MonetaryMS, fold);
        double min_det = 1e300;
        try {
            for (const auto& e : find_equilibria(at, g))
                min_det = std::min(min_det, std::abs(e.jac.det));
        } catch (const NoEquilibrium&) {
        }
        CHECK(min_det < 1e-8);
    }
}

TEST_CASE("at a fold value one attractor and one degenerate point remain") {
    const ModelConfig c = default_kaldor();
    const GridSpec g = default_grid(c);
    SweepSpec spec;
    spec.parameter = SweepParameter::MonetaryMS;
    spec.base = c;
    spec.values = linspace(0.5, 2.6, 29);
    const BranchDiagram diag = sweep(spec, g);
    REQUIRE(diag.fold_values.size() == 2);

    // Seed the locator from the flattest equilibrium of a 3-count slice.
    const Equilibrium* seed = nullptr;
    for (const auto& s : diag.slices)
        if (s.equilibria.size() == 3)
            for (const auto& e : s.equilibria)
                if (!seed || std::abs(e.jac.det) < std::abs(seed->jac.det)) seed = &e;
    REQUIRE(seed != nullptr);
    const auto loc = locate_fold(c, SweepParameter::MonetaryMS, diag.fold_values[1], seed->state);
    REQUIRE(loc.has_value());
    const ModelConfig at = shifted(c, SweepParameter::MonetaryMS, loc->value);

    const Equilibrium degenerate = make_equilibrium(loc->state, at);
    CHECK(degenerate.kind == EquilibriumKind::DegenerateZeroEig);
    CHECK(std::abs(degenerate.jac.det) < 1e-12);

    // The regular partner elsewhere on the diagram is still an attractor.
    const auto eqs = find_equilibria(at, g);
    bool has_attractor = false;
    for (const auto& e : eqs)
        if (is_attractor(e) &&
            std::hypot(e.state.y - loc->state.y, e.state.r - loc->state.r) > 0.5)
            has_attractor = true;
    CHECK(has_attractor);
}

TEST_CASE("branch continuity bounds the motion between adjacent slices") {
    const ModelConfig c = default_kaldor();
    const GridSpec g = default_grid(c);
    SweepSpec spec;
    spec.parameter = SweepParameter::MonetaryMS;
    spec.base = c;
    spec.values = linspace(0.9, 2.0, 23);
    const double dp = spec.values[1] - spec.values[0];
    const BranchDiagram diag = sweep(spec, g);
    for (std::size_t k = 1; k < diag.slices.size(); ++k) {
        const auto& prev = diag.slices[k - 1].equilibria;
        const auto& cur = diag.slices[k].equilibria;
        if (prev.size() != cur.size()) continue;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            // Local sensitivity bound: |J^-1 df/dm_s| with df/dm_s = (0, -1).
            const Partials p = partials_at(prev[i].state.y, prev[i].state.r, c);
            const double det =
                (p.i_y - p.s_y) * (p.l_r - p.m_r) - (p.i_r - p.s_r) * (p.l_y - p.m_y);
            const double sens = std::hypot(p.i_r - p.s_r, p.i_y - p.s_y) / std::abs(det);
            const double moved = std::hypot(cur[i].state.y - prev[i].state.y,
                                            cur[i].state.r - prev[i].state.r);
            CHECK(moved <= 10.0 * dp * std::max(sens, 1.0));
        }
    }
}

TEST_CASE("hysteresis on the Kaldor default brackets the sweep folds") {
    const ModelConfig c = default_kaldor();
    const GridSpec g = default_grid(c);
    const double step = 0.05;
    const auto path = linspace(0.5, 2.6, 43); // step 0.05

    const HysteresisReport rep = hysteresis_run(c, SweepParameter::MonetaryMS, path, g);
    CHECK(rep.up_jump > rep.down_jump); // jumps at opposite folds

    SweepSpec spec;
    spec.parameter = SweepParameter::MonetaryMS;
    spec.base = c;
    spec.values = linspace(0.5, 2.6, 29);
    const BranchDiagram diag = sweep(spec, g);
    REQUIRE(diag.fold_values.size() == 2);
    CHECK(std::abs(rep.up_jump - diag.fold_values[1]) <= 2.0 * step);
    CHECK(std::abs(rep.down_jump - diag.fold_values[0]) <= 2.0 * step);
}

TEST_CASE("NoHysteresis inside a single-equilibrium region") {
    const ModelConfig c = default_kaldor();
    const auto path = linspace(0.52, 0.7, 7); // entirely below the fold window
    CHECK_THROWS_AS(hysteresis_run(c, SweepParameter::MonetaryMS, path, default_grid(c)),
                    NoHysteresis);
}
