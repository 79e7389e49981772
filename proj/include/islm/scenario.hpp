#pragma once

#include <optional>
#include <vector>

#include "islm/econ_model.hpp"
#include "islm/phase_plane.hpp"

namespace islm {

enum class SweepParameter { MonetaryMS, FiscalShift };
std::string to_string(SweepParameter p);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::MonetaryMS;
    std::vector<double> values; // strictly monotone
    ModelConfig base;
};

struct BranchSlice {
    double value = 0.0;
    std::vector<Equilibrium> equilibria;
};

struct BranchDiagram {
    SweepParameter parameter = SweepParameter::MonetaryMS;
    std::vector<BranchSlice> slices;
    std::vector<double> fold_values; // refined parameter values where the count changes
};

struct HysteresisReport {
    SweepParameter parameter = SweepParameter::MonetaryMS;
    double path_step = 0.0;
    double up_jump = 0.0;   // parameter value at which the tracked state jumped (up path)
    double down_jump = 0.0; // same for the down path
    State up_state_before;  // tracked state just before each jump
    State down_state_before;
    std::vector<std::pair<double, State>> up_branch;
    std::vector<std::pair<double, State>> down_branch;
};

// MonetaryMS replaces m_s; FiscalShift adds to the investment intercept.
// Re-verifies the regime conditions and throws ConditionBroken on failure.
ModelConfig apply_shift(const ModelConfig& cfg, SweepParameter parameter, double value,
                        const GridSpec& grid);

// Shift without verification, for sweep inner loops over pre-verified bases.
ModelConfig shifted(const ModelConfig& cfg, SweepParameter parameter, double value);

// Equilibrium branches over the sweep values with warm-started seeds and
// bisection-refined fold parameter values (|det J| -> 0 at the merging pair).
BranchDiagram sweep(const SweepSpec& spec, const GridSpec& grid);

// Quasi-static attractor tracking along values up then down; reports the two
// jump parameter values. Throws NoHysteresis when no jump occurs.
HysteresisReport hysteresis_run(const ModelConfig& cfg, SweepParameter parameter,
                                const std::vector<double>& path, const GridSpec& grid);

struct FoldLocation {
    double value = 0.0; // parameter value at the saddle-node
    State state;        // degenerate equilibrium
};

// Newton on the extended system (residuals = 0, det = 0) in (y, r, value).
// Returns nullopt when the iteration fails to converge.
std::optional<FoldLocation> locate_fold(const ModelConfig& base, SweepParameter parameter,
                                        double value_guess, const State& state_guess);

} // namespace islm
