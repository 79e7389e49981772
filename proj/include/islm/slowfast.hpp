#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "islm/econ_model.hpp"
#include "islm/isocline.hpp"
#include "islm/phase_plane.hpp"

namespace islm {

struct StepControl {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double h_init = 1e-4;
    double h_min = 1e-12; // step floor; going below raises StepFloorReached
    double h_max = 50.0;
};

enum class Orientation { Clockwise, Counterclockwise };
std::string to_string(Orientation o);

struct TrajectorySample {
    double t = 0.0;
    State state;
};

struct JumpSegment {
    std::size_t begin = 0; // sample range [begin, end)
    std::size_t end = 0;
    State from;
    State to;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    std::vector<JumpSegment> jumps; // filled by mark_jumps
};

struct CycleReport {
    std::vector<TrajectorySample> cycle_samples; // one period
    double period = 0.0;
    Orientation orientation = Orientation::Clockwise;
    std::vector<JumpSegment> jumps;
    std::pair<double, double> y_range{0.0, 0.0};
    std::pair<double, double> r_range{0.0, 0.0};
    double poincare_residual = 0.0;
};

struct SingularOrbit {
    // Closed loop: stable-arc samples plus two fast jump segments.
    std::vector<State> loop;
    std::pair<State, State> jump_low;  // at the lower fold slow value
    std::pair<State, State> jump_high; // at the upper fold slow value
    Orientation orientation = Orientation::Clockwise;
};

// Dormand-Prince 5(4) with error control per step. Throws DomainExit when the
// trajectory crosses Y = 0, StepFloorReached when stiffness exceeds the floor.
Trajectory integrate(const State& s0, const ModelConfig& cfg, double t_end,
                     const StepControl& ctrl = {});

// Marks maximal runs where the fast-variable speed exceeds
// jump_speed_factor times the slow-variable speed.
void mark_jumps(Trajectory& traj, const ModelConfig& cfg, double jump_speed_factor = 10.0);

// Shoelace signed area of a closed polyline in (x, y) order.
double signed_area(const std::vector<std::pair<double, double>>& poly);

// Orientation measured with the slow variable on the horizontal axis and the
// fast variable vertical, the frame the relaxation loop is drawn in.
Orientation cycle_orientation(const std::vector<TrajectorySample>& cycle, const ModelConfig& cfg);

// Poincare-section cycle detector. Throws NoCycle on equilibrium capture and
// NonConvergent when returns fail to settle within max_returns.
CycleReport detect_cycle(const ModelConfig& cfg, const State& s0, const StepControl& ctrl = {});

// The epsilon -> 0 skeleton: two stable arcs joined by fast jumps at the fold
// slow values. Throws FoldCountMismatch / NoReturnDrift.
SingularOrbit singular_orbit(const ModelConfig& cfg);

// Symmetric Hausdorff distance between two closed polylines (vertex-to-segment).
double hausdorff_distance(const std::vector<State>& a, const std::vector<State>& b);

double point_segment_distance(const State& p, const State& a, const State& b);

// Cycle-to-singular-orbit distances for a decreasing epsilon list.
std::vector<std::pair<double, double>> epsilon_convergence(const ModelConfig& cfg,
                                                           const std::vector<double>& eps_list);

// Starting state on the first stable arc, nudged off the curve; shared by
// detect_cycle callers and the epsilon sweep.
State cycle_seed(const ModelConfig& cfg);

} // namespace islm
