#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "islm/econ_model.hpp"

namespace islm {

struct VectorFieldValue {
    double dy_dt = 0.0;
    double dr_dt = 0.0;
};

struct Jacobian2 {
    double j11 = 0.0, j12 = 0.0;
    double j21 = 0.0, j22 = 0.0;
    double trace = 0.0;
    double det = 0.0;
};

enum class EquilibriumKind {
    StableNode,
    StableFocus,
    UnstableNode,
    UnstableFocus,
    Saddle,
    DegenerateZeroEig,
};

std::string to_string(EquilibriumKind k);

struct Equilibrium {
    State state;
    Jacobian2 jac;
    std::pair<std::complex<double>, std::complex<double>> eigs;
    EquilibriumKind kind = EquilibriumKind::StableNode;
};

// Full flow with epsilon applied to the slow row selected by cfg.fast_side.
VectorFieldValue vector_field(const State& s, const ModelConfig& cfg);

// Unscaled residuals (I - S, L - M - m_s); zero exactly at equilibria.
std::pair<double, double> residuals(double y, double r, const ModelConfig& cfg);

Jacobian2 jacobian(const State& s, const ModelConfig& cfg);

// Roots of lambda^2 - trace*lambda + det, numerically stable form.
std::pair<std::complex<double>, std::complex<double>> eigen2(const Jacobian2& j);

EquilibriumKind classify(const Jacobian2& j);

// Grid scan for sign changes in both residuals, damped Newton refinement,
// duplicate merging, classification. Sorted by increasing Y.
std::vector<Equilibrium> find_equilibria(const ModelConfig& cfg, const GridSpec& grid);

// Newton refinement from a seed; returns nullopt if it fails to converge or
// leaves Y >= 0. Exposed for warm-started sweeps.
std::optional<State> refine_equilibrium(double y0, double r0, const ModelConfig& cfg,
                                        double tol = 1e-12);

Equilibrium make_equilibrium(const State& s, const ModelConfig& cfg);

} // namespace islm
