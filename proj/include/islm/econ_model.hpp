#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "islm/errors.hpp"

namespace islm {

enum class Regime { OriginalDegenerate, KaldorGoods, ThreePhaseMoney };
enum class FastSide { Goods, Money };

std::string to_string(Regime r);
std::string to_string(FastSide f);

// Investment I(Y,R) = i0 + a*tanh(b*(Y-ym)) + linear_slope*Y - h*R.
struct InvestParams {
    double i0 = 0.0;           // autonomous level
    double a = 0.0;            // sigmoid amplitude
    double b = 1.0;            // sigmoid steepness
    double ym = 0.0;           // sigmoid center income
    double h = 0.1;            // interest sensitivity, > 0
    double linear_slope = 0.0; // affine slope used when the sigmoid is off
};

// Saving S(Y,R) = s0 + s*Y + g*R.
struct SaveParams {
    double s0 = 0.0;
    double s = 0.5;  // marginal propensity to save, in (0,1)
    double g = 0.1;  // interest sensitivity, > 0
};

// Money demand L(Y,i_S) = l*Y + phi(i_S).
// Standard phases: phi'(i) = -d. Three-phase regime: phi'(i) = -kappa_l*(i-p)(i-q),
// which is < 0 outside (p,q), exactly 0 at p and q, and > 0 inside.
struct MoneyDemandParams {
    double l = 0.5;       // income sensitivity, > 0
    double d = 0.1;       // interest sensitivity in standard phases
    double kappa_l = 0.0; // three-phase cubic coefficient, >= 0
    double p = 1.0;       // lower phase boundary in i_S
    double q = 2.0;       // upper phase boundary in i_S, p < q
};

// Money supply endogenous part M(Y,i_S) = m*Y + psi(i_S),
// psi'(i) = +e in standard phases, +kappa_m*(i-p)(i-q) in the three-phase regime.
struct MoneySupplyParams {
    double m = 0.2;
    double e = 0.05;
    double kappa_m = 0.0;
};

struct ModelConfig {
    double alpha = 1.0;    // goods adjustment speed, > 0
    double beta = 1.0;     // money adjustment speed, > 0
    double epsilon = 1.0;  // slow-fast ratio, in (0, 1]
    double m_s = 1.0;      // exogenous money stock, > 0
    double mp = 0.0;       // maturity premium
    double pi_e = 0.0;     // expected inflation
    InvestParams invest;
    SaveParams save;
    MoneyDemandParams demand;
    MoneySupplyParams supply;
    Regime regime = Regime::KaldorGoods;
    FastSide fast_side = FastSide::Goods;

    // Throws std::invalid_argument when a parameter violates its regime's constraints.
    void validate() const;
};

// A point (Y, R) of the phase plane. Y >= 0 is enforced at construction.
struct State {
    State() = default;
    State(double y_, double r_);
    double y = 0.0;
    double r = 0.0;
};

// Rectangular evaluation grid, y in [y_min, y_max] x r in [r_min, r_max].
struct GridSpec {
    double y_min = 0.0;
    double y_max = 12.0;
    double r_min = -1.0;
    double r_max = 8.0;
    std::size_t ny = 201;
    std::size_t nr = 201;

    double y_at(std::size_t i) const;
    double r_at(std::size_t j) const;
};

// Regime-aware default grids: Kaldor keeps r in [-1, 8]; the three-phase grid
// starts at r = 0 so that i_S stays positive over every node.
GridSpec default_grid(const ModelConfig& cfg);

struct FunctionValues {
    double invest = 0.0;
    double saving = 0.0;
    double demand = 0.0;
    double supply = 0.0; // endogenous part only, excludes m_s
};

struct Partials {
    double i_y = 0.0, i_r = 0.0;
    double s_y = 0.0, s_r = 0.0;
    double l_y = 0.0, l_r = 0.0;
    double m_y = 0.0, m_r = 0.0;
};

// i_S = R - MP + pi_e. Exact arithmetic, no clamping at zero.
double short_rate(double r, const ModelConfig& cfg);

// phi/psi derivatives at a given short rate (regime selects linear vs cubic).
double phi_prime(double i_s, const ModelConfig& cfg);
double psi_prime(double i_s, const ModelConfig& cfg);

// Unchecked evaluation on raw coordinates; used by finite differences and
// continuation correctors that probe slightly outside Y >= 0.
FunctionValues eval_at(double y, double r, const ModelConfig& cfg);
Partials partials_at(double y, double r, const ModelConfig& cfg);

// Checked evaluation; throws std::domain_error on y < 0 (via State).
FunctionValues eval_functions(const State& s, const ModelConfig& cfg);

// Central finite differences of the four functions, step 1e-6.
Partials fd_partials_at(double y, double r, const ModelConfig& cfg, double step = 1e-6);

struct Violation {
    std::string condition; // e.g. "3", "4", "11", "19", "fd"
    double y = 0.0;
    double r = 0.0;
    double observed = 0.0;
};

struct ConditionReport {
    Regime regime = Regime::KaldorGoods;
    GridSpec grid;
    std::vector<Violation> violations;
    std::optional<std::pair<double, double>> kaldor_interval; // (X, Z), X < Z
    bool intersection_ok = false; // condition (13) probed at y_eps
    bool passed() const { return violations.empty() && intersection_ok; }
};

// Certifies the regime conditions over the grid: closed-form partial signs,
// finite-difference agreement, the Kaldor interval when applicable, and the
// intersection condition R_IS > R_LM at small Y.
ConditionReport verify_conditions(const ModelConfig& cfg, const GridSpec& grid);

// Roots X < Z of I_Y(Y) = S_Y for fixed R, bracketing the hump. Throws
// NoKaldorInterval when the sigmoid never out-slopes saving.
std::pair<double, double> kaldor_interval(const ModelConfig& cfg, double r_fixed);

// Y-probe used for the intersection condition (13).
inline constexpr double kIntersectionProbeY = 1e-4;

// R at which I = S (resp. L = M + m_s) for fixed y; lowest root when several.
// Returns nullopt when no root exists in the scanned range.
std::optional<double> is_curve_r(double y, const ModelConfig& cfg);
std::optional<double> lm_curve_r(double y, const ModelConfig& cfg);

} // namespace islm
