#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "islm/econ_model.hpp"

namespace islm {

enum class CurveId { IS, LM };
enum class ArcLabel { A1, A2, A3, Monotone };
enum class Stability { Stable, Unstable };

std::string to_string(CurveId c);
std::string to_string(ArcLabel a);
std::string to_string(Stability s);

struct FoldPoint {
    std::size_t index = 0; // fold lies between samples index and index+1
    State state;
    double arc_param = 0.0; // arclength along the traced polyline
};

struct Arc {
    std::size_t begin = 0; // sample range [begin, end)
    std::size_t end = 0;
    ArcLabel label = ArcLabel::Monotone;
    Stability stability = Stability::Stable;
};

struct IsoclineCurve {
    CurveId which = CurveId::IS;
    std::vector<State> points; // ordered so the fast variable increases
    std::vector<double> arc_params;
    std::vector<FoldPoint> folds;
    std::vector<Arc> arcs; // filled by arc_stability
};

struct FoldPair {
    double low = 0.0;  // slow-variable value at the lower fold
    double high = 0.0; // slow-variable value at the upper fold
};

// Residual of the defining equation: I - S for IS, L - M - m_s for LM.
double curve_residual(CurveId which, double y, double r, const ModelConfig& cfg);

// Pseudo-arclength continuation from a grid-scanned seed. Samples satisfy the
// defining equation to 1e-10 and stop at the window boundary.
IsoclineCurve trace_isocline(CurveId which, const ModelConfig& cfg, const GridSpec& window);

// Slow-variable values at the two folds (R1 < R2 for IS, Y1 < Y2 for LM).
// Throws FoldCountMismatch unless the curve has exactly two folds.
FoldPair fold_values(const IsoclineCurve& c);

// Labels each sample by the sign of the fast-subsystem derivative and splits
// the curve into arcs A1/A2/A3 (two folds) or a single Monotone arc.
IsoclineCurve arc_stability(IsoclineCurve c, const ModelConfig& cfg);

// Derivative of the fast subsystem along the curve used for stability labels:
// d(alpha(I-S))/dY for IS, d(beta(L-M-m_s))/dR for LM.
double fast_partial(CurveId which, double y, double r, const ModelConfig& cfg);

// The coordinate the arcs are ordered by: Y for IS, i_S for LM.
double fast_coordinate(CurveId which, const State& s, const ModelConfig& cfg);

// Curve traced for the side carrying the fast dynamics (IS for Goods).
CurveId fast_curve(const ModelConfig& cfg);

} // namespace islm
