#pragma once

#include <string>
#include <vector>

#include "islm/econ_model.hpp"

namespace islm {

struct SvgPolyline {
    std::vector<State> points;
    std::string css_class; // e.g. "stable-arc", "unstable-arc", "cycle", "jump"
    bool arrows = false;   // mid-segment arrowheads along the flow direction
};

struct SvgMarker {
    State at;
    std::string css_class;
};

// Deterministic SVG 1.1: fixed viewbox from the data bounds plus a 5% margin,
// byte-identical output for identical inputs. Throws EmptyGeometry.
std::string emit_svg(const std::vector<SvgPolyline>& polylines,
                     const std::vector<SvgMarker>& markers = {});

// Shortest round-trip decimal for doubles (std::to_chars).
std::string format_double(double v);

} // namespace islm
