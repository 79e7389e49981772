#pragma once

#include "islm/econ_model.hpp"

namespace islm {

// Shipped baseline configurations (mirrored by the JSON files in configs/).
//
// The Kaldor and three-phase families each come in two placements: a
// "default" whose money/goods balance admits the 1->3->1 fold sweep with
// attractor-saddle-attractor slices, and a "cycle" variant whose steeper
// second curve crosses only the unstable arc, which is the arrangement that
// produces the relaxation oscillation. One linear LM cannot do both: a line
// crossing A1 and A3 (outer attractors) must traverse less slow-variable
// range than the fold window, while a cycle needs it to traverse more.
ModelConfig default_kaldor();
ModelConfig kaldor_cycle();
ModelConfig default_three_phase();
ModelConfig three_phase_cycle();
ModelConfig original_degenerate();

} // namespace islm
