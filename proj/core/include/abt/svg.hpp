#pragma once

#include <string>

#include "abt/branching.hpp"
#include "abt/currents.hpp"
#include "abt/solver.hpp"

namespace abt {

/// Static SVG plot of a planar current: stroke width proportional to
/// H(|theta|), stroke color keyed to the unoriented edge direction.
std::string render_current_svg(const PolyhedralOneCurrent& current, const BranchingFunction& h);

/// Network plot: current edges plus terminal and Steiner markers.
std::string render_network_svg(const Network& net, const TransportProblem& problem);

}  // namespace abt
