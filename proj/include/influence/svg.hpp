#pragma once

#include <iosfwd>

#include "influence/sim.hpp"

namespace influence {

/// Orthographic 3D projection of the target, desired, and influencer
/// paths as SVG polylines. First three state components are plotted;
/// lower-dimensional states are zero-padded.
void write_trajectory_svg(std::ostream& out, const RunResult& result,
                          int node_count);

/// ||e(t)|| against time.
void write_tracking_error_svg(std::ostream& out, const RunResult& result);

}  // namespace influence
