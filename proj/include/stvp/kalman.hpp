#pragma once

#include <array>
#include <optional>
#include <vector>

namespace stvp {

// Constant-velocity Kalman filter with Rauch-Tung-Striebel smoothing over a
// fixed window of (x, y, s) observations. Used to fill frames where the
// detector missed the object.
//
// observations[i] is the measurement for frame i of the window, or nullopt
// for a gap. Requires at least two observations. Observed entries are kept
// as observed in the result; gaps are replaced by the smoothed estimate.
std::vector<std::array<double, 3>> smooth_trajectory(
    const std::vector<std::optional<std::array<double, 3>>>& observations,
    double process_var, double observation_var);

}  // namespace stvp
