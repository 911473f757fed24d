#pragma once

#include <string>
#include <vector>

#include "ordexp/mcrisk.hpp"

namespace ordexp {

/// Standalone SVG line chart of RRI% against η: one panel per (target, loss),
/// one polyline per estimator, with legend and ticked axes. The output is a
/// pure function of `rows`.
std::string render_rri_svg(const std::vector<mc::RiskRow>& rows, const std::string& title = "");

/// Tick positions inside [lo, hi] on a 1-2-5 step, about `target` of them.
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

}  // namespace ordexp
