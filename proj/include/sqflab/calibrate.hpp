// Measured constants behind every "<<" in the bound statements, computed
// deterministically so the calibration file can be regression-tested.
#pragma once

#include <vector>

#include "sqflab/config.hpp"
#include "sqflab/intervals.hpp"

namespace sqf {

// The scan grid shared by calibration, the diff-scan CLI default, and the
// acceptance suite: the X^{1/5} regime at X in {1e8, 1e10} plus enriched
// windows (H = 1e4 at X = 1e10) where the square-divisor sets have real
// population.
std::vector<ScaleContext> standard_scan_contexts();

// Recompute every calibrated constant (fixed internal seeds; byte-stable).
KeyValueFile run_calibration(int threads = 1);

}  // namespace sqf
