#pragma once

#include <span>
#include <utility>
#include <vector>

#include "germflow/errors.hpp"

namespace germflow {

/// Fitted asymptotic order of a non-negative quantity along a shrinking
/// geometric grid: value(s) ~ C * s^slope, with intercept = log C.
struct OrderEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    double window_lo = 0.0;   // smallest s in the fitted window
    double window_hi = 0.0;   // largest s in the fitted window
    int floored_samples = 0;  // zero values replaced by the 1e-300 floor
    bool all_floored = false; // every window sample was at the floor
};

/// Least-squares fit of log(value) against log(s) over the window of the
/// smallest s values (the smaller of: half the samples, 12; at least 8).
/// Samples must come on a strictly decreasing geometric grid with >= 8
/// entries and non-negative values; zeros are floored at 1e-300 and counted.
OrderEstimate estimate_order(std::span<const std::pair<double, double>> samples);

}  // namespace germflow
