#pragma once

#include <functional>
#include <vector>

namespace germflow {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

/// Plain Nelder-Mead downhill simplex; deterministic for a fixed start.
/// Non-finite objective values are treated as +infinity.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, double initial_step, int max_iterations);

}  // namespace germflow
