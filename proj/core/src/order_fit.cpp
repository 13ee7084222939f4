#include "germflow/order_fit.hpp"

#include <algorithm>
#include <cmath>

namespace germflow {

namespace {
constexpr double kValueFloor = 1e-300;
}

OrderEstimate estimate_order(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 8) throw InputError("estimate_order: need at least 8 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].first > 0.0)) throw InputError("estimate_order: s values must be positive");
        if (i > 0 && !(samples[i].first < samples[i - 1].first))
            throw InputError("estimate_order: s values must be strictly decreasing");
        if (samples[i].second < 0.0) throw InputError("estimate_order: values must be non-negative");
    }

    const std::size_t window =
        std::min(samples.size(), std::clamp<std::size_t>(samples.size() / 2, 8, 12));
    const std::size_t begin = samples.size() - window;

    OrderEstimate est;
    est.window_hi = samples[begin].first;
    est.window_lo = samples.back().first;

    std::vector<double> lx(window), ly(window);
    int floored = 0;
    for (std::size_t i = 0; i < window; ++i) {
        const auto& [s, v] = samples[begin + i];
        lx[i] = std::log(s);
        double value = v;
        if (value < kValueFloor) {
            value = kValueFloor;
            ++floored;
        }
        ly[i] = std::log(value);
    }
    est.floored_samples = floored;
    est.all_floored = floored == static_cast<int>(window);

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(window);
    my /= static_cast<double>(window);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        const double dx = lx[i] - mx;
        const double dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    est.slope = sxy / sxx;
    est.intercept = my - est.slope * mx;
    // Constant data is an exact fit; avoid 0/0.
    est.r_squared = syy == 0.0 ? 1.0 : std::clamp((sxy * sxy) / (sxx * syy), 0.0, 1.0);
    return est;
}

}  // namespace germflow
