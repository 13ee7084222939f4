#include "germflow/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace germflow {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, double initial_step, int max_iterations) {
    const std::size_t n = start.size();
    NelderMeadResult result;
    result.x = start;

    const auto safe_eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const double v = objective(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };

    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += initial_step;
    for (std::size_t i = 0; i <= n; ++i) values[i] = safe_eval(simplex[i]);

    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    for (int iter = 0; iter < max_iterations; ++iter) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

        const std::size_t best = order.front(), worst = order.back();
        const std::size_t second_worst = order[n - 1];

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        const auto blend = [&](double coeff) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coeff * (simplex[worst][j] - centroid[j]);
            return x;
        };

        const std::vector<double> reflected = blend(-alpha);
        const double fr = safe_eval(reflected);
        if (fr < values[best]) {
            const std::vector<double> expanded = blend(-gamma);
            const double fe = safe_eval(expanded);
            if (fe < fr) { simplex[worst] = expanded; values[worst] = fe; }
            else { simplex[worst] = reflected; values[worst] = fr; }
        } else if (fr < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            const std::vector<double> contracted = blend(fr < values[worst] ? -rho : rho);
            const double fc = safe_eval(contracted);
            if (fc < std::min(values[worst], fr)) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
                    values[i] = safe_eval(simplex[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (values[i] < values[best]) best = i;
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

}  // namespace germflow
