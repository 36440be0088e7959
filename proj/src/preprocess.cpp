#include "binapprox/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace binapprox {

SampledPath clip(const SampledPath& x, double level) {
    if (!(level > 0.0) || !std::isfinite(level)) {
        throw std::invalid_argument("clip: level must be positive and finite");
    }
    std::vector<double> out(x.values().begin(), x.values().end());
    for (double& v : out) v = std::min(std::max(v, -level), level);
    return SampledPath(x.grid(), std::move(out));
}

Mollified mollify(const SampledPath& x, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("mollify: p must be positive and finite");
    }
    const TimeGrid& grid = x.grid();
    const double h = grid.step();
    // Tolerate eps being a whole multiple of h up to roundoff.
    const auto steps = static_cast<std::size_t>(std::floor((1.0 / p) / h * (1.0 + 1e-12)));
    if (steps == 0) {
        throw std::invalid_argument("mollify: window 1/p is shorter than one grid step");
    }
    const double window = static_cast<double>(steps) * h;

    // cum[j] = trapezoidal integral of x over [0, t_j]; for negative indices the
    // path is frozen at x(0), so cum[-i] = -i * h * x(0).
    // Extended precision keeps cum[j] - cum[j - steps] accurate on long grids.
    const std::size_t n = grid.intervals();
    const long double hl = h;
    std::vector<long double> cum(n + 1);
    cum[0] = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
        cum[j + 1] = cum[j] + 0.5L * hl * (static_cast<long double>(x[j]) + x[j + 1]);
    }

    const long double x0 = x.front();
    const long double width = static_cast<long double>(steps) * hl;
    std::vector<double> out(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        long double lower;
        if (j >= steps) {
            lower = cum[j - steps];
        } else {
            lower = -static_cast<long double>(steps - j) * hl * x0;
        }
        out[j] = static_cast<double>((cum[j] - lower) / width);
    }
    return {SampledPath(grid, std::move(out)), window, steps};
}

}  // namespace binapprox
