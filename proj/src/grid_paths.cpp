#include "binapprox/grid_paths.hpp"

#include "binapprox/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace binapprox {

TimeGrid::TimeGrid(double horizon, std::size_t intervals)
    : horizon_(horizon), intervals_(intervals) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("time grid: horizon must be positive and finite");
    }
    if (intervals == 0) {
        throw std::invalid_argument("time grid: need at least one interval");
    }
}

std::size_t TimeGrid::ratio(std::size_t coarse) const {
    if (!refines(coarse)) {
        throw std::invalid_argument("time grid: " + std::to_string(coarse) +
                                    " coarse intervals do not align with " +
                                    std::to_string(intervals_) + " fine intervals");
    }
    return intervals_ / coarse;
}

TimeGrid make_grid(double horizon, std::size_t intervals) {
    return TimeGrid(horizon, intervals);
}

SampledPath::SampledPath(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("sampled path: " + std::to_string(values_.size()) +
                                    " values for a grid of " + std::to_string(grid_.size()) +
                                    " points");
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!std::isfinite(values_[j])) {
            throw NumericFailure("sampled path: non-finite value at index " + std::to_string(j));
        }
    }
}

double SampledPath::max_grid_slope() const {
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < values_.size(); ++j) {
        worst = std::max(worst, std::abs(values_[j + 1] - values_[j]));
    }
    return worst / grid_.step();
}

double SampledPath::max_abs() const {
    double worst = 0.0;
    for (double v : values_) worst = std::max(worst, std::abs(v));
    return worst;
}

void ProcessSpec::validate() const {
    switch (kind) {
        case ProcessKind::ito:
            if (!drift || !diffusion) {
                throw std::invalid_argument("process: ito needs both drift and diffusion");
            }
            break;
        case ProcessKind::step_jump:
            if (!std::isfinite(jump_time) || !std::isfinite(level)) {
                throw std::invalid_argument("process: step_jump needs finite level and jump_time");
            }
            break;
        case ProcessKind::sine:
            if (!std::isfinite(amplitude) || !std::isfinite(frequency)) {
                throw std::invalid_argument("process: sine needs finite amplitude and frequency");
            }
            break;
        case ProcessKind::custom_table:
            if (table.empty()) throw std::invalid_argument("process: custom_table is empty");
            break;
        case ProcessKind::wiener:
        case ProcessKind::constant:
            break;
    }
    if (!std::isfinite(x0)) throw std::invalid_argument("process: x0 must be finite");
}

std::uint64_t path_seed(std::uint64_t seed_base, std::size_t path_index) {
    std::uint64_t z = seed_base + static_cast<std::uint64_t>(path_index) + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

// Shared by gen_wiener and gen_ito so both consume identical increments.
class BrownianIncrements {
public:
    BrownianIncrements(double step, std::uint64_t seed)
        : engine_(seed), scale_(std::sqrt(step)) {}

    double next() { return scale_ * normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    double scale_;
};

}  // namespace

SampledPath gen_wiener(const TimeGrid& grid, std::uint64_t seed) {
    std::vector<double> w(grid.size());
    BrownianIncrements dw(grid.step(), seed);
    w[0] = 0.0;
    for (std::size_t j = 0; j < grid.intervals(); ++j) w[j + 1] = w[j] + dw.next();
    return SampledPath(grid, std::move(w));
}

SampledPath gen_ito(const TimeGrid& grid, const ScalarField& drift,
                    const ScalarField& diffusion, double x0, std::uint64_t seed) {
    if (!drift || !diffusion) throw std::invalid_argument("gen_ito: missing drift or diffusion");
    std::vector<double> x(grid.size());
    BrownianIncrements dw(grid.step(), seed);
    const double h = grid.step();
    x[0] = x0;
    for (std::size_t j = 0; j < grid.intervals(); ++j) {
        const double t = grid.time(j);
        x[j + 1] = x[j] + drift(x[j], t) * h + diffusion(x[j], t) * dw.next();
        if (!std::isfinite(x[j + 1])) {
            throw NumericFailure("gen_ito: non-finite state at step " + std::to_string(j + 1));
        }
    }
    return SampledPath(grid, std::move(x));
}

SampledPath gen_example(const TimeGrid& grid, ExampleFixture which) {
    std::vector<double> x(grid.size(), 0.0);
    if (which == ExampleFixture::step) {
        // t_j >= T/2  <=>  2j >= n, decided in integers so t = T/2 maps to 1.
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (2 * j >= grid.intervals()) x[j] = 1.0;
        }
    }
    return SampledPath(grid, std::move(x));
}

SampledPath generate(const ProcessSpec& spec, const TimeGrid& grid, std::uint64_t seed) {
    spec.validate();
    std::vector<double> x;
    switch (spec.kind) {
        case ProcessKind::wiener: {
            auto w = gen_wiener(grid, seed);
            x.assign(w.values().begin(), w.values().end());
            for (double& v : x) v += spec.x0;
            break;
        }
        case ProcessKind::ito: {
            auto p = gen_ito(grid, spec.drift, spec.diffusion, spec.x0, seed);
            x.assign(p.values().begin(), p.values().end());
            break;
        }
        case ProcessKind::constant:
            x.assign(grid.size(), spec.x0);
            break;
        case ProcessKind::step_jump:
            x.resize(grid.size());
            for (std::size_t j = 0; j < x.size(); ++j) {
                x[j] = grid.time(j) < spec.jump_time ? spec.x0 : spec.level;
            }
            break;
        case ProcessKind::sine:
            x.resize(grid.size());
            for (std::size_t j = 0; j < x.size(); ++j) {
                x[j] = spec.x0 + spec.amplitude * std::sin(spec.frequency * grid.time(j));
            }
            break;
        case ProcessKind::custom_table:
            if (spec.table.size() != grid.size()) {
                throw std::invalid_argument("process: custom_table has " +
                                            std::to_string(spec.table.size()) +
                                            " values, grid needs " + std::to_string(grid.size()));
            }
            x = spec.table;
            break;
    }
    if (spec.exponentiate) {
        for (double& v : x) v = std::exp(v);
    }
    return SampledPath(grid, std::move(x));
}

}  // namespace binapprox
