#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace binapprox {

/// Uniform grid t_j = j*T/n on [0, T].
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t intervals);

    double horizon() const { return horizon_; }
    std::size_t intervals() const { return intervals_; }
    std::size_t size() const { return intervals_ + 1; }
    double step() const { return horizon_ / static_cast<double>(intervals_); }

    // Exact endpoints: time(0) == 0 and time(intervals()) == horizon().
    double time(std::size_t j) const {
        if (j == intervals_) return horizon_;
        return horizon_ * static_cast<double>(j) / static_cast<double>(intervals_);
    }

    /// Number of fine steps per coarse interval when this grid is cut into
    /// `coarse` equal pieces. Throws std::invalid_argument unless `coarse`
    /// divides intervals().
    std::size_t ratio(std::size_t coarse) const;
    bool refines(std::size_t coarse) const {
        return coarse >= 1 && intervals_ % coarse == 0;
    }

    bool operator==(const TimeGrid&) const = default;

private:
    double horizon_;
    std::size_t intervals_;
};

TimeGrid make_grid(double horizon, std::size_t intervals);

/// One realization sampled on a fine grid: values[j] = x(t_j).
class SampledPath {
public:
    SampledPath(TimeGrid grid, std::vector<double> values);

    const TimeGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }
    std::span<const double> values() const { return values_; }

    /// Largest |x[j+1] - x[j]| / h over the grid.
    double max_grid_slope() const;
    double max_abs() const;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

using ScalarField = std::function<double(double x, double t)>;

enum class ProcessKind { wiener, ito, constant, step_jump, sine, custom_table };

/// Description of an underlying process x(.). Only the fields relevant to
/// `kind` are read.
struct ProcessSpec {
    ProcessKind kind = ProcessKind::wiener;
    double x0 = 0.0;

    // ito
    ScalarField drift;
    ScalarField diffusion;

    // step_jump: x0 before jump_time, level from jump_time on
    double level = 1.0;
    double jump_time = 0.5;

    // sine: x0 + amplitude * sin(frequency * t)
    double amplitude = 1.0;
    double frequency = 1.0;

    // custom_table: one value per grid point
    std::vector<double> table;

    // Generated values are passed through exp(); used for positive
    // processes built on the log scale (e.g. geometric Brownian motion).
    bool exponentiate = false;

    void validate() const;
};

/// Per-path seed: splitmix64(seed_base + path_index). Adjacent indices give
/// decorrelated engine states, so ensembles can be split across workers.
std::uint64_t path_seed(std::uint64_t seed_base, std::size_t path_index);

SampledPath gen_wiener(const TimeGrid& grid, std::uint64_t seed);

/// Euler-Maruyama reference trajectory of dx = f dt + b dw. Uses the same
/// Brownian increments as gen_wiener for the same seed.
SampledPath gen_ito(const TimeGrid& grid, const ScalarField& drift,
                    const ScalarField& diffusion, double x0, std::uint64_t seed);

enum class ExampleFixture { zero, step };

/// zero: x == 0. step: x = 0 for t < T/2, 1 for t >= T/2.
SampledPath gen_example(const TimeGrid& grid, ExampleFixture which);

SampledPath generate(const ProcessSpec& spec, const TimeGrid& grid, std::uint64_t seed);

/// Lazily generated ensemble: path(i) is generate(process, grid,
/// path_seed(seed_base, i)). Nothing is stored.
struct Ensemble {
    ProcessSpec process;
    TimeGrid grid;
    std::uint64_t seed_base = 0;
    std::size_t paths = 1;

    SampledPath path(std::size_t i) const {
        return generate(process, grid, path_seed(seed_base, i));
    }
};

}  // namespace binapprox
