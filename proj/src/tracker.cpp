#include "binapprox/tracker.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace binapprox {

void TrackerParams::validate() const {
    if (n == 0) throw std::invalid_argument("tracker: n must be >= 1");
    if (!(m > 0.0) || !(p > 0.0)) throw std::invalid_argument("tracker: m and p must be positive");
    if (!(K >= 0.0)) throw std::invalid_argument("tracker: K must be nonnegative");
    if (!(rate() > 0.0) || !std::isfinite(rate())) {
        throw std::invalid_argument("tracker: rate 2mp + K must be positive and finite");
    }
}

BinomialPath::BinomialPath(TrackMode mode, double horizon, double y0, double rate,
                           std::vector<int> directions)
    : mode_(mode), horizon_(horizon), y0_(y0), rate_(rate), directions_(std::move(directions)) {
    if (directions_.empty()) throw std::invalid_argument("binomial path: no intervals");
    if (!(horizon > 0.0)) throw std::invalid_argument("binomial path: horizon must be positive");
    if (!(rate > 0.0)) throw std::invalid_argument("binomial path: rate must be positive");
    for (int d : directions_) {
        if (d != 1 && d != -1) throw std::invalid_argument("binomial path: directions must be +1 or -1");
    }
}

std::vector<double> BinomialPath::nodes() const {
    const double inc = increment();
    std::vector<double> y(directions_.size() + 1);
    y[0] = y0_;
    for (std::size_t k = 0; k < directions_.size(); ++k) y[k + 1] = y[k] + directions_[k] * inc;
    return y;
}

bool slope_within(double slope, double rate) {
    return slope <= rate * (1.0 + 1e-9) + 1e-12;
}

namespace {

void check_alignment(const SampledPath& target, const TrackerParams& params) {
    params.validate();
    (void)target.grid().ratio(params.n);
}

}  // namespace

TrackResult track_affine(const SampledPath& target, const TrackerParams& params) {
    check_alignment(target, params);
    const std::size_t r = target.grid().ratio(params.n);
    const double M = params.rate();
    const double inc = M * params.delta(target.grid().horizon());

    std::vector<int> dirs(params.n);
    double y = target.front();
    for (std::size_t k = 0; k < params.n; ++k) {
        dirs[k] = (y <= target[k * r]) ? 1 : -1;
        y += dirs[k] * inc;
    }
    const double slope = target.max_grid_slope();
    return {BinomialPath(TrackMode::affine, target.grid().horizon(), target.front(), M, std::move(dirs)),
            slope, slope_within(slope, M - params.K)};
}

TrackResult track_step(const SampledPath& target, const TrackerParams& params) {
    check_alignment(target, params);
    const std::size_t r = target.grid().ratio(params.n);
    const double M = params.rate();
    const double inc = M * params.delta(target.grid().horizon());

    std::vector<int> dirs(params.n);
    double level = target.front();
    for (std::size_t k = 1; k <= params.n; ++k) {
        dirs[k - 1] = (level <= target[k * r]) ? 1 : -1;
        level += dirs[k - 1] * inc;
    }
    const double slope = target.max_grid_slope();
    return {BinomialPath(TrackMode::step, target.grid().horizon(), target.front(), M, std::move(dirs)),
            slope, slope_within(slope, M - params.K)};
}

SampledPath eval_binomial(const BinomialPath& y, const TimeGrid& grid) {
    if (grid.horizon() != y.horizon()) {
        throw std::invalid_argument("eval_binomial: grid horizon differs from path horizon");
    }
    const std::size_t n = y.intervals();
    const std::size_t r = grid.ratio(n);
    const auto nodes = y.nodes();
    const auto& dirs = y.directions();
    const double delta = y.delta();

    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const std::size_t k = j / r;
        const std::size_t i = j % r;
        if (i == 0) {
            out[j] = nodes[k];
        } else if (y.mode() == TrackMode::affine) {
            out[j] = nodes[k] + dirs[k] * y.rate() * (delta * static_cast<double>(i) / static_cast<double>(r));
        } else {
            out[j] = nodes[k];
        }
    }
    return SampledPath(grid, std::move(out));
}

}  // namespace binapprox
