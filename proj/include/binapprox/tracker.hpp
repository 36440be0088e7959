#pragma once

#include "binapprox/grid_paths.hpp"

#include <cstddef>
#include <vector>

namespace binapprox {

/// (m, p, n) plus the drift budget K. The tracker rate is M = 2mp + K and
/// the coarse step is delta = T/n. p should be the effective p reported by
/// mollify() so that M matches the slope bound of the actual target.
struct TrackerParams {
    std::size_t n = 1;
    double m = 1.0;
    double p = 1.0;
    double K = 0.0;

    double rate() const { return 2.0 * m * p + K; }
    double delta(double horizon) const { return horizon / static_cast<double>(n); }
    void validate() const;
};

enum class TrackMode { affine, step };

/// A binomial path on the coarse grid t_k = kT/n.
///
/// affine: y(t) = y(t_k) + dir[k] * M * (t - t_k) on [t_k, t_{k+1}), k = 0..n-1.
/// step:   y is right-continuous and piecewise constant, y = y0 on [t_0, t_1),
///         and at each t_k (k = 1..n) it jumps by dir[k-1] * M * delta.
class BinomialPath {
public:
    BinomialPath(TrackMode mode, double horizon, double y0, double rate,
                 std::vector<int> directions);

    TrackMode mode() const { return mode_; }
    std::size_t intervals() const { return directions_.size(); }
    double horizon() const { return horizon_; }
    double delta() const { return horizon_ / static_cast<double>(directions_.size()); }
    double rate() const { return rate_; }
    double increment() const { return rate_ * delta(); }
    double y0() const { return y0_; }
    const std::vector<int>& directions() const { return directions_; }

    /// y(t_k), k = 0..n (right limits in step mode).
    std::vector<double> nodes() const;

private:
    TrackMode mode_;
    double horizon_;
    double y0_;
    double rate_;
    std::vector<int> directions_;
};

struct TrackResult {
    BinomialPath path;
    // Largest grid slope of the target; the tracker bound is guaranteed when
    // it does not exceed M - K.
    double target_slope = 0.0;
    bool verified = false;
};

/// Slope-tolerant comparison used for every "target slope <= rate" check.
bool slope_within(double slope, double rate);

/// Continuous piecewise-affine tracker. Up when y(t_k) <= target(t_k), down
/// otherwise. With target slope <= M - K, |y - target| <= 2 M delta.
TrackResult track_affine(const SampledPath& target, const TrackerParams& params);

/// Piecewise-constant tracker: y = target(0) on [t_0, t_1), then at each t_k
/// a jump of +M delta if the level before t_k is <= target(t_k), else -M delta.
/// |y - target| <= 4 M delta everywhere and <= 2 M delta at coarse points.
TrackResult track_step(const SampledPath& target, const TrackerParams& params);

/// Exact values of `y` on every point of `grid`, which must refine the
/// coarse grid of `y`.
SampledPath eval_binomial(const BinomialPath& y, const TimeGrid& grid);

}  // namespace binapprox
