#pragma once

#include "binapprox/grid_paths.hpp"

#include <cstddef>

namespace binapprox {

/// Componentwise clamp to [-level, level].
SampledPath clip(const SampledPath& x, double level);

struct Mollified {
    SampledPath path;
    double window;             // effective epsilon = window_steps * h
    std::size_t window_steps;

    double effective_p() const { return 1.0 / window; }
};

/// Trailing boxcar average (1/eps) * int_{t-eps}^{t} x(s) ds with eps = 1/p,
/// x(s) = x(0) for s < 0, integrated by the trapezoidal rule on the grid of
/// `x`. The window is rounded down to a whole number of grid steps; the
/// result reports the effective width.
///
/// The output at t_j reads only x[0..j]. If |x| <= A, the grid slope of the
/// output is at most 2 * A * effective_p().
Mollified mollify(const SampledPath& x, double p);

}  // namespace binapprox
