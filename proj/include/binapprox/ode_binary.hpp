#pragma once

#include "binapprox/grid_paths.hpp"
#include "binapprox/tracker.hpp"

namespace binapprox {

/// Drift f(x, t) with a caller-supplied certificate |f| + |df/dx| <= c_f.
struct DriftField {
    ScalarField f;
    double c_f = 0.0;
};

/// Probes f on a 64x64 lattice of [x_lo, x_hi] x [0, horizon]. Throws
/// std::invalid_argument if |f| exceeds K or |f| + |df/dx| exceeds c_f at
/// any probe.
void certify_drift(const DriftField& drift, double K, double x_lo, double x_hi, double horizon);

struct BinaryNoiseSolution {
    SampledPath u;       // u = u(0) + int f(u) ds + y
    BinomialPath y;      // binary noise path, y(0) = 0
    SampledPath y_fine;  // y on the fine grid
    SampledPath r;       // tracked residual with frozen drift
    TrackerParams params;
    // Mollified target slope <= M - K, i.e. the guarantee applies.
    bool verified = false;
};

/// Builds r, y and u interval by interval. On [t_k, t_{k+1}) the residual
/// r = x_moll - x0 - int f(u(t_k), s) ds is tracked by the binary path y
/// (affine or step rule), and u integrates f(u, s) plus the increments of y
/// with the implicit trapezoidal rule on the fine grid. Step mode applies
/// each jump of y to u at t_k (right-continuous).
///
/// params.K must dominate sup|f|; the drift is probed and rejected otherwise.
BinaryNoiseSolution solve_binary_ode(const SampledPath& x_moll, double x0,
                                     const DriftField& drift, const TrackerParams& params,
                                     TrackMode mode);

/// r~(t) = x(t) - x0 - int_0^t f(u(s), s) ds by the trapezoidal rule.
SampledPath residual_true(const SampledPath& x, double x0, const DriftField& drift,
                          const SampledPath& u);

/// Pathwise bound on sup|x_moll - u|: the tracker term (2 M delta affine,
/// 4 M delta step) plus max(1, T) * c_f * (c_f + M) * T / n.
double binary_ode_bound(const TrackerParams& params, double c_f, double horizon, TrackMode mode);

/// The frozen-drift term alone: max(1, T) * c_f * (c_f + M) * T / n.
double frozen_drift_bound(const TrackerParams& params, double c_f, double horizon);

}  // namespace binapprox
