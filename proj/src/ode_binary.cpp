#include "binapprox/ode_binary.hpp"

#include "binapprox/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace binapprox {

void certify_drift(const DriftField& drift, double K, double x_lo, double x_hi, double horizon) {
    if (!drift.f) throw std::invalid_argument("drift: missing function");
    if (!(drift.c_f >= 0.0) || !std::isfinite(drift.c_f)) {
        throw std::invalid_argument("drift: c_f must be finite and nonnegative");
    }
    constexpr int kProbes = 64;
    const double fd = 1e-6 * std::max(1.0, std::max(std::abs(x_lo), std::abs(x_hi)));
    for (int a = 0; a < kProbes; ++a) {
        const double x = x_lo + (x_hi - x_lo) * a / (kProbes - 1);
        for (int b = 0; b < kProbes; ++b) {
            const double t = horizon * b / (kProbes - 1);
            const double v = drift.f(x, t);
            if (!std::isfinite(v)) throw NumericFailure("drift: non-finite value at probe");
            if (std::abs(v) > K * (1.0 + 1e-12) + 1e-15) {
                throw std::invalid_argument("drift: K = " + std::to_string(K) +
                                            " is below observed |f| = " + std::to_string(std::abs(v)));
            }
            const double dfdx = (drift.f(x + fd, t) - drift.f(x - fd, t)) / (2.0 * fd);
            if (std::abs(v) + std::abs(dfdx) > drift.c_f * (1.0 + 1e-6) + 1e-12) {
                throw std::invalid_argument("drift: certificate c_f = " + std::to_string(drift.c_f) +
                                            " fails at x = " + std::to_string(x) +
                                            ", t = " + std::to_string(t));
            }
        }
    }
}

double frozen_drift_bound(const TrackerParams& params, double c_f, double horizon) {
    const double M = params.rate();
    return std::max(1.0, horizon) * c_f * (c_f + M) * horizon / static_cast<double>(params.n);
}

double binary_ode_bound(const TrackerParams& params, double c_f, double horizon, TrackMode mode) {
    const double tracking = (mode == TrackMode::affine ? 2.0 : 4.0) * params.rate() * params.delta(horizon);
    return tracking + frozen_drift_bound(params, c_f, horizon);
}

namespace {

// One implicit trapezoidal step u1 = u0 + h/2 (f(u0,t0) + f(u1,t1)) + dy,
// solved by fixed-point iteration (contraction factor h*c_f/2).
double trapezoid_step(const ScalarField& f, double u0, double t0, double t1, double h, double dy) {
    const double g0 = f(u0, t0);
    double guess = u0 + h * g0 + dy;
    for (int it = 0; it < 100; ++it) {
        const double next = u0 + 0.5 * h * (g0 + f(guess, t1)) + dy;
        const bool done = std::abs(next - guess) <= 1e-15 * (1.0 + std::abs(next));
        guess = next;
        if (done) break;
    }
    if (!std::isfinite(guess)) throw NumericFailure("binary ode: non-finite state");
    return guess;
}

}  // namespace

BinaryNoiseSolution solve_binary_ode(const SampledPath& x_moll, double x0,
                                     const DriftField& drift, const TrackerParams& params,
                                     TrackMode mode) {
    params.validate();
    const TimeGrid& grid = x_moll.grid();
    const std::size_t rs = grid.ratio(params.n);
    {
        const double lo = *std::min_element(x_moll.values().begin(), x_moll.values().end());
        const double hi = *std::max_element(x_moll.values().begin(), x_moll.values().end());
        const double span = std::max(1.0, hi - lo);
        certify_drift(drift, params.K, lo - span, hi + span, grid.horizon());
    }

    const double h = grid.step();
    const double M = params.rate();
    const double delta = params.delta(grid.horizon());
    const double inc = M * delta;
    const std::size_t nf = grid.intervals();
    const auto& f = drift.f;

    std::vector<double> u(nf + 1), y(nf + 1), r(nf + 1);
    std::vector<int> dirs(params.n);
    u[0] = x0;
    y[0] = 0.0;
    double frozen = 0.0;  // int_0^t f(u(theta(s)), s) ds
    r[0] = x_moll[0] - x0;
    double node = 0.0;    // y(t_k)

    for (std::size_t k = 0; k < params.n; ++k) {
        const std::size_t j0 = k * rs;
        int dir = 1;
        if (mode == TrackMode::affine) {
            dir = (node <= r[j0]) ? 1 : -1;
            dirs[k] = dir;
        } else if (k >= 1) {
            dirs[k - 1] = (node <= r[j0]) ? 1 : -1;
            node += dirs[k - 1] * inc;
            u[j0] += node - y[j0];
            y[j0] = node;
        }
        const double u_frozen = u[j0];
        for (std::size_t i = 0; i < rs; ++i) {
            const std::size_t j = j0 + i;
            const double t0 = grid.time(j);
            const double t1 = grid.time(j + 1);
            frozen += 0.5 * h * (f(u_frozen, t0) + f(u_frozen, t1));
            r[j + 1] = x_moll[j + 1] - x0 - frozen;
            if (mode == TrackMode::affine) {
                y[j + 1] = (i + 1 == rs)
                               ? node + dir * inc
                               : node + dir * M * (delta * static_cast<double>(i + 1) / static_cast<double>(rs));
            } else {
                y[j + 1] = node;
            }
            u[j + 1] = trapezoid_step(f, u[j], t0, t1, h, y[j + 1] - y[j]);
        }
        if (mode == TrackMode::affine) node += dir * inc;
    }
    if (mode == TrackMode::step) {
        dirs[params.n - 1] = (node <= r[nf]) ? 1 : -1;
        node += dirs[params.n - 1] * inc;
        u[nf] += node - y[nf];
        y[nf] = node;
    }

    BinomialPath path(mode, grid.horizon(), 0.0, M, std::move(dirs));
    const bool verified = slope_within(x_moll.max_grid_slope(), M - params.K);
    return {SampledPath(grid, std::move(u)), std::move(path), SampledPath(grid, std::move(y)),
            SampledPath(grid, std::move(r)), params, verified};
}

SampledPath residual_true(const SampledPath& x, double x0, const DriftField& drift,
                          const SampledPath& u) {
    if (!(x.grid() == u.grid())) throw std::invalid_argument("residual_true: grids differ");
    const TimeGrid& grid = x.grid();
    const double h = grid.step();
    std::vector<double> out(grid.size());
    double integral = 0.0;
    out[0] = x[0] - x0;
    for (std::size_t j = 0; j < grid.intervals(); ++j) {
        integral += 0.5 * h * (drift.f(u[j], grid.time(j)) + drift.f(u[j + 1], grid.time(j + 1)));
        out[j + 1] = x[j + 1] - x0 - integral;
    }
    return SampledPath(grid, std::move(out));
}

}  // namespace binapprox
