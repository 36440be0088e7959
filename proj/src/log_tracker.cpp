#include "binapprox/log_tracker.hpp"

#include "binapprox/preprocess.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace binapprox {

LogRates rates_from_logslope(double rate, double delta) {
    if (!(rate > 0.0) || !(delta > 0.0) || !std::isfinite(rate * delta)) {
        throw std::invalid_argument("rates_from_logslope: rate and delta must be positive");
    }
    const double a = rate * delta;
    // expm1 keeps both rates accurate when a is tiny.
    return {-std::expm1(-a) / delta, std::expm1(a) / delta};
}

MultiplicativePath::MultiplicativePath(double horizon, double y0, LogRates rates,
                                       std::vector<double> factors)
    : horizon_(horizon), y0_(y0), rates_(rates), factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("multiplicative path: no intervals");
    if (!(y0 > 0.0)) throw std::invalid_argument("multiplicative path: y0 must be positive");
    const double d = delta();
    if (!(rates_.down * d > 0.0 && rates_.down * d < 1.0) || !(rates_.up > 0.0)) {
        throw std::invalid_argument("multiplicative path: need 0 < 1 - d1 delta < 1 < 1 + d2 delta");
    }
    for (double z : factors_) {
        if (!(1.0 + z * d > 0.0)) throw std::invalid_argument("multiplicative path: factor makes y nonpositive");
    }
}

std::vector<double> MultiplicativePath::nodes() const {
    const double d = delta();
    std::vector<double> y(factors_.size() + 1);
    y[0] = y0_;
    for (std::size_t i = 0; i < factors_.size(); ++i) y[i + 1] = y[i] * (1.0 + factors_[i] * d);
    return y;
}

bool MultiplicativePath::is_binomial() const {
    for (double z : factors_) {
        if (z != -rates_.down && z != rates_.up) return false;
    }
    return true;
}

LogTracked track_log(const SampledPath& x, const TrackerParams& params) {
    params.validate();
    if (params.K != 0.0) throw std::invalid_argument("track_log: K must be 0");
    std::vector<double> logs(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] > 0.0)) {
            throw std::invalid_argument("track_log: nonpositive value at index " + std::to_string(j));
        }
        logs[j] = std::log(x[j]);
    }
    const TimeGrid& grid = x.grid();
    const std::size_t r = grid.ratio(params.n);
    auto moll = mollify(clip(SampledPath(grid, std::move(logs)), params.m), params.p);

    TrackerParams eff = params;
    eff.p = moll.effective_p();
    const double M = eff.rate();
    const double delta = eff.delta(grid.horizon());
    const double inc = M * delta;
    const LogRates rates = rates_from_logslope(M, delta);

    std::vector<double> eta(params.n + 1);
    std::vector<double> factors(params.n);
    eta[0] = std::log(x.front());
    const SampledPath& target = moll.path;
    for (std::size_t k = 1; k <= params.n; ++k) {
        const bool up = eta[k - 1] <= target[k * r];
        eta[k] = eta[k - 1] + (up ? inc : -inc);
        factors[k - 1] = up ? rates.up : -rates.down;
    }
    // Bounds need the tracker to start on the target and the target slope <= M.
    const bool verified = slope_within(target.max_grid_slope(), M) &&
                          std::abs(eta[0] - target.front()) <= 1e-12 * (1.0 + std::abs(eta[0]));
    return {MultiplicativePath(grid.horizon(), x.front(), rates, std::move(factors)),
            std::move(eta), std::move(moll.path), eff.p, verified};
}

SampledPath eval_multiplicative(const MultiplicativePath& y, const TimeGrid& grid) {
    if (grid.horizon() != y.horizon()) throw std::invalid_argument("eval_multiplicative: horizon mismatch");
    const std::size_t r = grid.ratio(y.intervals());
    const auto nodes = y.nodes();
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = nodes[j / r];
    return SampledPath(grid, std::move(out));
}

}  // namespace binapprox
