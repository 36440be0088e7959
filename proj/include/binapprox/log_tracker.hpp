#pragma once

#include "binapprox/grid_paths.hpp"
#include "binapprox/tracker.hpp"

#include <cstddef>
#include <vector>

namespace binapprox {

/// Per-unit-time down/up rates d1, d2 of a multiplicative step.
struct LogRates {
    double down;  // d1: one step multiplies by (1 - d1 delta)
    double up;    // d2: one step multiplies by (1 + d2 delta)
};

/// Solves log(1 - d1 delta) = -M delta and log(1 + d2 delta) = M delta.
LogRates rates_from_logslope(double rate, double delta);

/// y(t_k) = y0 * prod_{i=1..k} (1 + zeta_i delta) with zeta_i in {-d1, d2}.
class MultiplicativePath {
public:
    MultiplicativePath(double horizon, double y0, LogRates rates, std::vector<double> factors);

    double horizon() const { return horizon_; }
    std::size_t intervals() const { return factors_.size(); }
    double delta() const { return horizon_ / static_cast<double>(factors_.size()); }
    double y0() const { return y0_; }
    const LogRates& rates() const { return rates_; }
    const std::vector<double>& factors() const { return factors_; }

    /// Product form, k = 0..n.
    std::vector<double> nodes() const;

    /// Every factor is exactly -d1 or d2.
    bool is_binomial() const;

    /// The nominal class asks for d1 < delta; the construction only needs
    /// 0 < 1 - d1 delta < 1, so this is reported rather than enforced.
    bool d1_exceeds_delta() const { return rates_.down >= delta(); }

private:
    double horizon_;
    double y0_;
    LogRates rates_;
    std::vector<double> factors_;
};

struct LogTracked {
    MultiplicativePath path;
    std::vector<double> eta;  // additive form log x(t_0) + sum xi_i delta, k = 0..n
    SampledPath target;       // clipped + mollified log x
    double effective_p = 0.0;
    bool verified = false;
};

/// Positive-process tracker. log x is clipped at level m, mollified with
/// window 1/p, and tracked with the piecewise-constant rule (K = 0, so
/// M = 2 m p_eff); the signs are mapped to multiplicative factors via
/// rates_from_logslope. params.p is the requested p; the effective value
/// is returned.
LogTracked track_log(const SampledPath& x, const TrackerParams& params);

/// Right-continuous step evaluation of exp(eta) on a fine grid.
SampledPath eval_multiplicative(const MultiplicativePath& y, const TimeGrid& grid);

}  // namespace binapprox
