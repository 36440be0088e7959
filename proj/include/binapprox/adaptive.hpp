#pragma once

#include "binapprox/grid_paths.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace binapprox {

/// Hoelder-type class: |x(t) - x(t - eps)| / eps^q <= sigma(t - theta) for
/// eps in (0, eps0], with 0 <= sigma <= C. sigma lives on the grid of x and
/// is frozen at sigma(0) before time zero.
struct HoelderParams {
    double q = 1.0;
    double theta = 0.0;
    double eps0 = 0.0;
    double bound_c = 0.0;
    SampledPath sigma;

    void validate(const TimeGrid& grid) const;
};

struct CertificateRow {
    double t;
    double eps;
    double ratio;
    double bound;
    bool pass;
};

struct HoelderCertificate {
    bool holds = true;
    double worst_ratio = 0.0;   // Hoelder ratio at the largest excess over the bound
    double worst_bound = 0.0;
    double worst_t = 0.0;
    double worst_eps = 0.0;
    double effective_theta = 0.0;
    double effective_eps0 = 0.0;
    std::vector<CertificateRow> rows;  // worst probe per grid time
};

/// Evaluates the ratio for every grid pair (t_j, eps = i h), i = 1..eps0/h.
/// theta and eps0 are rounded down to whole grid steps.
HoelderCertificate check_hoelder(const SampledPath& x, const HoelderParams& hp,
                                 double tolerance = 1e-9);

struct AdaptiveTrack {
    SampledPath y;
    SampledPath target;           // x mollified with window delta, no clipping
    std::vector<double> slopes;   // delta^{q-1} sigma(t_k), k = 0..n-1
    std::vector<int> directions;
    double bound = 0.0;           // 2 delta^q max_k sigma(t_k)
    // Target grid slope <= slopes[k] on every coarse interval.
    bool verified = false;
    HoelderCertificate certificate;
};

/// Affine tracker with interval-dependent slope delta^{q-1} sigma(t_k).
/// Requires a holding certificate (PreconditionFailure otherwise) and
/// delta = T/n <= min(eps0, theta) (std::invalid_argument otherwise).
AdaptiveTrack track_adaptive(const SampledPath& x, const HoelderParams& hp, std::size_t n);

}  // namespace binapprox
