#include "binapprox/adaptive.hpp"

#include "binapprox/errors.hpp"
#include "binapprox/preprocess.hpp"
#include "binapprox/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace binapprox {

void HoelderParams::validate(const TimeGrid& grid) const {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("hoelder: q must lie in (0, 1]");
    if (!(theta > 0.0)) throw std::invalid_argument("hoelder: theta must be positive");
    if (!(eps0 > 0.0)) throw std::invalid_argument("hoelder: eps0 must be positive");
    if (!(bound_c > 0.0)) throw std::invalid_argument("hoelder: C must be positive");
    if (!(sigma.grid() == grid)) throw std::invalid_argument("hoelder: sigma is on a different grid");
    for (double s : sigma.values()) {
        if (s < 0.0 || s > bound_c) {
            throw std::invalid_argument("hoelder: sigma = " + std::to_string(s) + " outside [0, C]");
        }
    }
}

namespace {

std::size_t whole_steps(double span, double h, const char* what) {
    const auto steps = static_cast<std::size_t>(std::floor(span / h * (1.0 + 1e-12)));
    if (steps == 0) {
        throw std::invalid_argument(std::string("hoelder: ") + what + " is below the grid spacing");
    }
    return steps;
}

}  // namespace

HoelderCertificate check_hoelder(const SampledPath& x, const HoelderParams& hp, double tolerance) {
    const TimeGrid& grid = x.grid();
    hp.validate(grid);
    const double h = grid.step();
    const std::size_t lag = whole_steps(hp.theta, h, "theta");
    const std::size_t reach = whole_steps(hp.eps0, h, "eps0");

    std::vector<double> scale(reach + 1);
    for (std::size_t i = 1; i <= reach; ++i) scale[i] = std::pow(static_cast<double>(i) * h, hp.q);

    HoelderCertificate cert;
    cert.effective_theta = static_cast<double>(lag) * h;
    cert.effective_eps0 = static_cast<double>(reach) * h;
    cert.rows.reserve(grid.size());
    double worst_excess = -std::numeric_limits<double>::infinity();

    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double bound = hp.sigma[j >= lag ? j - lag : 0];
        CertificateRow row{grid.time(j), h, 0.0, bound, true};
        double row_excess = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i <= reach; ++i) {
            const double past = x[j >= i ? j - i : 0];
            const double ratio = std::abs(x[j] - past) / scale[i];
            const double excess = ratio - bound;
            if (excess > row_excess) {
                row_excess = excess;
                row = {grid.time(j), static_cast<double>(i) * h, ratio, bound, excess <= tolerance};
            }
        }
        if (row_excess > worst_excess) {
            worst_excess = row_excess;
            cert.worst_ratio = row.ratio;
            cert.worst_bound = row.bound;
            cert.worst_t = row.t;
            cert.worst_eps = row.eps;
        }
        if (!row.pass) cert.holds = false;
        cert.rows.push_back(row);
    }
    return cert;
}

AdaptiveTrack track_adaptive(const SampledPath& x, const HoelderParams& hp, std::size_t n) {
    const TimeGrid& grid = x.grid();
    const std::size_t r = grid.ratio(n);
    auto cert = check_hoelder(x, hp);
    if (!cert.holds) {
        throw PreconditionFailure("track_adaptive: Hoelder certificate fails at t = " +
                                  std::to_string(cert.worst_t) + ", eps = " + std::to_string(cert.worst_eps));
    }
    const double delta = grid.horizon() / static_cast<double>(n);
    if (delta > std::min(cert.effective_eps0, cert.effective_theta) * (1.0 + 1e-12)) {
        throw std::invalid_argument("track_adaptive: delta = T/n exceeds min(eps0, theta)");
    }

    // Window eps = delta keeps the mollified slope at the delta^{q-1} scale.
    auto moll = mollify(x, static_cast<double>(n) / grid.horizon());
    const SampledPath& target = moll.path;

    const double scale = std::pow(delta, hp.q - 1.0);
    std::vector<double> slopes(n), nodes(n + 1), out(grid.size());
    std::vector<int> dirs(n);
    nodes[0] = target.front();
    bool verified = true;
    double sigma_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j0 = k * r;
        const double sigma_k = hp.sigma[j0];
        sigma_max = std::max(sigma_max, sigma_k);
        slopes[k] = scale * sigma_k;
        dirs[k] = (nodes[k] <= target[j0]) ? 1 : -1;
        nodes[k + 1] = nodes[k] + dirs[k] * slopes[k] * delta;
        out[j0] = nodes[k];
        double local = 0.0;
        for (std::size_t i = 1; i <= r; ++i) {
            local = std::max(local, std::abs(target[j0 + i] - target[j0 + i - 1]));
            if (i < r) {
                out[j0 + i] = nodes[k] + dirs[k] * slopes[k] *
                                             (delta * static_cast<double>(i) / static_cast<double>(r));
            }
        }
        if (!slope_within(local / grid.step(), slopes[k])) verified = false;
    }
    out[grid.intervals()] = nodes[n];

    const double bound = 2.0 * std::pow(delta, hp.q) * sigma_max;
    return {SampledPath(grid, std::move(out)), target, std::move(slopes), std::move(dirs),
            bound, verified, std::move(cert)};
}

}  // namespace binapprox
