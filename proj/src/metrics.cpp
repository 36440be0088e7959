#include "binapprox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace binapprox {

namespace {

void check_q(double q) {
    if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("norm: q must lie in [1, inf)");
}

double abs_pow(double v, double q) {
    const double a = std::abs(v);
    if (q == 1.0) return a;
    if (q == 2.0) return a * a;
    return std::pow(a, q);
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    if (v.empty()) return m;
    double s = 0.0;
    for (double x : v) s += x;
    m.mean = s / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.var = ss / static_cast<double>(v.size() - 1);
    }
    return m;
}

// d/dmu of mu^{1/q}; zero at mu = 0 where the estimate is exactly zero.
double root_slope(double mu, double q) {
    return mu > 0.0 ? std::pow(mu, 1.0 / q - 1.0) / q : 0.0;
}

}  // namespace

double path_lq_integral(const SampledPath& x, double q) {
    check_q(q);
    const double h = x.grid().step();
    double s = 0.5 * (abs_pow(x.front(), q) + abs_pow(x.back(), q));
    for (std::size_t j = 1; j + 1 < x.size(); ++j) s += abs_pow(x[j], q);
    return s * h;
}

double path_lq_distance(const SampledPath& a, const SampledPath& b, double q) {
    check_q(q);
    if (!(a.grid() == b.grid())) throw std::invalid_argument("norm: paths are on different grids");
    const double h = a.grid().step();
    const std::size_t last = a.size() - 1;
    double s = 0.5 * (abs_pow(a[0] - b[0], q) + abs_pow(a[last] - b[last], q));
    for (std::size_t j = 1; j < last; ++j) s += abs_pow(a[j] - b[j], q);
    return s * h;
}

NormAccumulator::NormAccumulator(double q, NormKind kind) : q_(q), kind_(kind) { check_q(q); }

void NormAccumulator::add_terms(double integral, double terminal, double peak) {
    integrals_.push_back(integral);
    terminals_.push_back(terminal);
    peaks_.push_back(peak);
}

void NormAccumulator::add(const SampledPath& x) {
    const double peak = kind_ == NormKind::sup ? abs_pow(x.max_abs(), q_) : 0.0;
    add_terms(path_lq_integral(x, q_), abs_pow(x.back(), q_), peak);
}

void NormAccumulator::add_distance(const SampledPath& a, const SampledPath& b) {
    const double peak = kind_ == NormKind::sup ? abs_pow(sup_error(a, b), q_) : 0.0;
    add_terms(path_lq_distance(a, b, q_), abs_pow(a.back() - b.back(), q_), peak);
}

NormEstimate NormAccumulator::finish() const {
    if (integrals_.empty()) throw std::invalid_argument("norm: empty ensemble");
    const auto n = static_cast<double>(integrals_.size());
    NormEstimate est{0.0, 0.0, integrals_.size(), q_, kind_};

    if (kind_ == NormKind::sup) {
        const Moments m = moments(peaks_);
        est.value = std::pow(m.mean, 1.0 / q_);
        est.std_error = root_slope(m.mean, q_) * std::sqrt(m.var / n);
        return est;
    }
    const Moments mi = moments(integrals_);
    if (kind_ == NormKind::X) {
        est.value = std::pow(mi.mean, 1.0 / q_);
        est.std_error = root_slope(mi.mean, q_) * std::sqrt(mi.var / n);
        return est;
    }
    // Xc: linearize both roots and take the variance of the combined
    // per-path influence, which accounts for their correlation.
    const Moments mt = moments(terminals_);
    const double a = root_slope(mi.mean, q_);
    const double b = root_slope(mt.mean, q_);
    std::vector<double> influence(integrals_.size());
    for (std::size_t i = 0; i < influence.size(); ++i) {
        influence[i] = a * integrals_[i] + b * terminals_[i];
    }
    est.value = std::pow(mi.mean, 1.0 / q_) + std::pow(mt.mean, 1.0 / q_);
    est.std_error = std::sqrt(moments(influence).var / n);
    return est;
}

namespace {

NormEstimate ensemble_norm(std::span<const SampledPath> ensemble, double q, NormKind kind) {
    if (ensemble.empty()) throw std::invalid_argument("norm: empty ensemble");
    NormAccumulator acc(q, kind);
    for (const auto& x : ensemble) {
        if (!(x.grid() == ensemble.front().grid())) {
            throw std::invalid_argument("norm: ensemble paths are on different grids");
        }
        acc.add(x);
    }
    return acc.finish();
}

}  // namespace

NormEstimate lq_norm(std::span<const SampledPath> ensemble, double q) {
    return ensemble_norm(ensemble, q, NormKind::X);
}

NormEstimate xc_norm(std::span<const SampledPath> ensemble, double q) {
    return ensemble_norm(ensemble, q, NormKind::Xc);
}

NormEstimate sup_norm(std::span<const SampledPath> ensemble, double q) {
    return ensemble_norm(ensemble, q, NormKind::sup);
}

double sup_error(const SampledPath& a, const SampledPath& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("sup_error: paths are on different grids");
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
}

}  // namespace binapprox
