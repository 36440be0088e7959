#pragma once

#include "binapprox/grid_paths.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace binapprox {

enum class NormKind { X, Xc, sup };

/// Monte Carlo estimate of an L_q-type norm. std_error comes from the delta
/// method on per-path sample variances and is diagnostic only.
struct NormEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    double q = 1.0;
    NormKind kind = NormKind::X;
};

/// Trapezoidal int_0^T |x(t)|^q dt.
double path_lq_integral(const SampledPath& x, double q);

/// Trapezoidal int_0^T |a(t) - b(t)|^q dt without materializing a - b.
double path_lq_distance(const SampledPath& a, const SampledPath& b, double q);

/// Streams per-path functionals and finishes into a NormEstimate. Paths can
/// be added in any order; finish() is order-independent up to roundoff and
/// bit-reproducible for a fixed insertion order.
class NormAccumulator {
public:
    NormAccumulator(double q, NormKind kind);

    void add(const SampledPath& x);
    void add_distance(const SampledPath& a, const SampledPath& b);
    /// Raw per-path terms: integral = int |x|^q, terminal = |x(T)|^q,
    /// peak = sup |x|^q. Only the terms used by the kind are read.
    void add_terms(double integral, double terminal, double peak);

    std::size_t count() const { return integrals_.size(); }
    NormEstimate finish() const;

private:
    double q_;
    NormKind kind_;
    std::vector<double> integrals_;
    std::vector<double> terminals_;
    std::vector<double> peaks_;
};

/// (E int_0^T |x|^q dt)^{1/q}. q in [1, inf); ensemble nonempty, common grid.
NormEstimate lq_norm(std::span<const SampledPath> ensemble, double q);

/// lq_norm + (E |x(T)|^q)^{1/q}.
NormEstimate xc_norm(std::span<const SampledPath> ensemble, double q);

/// (E sup_t |x|^q)^{1/q}.
NormEstimate sup_norm(std::span<const SampledPath> ensemble, double q);

/// max_j |a[j] - b[j]|.
double sup_error(const SampledPath& a, const SampledPath& b);

}  // namespace binapprox
