#pragma once

#include "binapprox/grid_paths.hpp"
#include "binapprox/metrics.hpp"
#include "binapprox/ode_binary.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace binapprox {

/// Invalid configuration; `key` names the offending config key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key(key) {}
    std::string key;
};

enum class Pipeline { thm1_affine, thm3_step, thm2_ode, thm4_ode_step, thm5_log, adaptive };

/// Drift selectors available from a config file, with their certificates.
struct DriftChoice {
    std::string name = "zero";  // zero | const:<c> | tanh:<B>
    ScalarField f;
    double sup_abs = 0.0;       // sup |f|, used as K
    double c_f = 0.0;
};

DriftChoice parse_drift(const std::string& selector);
/// diffusion selectors: const:<b> | prop:<s> (b = s x)
ScalarField parse_diffusion(const std::string& selector);

/// Modulus process for the adaptive pipeline.
/// const:<s> or piecewise:<s0>@<t0>,<s1>@<t1>,... (value from each t on).
SampledPath parse_sigma(const std::string& selector, const TimeGrid& grid);

struct ExperimentConfig {
    ProcessSpec process;
    std::string drift_selector = "zero";
    std::string diffusion_selector = "const:1";
    double horizon = 1.0;
    std::size_t n_fine = 1024;

    Pipeline pipeline = Pipeline::thm1_affine;
    double q = 2.0;
    NormKind norm = NormKind::X;
    std::vector<double> m_values{1.0};
    std::vector<double> p_values{1.0};
    std::vector<std::size_t> n_values{16};
    std::size_t paths = 100;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::optional<double> epsilon;
    std::size_t validate_paths = 0;
    unsigned threads = 0;  // 0: hardware concurrency

    // adaptive
    double hoelder_q = 1.0;
    double theta = 0.1;
    double eps0 = 0.05;
    double sigma_bound = 1.0;
    std::string sigma_selector = "const:1";

    // price
    double s0 = 100.0;
    double strike = 100.0;
    double vol = 0.2;
    double rate = 0.0;
    std::size_t periods = 500;
    std::string option = "call";

    TimeGrid grid() const { return TimeGrid(horizon, n_fine); }
    Ensemble ensemble(std::uint64_t seed_base, std::size_t count) const;
    void validate() const;
};

struct ReportRow {
    double m = 0.0;
    double p = 0.0;            // requested
    double p_effective = 0.0;  // after rounding the window to the grid
    std::size_t n = 0;
    double rate = 0.0;         // M
    NormEstimate total;        // ||x - y|| (or x - u)
    NormEstimate tracking;     // ||x_mp - y||
    double max_sup_error = 0.0;  // over verified paths, vs the bounded target
    double bound = 0.0;
    bool bound_ok = true;
    std::size_t verified = 0;
    std::size_t failures = 0;
};

struct ConvergenceReport {
    Pipeline pipeline = Pipeline::thm1_affine;
    double q = 2.0;
    std::vector<ReportRow> rows;

    bool all_bounds_ok() const;
    std::size_t failures() const;
};

/// Runs every (m, p, n) cell of the sweep over a fresh ensemble seeded by
/// config.seed. Per-path numeric failures are counted, not fatal.
ConvergenceReport run_experiment(const ExperimentConfig& config);

/// Writes report.csv, plot.csv and plot.svg into `dir`.
void write_report(const ConvergenceReport& report, const std::string& dir);

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double best_m, double best_p)
        : std::runtime_error(what), best_m(best_m), best_p(best_p) {}
    double best_m;
    double best_p;
};

struct ThreeEpsilonChoice {
    double m = 0.0;
    double p = 0.0;
    double p_effective = 0.0;
    std::size_t n = 0;
    double rate = 0.0;
    NormEstimate clip_error;   // ||x - clip(x, m)||
    NormEstimate moll_error;   // ||clip - mollify||
    double tracking_bound = 0.0;  // 2 T^{1/q} M delta (X) or with terminal term (Xc)
};

/// Picks the smallest m from m_values with ||x - clip_m x|| <= eps/3, then the
/// smallest p from p_values with ||clip_m x - mollify_p|| <= eps/3, then the
/// smallest n dividing the ensemble's fine grid with tracking bound <= eps/3.
/// Throws BudgetExceeded when a sweep runs out.
ThreeEpsilonChoice tune_three_epsilon(const Ensemble& ensemble, double q, NormKind norm, double eps,
                                      const std::vector<double>& m_values,
                                      const std::vector<double>& p_values);

/// ||x - y|| for the thm1_affine pipeline at a fixed (m, p, n) over `ensemble`.
NormEstimate measure_affine_error(const Ensemble& ensemble, double q, NormKind norm, double m,
                                  double p, std::size_t n);

const char* to_string(Pipeline p);
Pipeline pipeline_from_string(const std::string& s);

}  // namespace binapprox
