#include "binapprox/experiment.hpp"

#include "binapprox/adaptive.hpp"
#include "binapprox/errors.hpp"
#include "binapprox/log_tracker.hpp"
#include "binapprox/preprocess.hpp"
#include "binapprox/tracker.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace binapprox {

namespace {

double parse_number(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a finite number, got '" + text + "'");
    }
}

std::pair<std::string, std::string> split_selector(const std::string& selector) {
    const auto colon = selector.find(':');
    if (colon == std::string::npos) return {selector, ""};
    return {selector.substr(0, colon), selector.substr(colon + 1)};
}

}  // namespace

DriftChoice parse_drift(const std::string& selector) {
    const auto [kind, arg] = split_selector(selector);
    DriftChoice d;
    d.name = selector;
    if (kind == "zero") {
        d.f = [](double, double) { return 0.0; };
    } else if (kind == "const") {
        const double c = parse_number("drift", arg);
        d.f = [c](double, double) { return c; };
        d.sup_abs = std::abs(c);
        d.c_f = std::abs(c);
    } else if (kind == "tanh") {
        // f = -(B/2) tanh(x/B): about -x/2 near zero, capped at B/2.
        const double B = parse_number("drift", arg);
        if (!(B > 0.0)) throw ConfigError("drift", "tanh cap must be positive");
        d.f = [B](double x, double) { return -0.5 * B * std::tanh(x / B); };
        d.sup_abs = 0.5 * B;
        // max over y = tanh in [0,1) of (B/2) y + (1 - y^2) / 2
        d.c_f = B >= 2.0 ? 0.5 * B : B * B / 8.0 + 0.5;
    } else if (kind == "linear") {
        const double a = parse_number("drift", arg);
        d.f = [a](double x, double) { return a * x; };
        d.sup_abs = a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        d.c_f = d.sup_abs;
    } else {
        throw ConfigError("drift", "unknown selector '" + selector + "' (zero, const:<c>, tanh:<B>, linear:<a>)");
    }
    return d;
}

ScalarField parse_diffusion(const std::string& selector) {
    const auto [kind, arg] = split_selector(selector);
    const double v = parse_number("diffusion", arg);
    if (kind == "const") return [v](double, double) { return v; };
    if (kind == "prop") return [v](double x, double) { return v * x; };
    throw ConfigError("diffusion", "unknown selector '" + selector + "' (const:<b>, prop:<s>)");
}

SampledPath parse_sigma(const std::string& selector, const TimeGrid& grid) {
    const auto [kind, arg] = split_selector(selector);
    std::vector<double> values(grid.size());
    if (kind == "const") {
        std::fill(values.begin(), values.end(), parse_number("sigma", arg));
    } else if (kind == "piecewise") {
        std::vector<std::pair<double, double>> pieces;  // (from time, value)
        std::stringstream ss(arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto at = item.find('@');
            if (at == std::string::npos) throw ConfigError("sigma", "piece '" + item + "' needs value@time");
            pieces.emplace_back(parse_number("sigma", item.substr(at + 1)),
                                parse_number("sigma", item.substr(0, at)));
        }
        if (pieces.empty()) throw ConfigError("sigma", "no pieces");
        std::sort(pieces.begin(), pieces.end());
        for (std::size_t j = 0; j < values.size(); ++j) {
            double v = pieces.front().second;
            for (const auto& [from, val] : pieces) {
                if (grid.time(j) >= from) v = val;
            }
            values[j] = v;
        }
    } else {
        throw ConfigError("sigma", "unknown selector '" + selector + "' (const:<s>, piecewise:...)");
    }
    return SampledPath(grid, std::move(values));
}

const char* to_string(Pipeline p) {
    switch (p) {
        case Pipeline::thm1_affine: return "thm1_affine";
        case Pipeline::thm3_step: return "thm3_step";
        case Pipeline::thm2_ode: return "thm2_ode";
        case Pipeline::thm4_ode_step: return "thm4_ode_step";
        case Pipeline::thm5_log: return "thm5_log";
        case Pipeline::adaptive: return "adaptive";
    }
    return "?";
}

Pipeline pipeline_from_string(const std::string& s) {
    for (auto p : {Pipeline::thm1_affine, Pipeline::thm3_step, Pipeline::thm2_ode,
                   Pipeline::thm4_ode_step, Pipeline::thm5_log, Pipeline::adaptive}) {
        if (s == to_string(p)) return p;
    }
    throw ConfigError("pipeline", "unknown pipeline '" + s + "'");
}

Ensemble ExperimentConfig::ensemble(std::uint64_t seed_base, std::size_t count) const {
    ProcessSpec spec = process;
    if (spec.kind == ProcessKind::ito) {
        spec.drift = parse_drift(drift_selector).f;
        spec.diffusion = parse_diffusion(diffusion_selector);
    }
    return Ensemble{spec, grid(), seed_base, count};
}

void ExperimentConfig::validate() const {
    if (!(horizon > 0.0)) throw ConfigError("T", "must be positive");
    if (n_fine == 0) throw ConfigError("n_fine", "must be >= 1");
    if (!(q >= 1.0)) throw ConfigError("q", "must be >= 1");
    if (m_values.empty()) throw ConfigError("m", "empty list");
    if (p_values.empty()) throw ConfigError("p", "empty list");
    if (n_values.empty()) throw ConfigError("n", "empty list");
    if (paths == 0) throw ConfigError("paths", "must be >= 1");
    for (double m : m_values) {
        if (!(m > 0.0)) throw ConfigError("m", "values must be positive");
    }
    const double h = horizon / static_cast<double>(n_fine);
    for (double p : p_values) {
        if (!(p > 0.0)) throw ConfigError("p", "values must be positive");
        if (1.0 / p < h * (1.0 - 1e-12)) {
            throw ConfigError("p", "window 1/" + std::to_string(p) + " is shorter than the fine step");
        }
    }
    for (std::size_t n : n_values) {
        if (n == 0 || n_fine % n != 0) {
            throw ConfigError("n", std::to_string(n) + " does not divide n_fine = " + std::to_string(n_fine));
        }
    }
    if (epsilon && !(*epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
    if (process.kind == ProcessKind::custom_table && process.table.size() != n_fine + 1) {
        throw ConfigError("table", "needs n_fine + 1 = " + std::to_string(n_fine + 1) + " values");
    }
    if (process.kind == ProcessKind::ito) {
        (void)parse_drift(drift_selector);
        (void)parse_diffusion(diffusion_selector);
    }
    if (pipeline == Pipeline::thm2_ode || pipeline == Pipeline::thm4_ode_step) {
        const auto d = parse_drift(drift_selector);
        if (!std::isfinite(d.c_f)) throw ConfigError("drift", "ode pipelines need a bounded drift");
    }
    if (pipeline == Pipeline::adaptive) {
        if (!(hoelder_q > 0.0 && hoelder_q <= 1.0)) throw ConfigError("hoelder_q", "must lie in (0, 1]");
        if (!(theta > 0.0)) throw ConfigError("theta", "must be positive");
        if (!(eps0 > 0.0)) throw ConfigError("eps0", "must be positive");
        if (!(sigma_bound > 0.0)) throw ConfigError("sigma_bound", "must be positive");
        (void)parse_sigma(sigma_selector, grid());
    }
}

bool ConvergenceReport::all_bounds_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.bound_ok; });
}

std::size_t ConvergenceReport::failures() const {
    std::size_t f = 0;
    for (const auto& r : rows) f += r.failures;
    return f;
}

namespace {

constexpr double kBoundSlack = 1e-9;

double abs_pow(double v, double q) { return q == 1.0 ? std::abs(v) : std::pow(std::abs(v), q); }

struct Terms {
    double integral = 0.0;
    double terminal = 0.0;
    double peak = 0.0;
};

Terms distance_terms(const SampledPath& a, const SampledPath& b, double q) {
    return {path_lq_distance(a, b, q), abs_pow(a.back() - b.back(), q), abs_pow(sup_error(a, b), q)};
}

struct Cell {
    double m;
    double p;
    std::size_t n;
};

struct Outcome {
    bool ok = false;
    bool verified = false;
    bool violation = false;
    Terms total;
    Terms tracking;
    double sup = 0.0;
    double bound = 0.0;
    double p_effective = 0.0;
    double rate = 0.0;
};

SampledPath log_path(const SampledPath& x) {
    std::vector<double> v(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] > 0.0)) throw std::invalid_argument("thm5_log: process must be positive");
        v[j] = std::log(x[j]);
    }
    return SampledPath(x.grid(), std::move(v));
}

SampledPath step_from_nodes(const std::vector<double>& nodes, const TimeGrid& grid) {
    const std::size_t r = grid.ratio(nodes.size() - 1);
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = nodes[j / r];
    return SampledPath(grid, std::move(v));
}

bool coarse_within(const SampledPath& y, const SampledPath& target, std::size_t n, double bound) {
    const std::size_t r = target.grid().ratio(n);
    for (std::size_t k = 0; k <= n; ++k) {
        if (std::abs(y[k * r] - target[k * r]) > bound + kBoundSlack) return false;
    }
    return true;
}

struct PipelineContext {
    const ExperimentConfig& config;
    DriftChoice drift;
    std::optional<HoelderParams> hoelder;
};

Outcome run_cell(const PipelineContext& ctx, const SampledPath& x, const Cell& cell) {
    const auto& cfg = ctx.config;
    const double q = cfg.q;
    const double T = x.grid().horizon();
    Outcome o;

    switch (cfg.pipeline) {
        case Pipeline::thm1_affine:
        case Pipeline::thm3_step: {
            const bool affine = cfg.pipeline == Pipeline::thm1_affine;
            auto moll = mollify(clip(x, cell.m), cell.p);
            TrackerParams params{cell.n, cell.m, moll.effective_p(), 0.0};
            auto tr = affine ? track_affine(moll.path, params) : track_step(moll.path, params);
            auto y = eval_binomial(tr.path, x.grid());
            o.total = distance_terms(x, y, q);
            o.tracking = distance_terms(moll.path, y, q);
            o.sup = sup_error(y, moll.path);
            o.rate = params.rate();
            o.p_effective = params.p;
            o.bound = (affine ? 2.0 : 4.0) * o.rate * params.delta(T);
            o.verified = tr.verified;
            bool within = o.sup <= o.bound + kBoundSlack;
            if (!affine) within = within && coarse_within(y, moll.path, cell.n, 2.0 * o.rate * params.delta(T));
            o.violation = o.verified && !within;
            break;
        }
        case Pipeline::thm2_ode:
        case Pipeline::thm4_ode_step: {
            const auto mode = cfg.pipeline == Pipeline::thm2_ode ? TrackMode::affine : TrackMode::step;
            auto moll = mollify(clip(x, cell.m), cell.p);
            TrackerParams params{cell.n, cell.m, moll.effective_p(), ctx.drift.sup_abs};
            auto sol = solve_binary_ode(moll.path, x.front(), DriftField{ctx.drift.f, ctx.drift.c_f}, params, mode);
            o.total = distance_terms(x, sol.u, q);
            o.tracking = distance_terms(moll.path, sol.u, q);
            o.sup = sup_error(moll.path, sol.u);
            o.rate = params.rate();
            o.p_effective = params.p;
            o.bound = binary_ode_bound(params, ctx.drift.c_f, T, mode);
            // The bound also assumes the tracker starts on the target.
            o.verified = sol.verified && std::abs(moll.path.front() - x.front()) <= 1e-12;
            o.violation = o.verified && o.sup > o.bound + kBoundSlack;
            break;
        }
        case Pipeline::thm5_log: {
            auto lt = track_log(x, TrackerParams{cell.n, cell.m, cell.p, 0.0});
            auto eta = step_from_nodes(lt.eta, x.grid());
            o.total = distance_terms(log_path(x), eta, q);
            o.tracking = distance_terms(lt.target, eta, q);
            o.sup = sup_error(eta, lt.target);
            o.p_effective = lt.effective_p;
            o.rate = 2.0 * cell.m * lt.effective_p;
            const double delta = T / static_cast<double>(cell.n);
            o.bound = 4.0 * o.rate * delta;
            o.verified = lt.verified;
            const bool within = o.sup <= o.bound + kBoundSlack &&
                                coarse_within(eta, lt.target, cell.n, 2.0 * o.rate * delta);
            o.violation = o.verified && !within;
            break;
        }
        case Pipeline::adaptive: {
            auto at = track_adaptive(x, *ctx.hoelder, cell.n);
            o.total = distance_terms(x, at.y, q);
            o.tracking = distance_terms(at.target, at.y, q);
            o.sup = sup_error(at.y, at.target);
            o.bound = at.bound;
            o.p_effective = static_cast<double>(cell.n) / T;
            o.rate = at.slopes.empty() ? 0.0 : *std::max_element(at.slopes.begin(), at.slopes.end());
            o.verified = at.verified;
            o.violation = o.verified && o.sup > o.bound + kBoundSlack;
            break;
        }
    }
    o.ok = true;
    return o;
}

}  // namespace

ConvergenceReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    PipelineContext ctx{config, parse_drift(config.drift_selector), std::nullopt};
    const TimeGrid grid = config.grid();
    if (config.pipeline == Pipeline::adaptive) {
        ctx.hoelder = HoelderParams{config.hoelder_q, config.theta, config.eps0, config.sigma_bound,
                                    parse_sigma(config.sigma_selector, grid)};
    }

    std::vector<Cell> cells;
    if (config.pipeline == Pipeline::adaptive) {
        for (std::size_t n : config.n_values) cells.push_back({config.m_values.front(), config.p_values.front(), n});
    } else {
        for (double m : config.m_values)
            for (double p : config.p_values)
                for (std::size_t n : config.n_values) cells.push_back({m, p, n});
    }

    const Ensemble ens = config.ensemble(config.seed, config.paths);
    std::vector<std::vector<Outcome>> outcomes(config.paths, std::vector<Outcome>(cells.size()));
    detail::parallel_for(config.paths, config.threads, [&](std::size_t i) {
        std::optional<SampledPath> x;
        try {
            x = ens.path(i);
        } catch (const NumericFailure&) {
            return;
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                outcomes[i][c] = run_cell(ctx, *x, cells[c]);
            } catch (const NumericFailure&) {
            } catch (const PreconditionFailure&) {
            }
        }
    });

    ConvergenceReport report;
    report.pipeline = config.pipeline;
    report.q = config.q;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        ReportRow row;
        row.m = cells[c].m;
        row.p = cells[c].p;
        row.n = cells[c].n;
        NormAccumulator total(config.q, config.norm), tracking(config.q, config.norm);
        for (std::size_t i = 0; i < config.paths; ++i) {
            const Outcome& o = outcomes[i][c];
            if (!o.ok) {
                ++row.failures;
                continue;
            }
            total.add_terms(o.total.integral, o.total.terminal, o.total.peak);
            tracking.add_terms(o.tracking.integral, o.tracking.terminal, o.tracking.peak);
            row.p_effective = o.p_effective;
            row.rate = o.rate;
            row.bound = std::max(row.bound, o.bound);
            if (o.verified) {
                ++row.verified;
                row.max_sup_error = std::max(row.max_sup_error, o.sup);
            }
            if (o.violation) row.bound_ok = false;
        }
        if (total.count() > 0) {
            row.total = total.finish();
            row.tracking = tracking.finish();
        }
        report.rows.push_back(row);
    }
    return report;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string series_name(const ReportRow& r) { return "m=" + num(r.m) + " p=" + num(r.p); }

void write_svg(const ConvergenceReport& report, const std::filesystem::path& file) {
    std::map<std::string, std::vector<const ReportRow*>> series;
    double lx0 = std::numeric_limits<double>::infinity(), lx1 = -lx0, ly0 = lx0, ly1 = -lx0;
    for (const auto& r : report.rows) {
        if (r.total.n_paths == 0 || !(r.total.value > 0.0)) continue;
        series[series_name(r)].push_back(&r);
        lx0 = std::min(lx0, std::log10(static_cast<double>(r.n)));
        lx1 = std::max(lx1, std::log10(static_cast<double>(r.n)));
        ly0 = std::min(ly0, std::log10(r.total.value));
        ly1 = std::max(ly1, std::log10(r.total.value));
    }
    constexpr double W = 640, H = 420, pad = 50;
    if (!(lx1 > lx0)) lx1 = lx0 + 1.0;
    if (!(ly1 > ly0)) ly1 = ly0 + 1.0;
    auto sx = [&](double n) { return pad + (std::log10(n) - lx0) / (lx1 - lx0) * (W - 2 * pad); };
    auto sy = [&](double e) { return H - pad - (std::log10(e) - ly0) / (ly1 - ly0) * (H - 2 * pad); };

    std::ofstream out(file);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">n (log)</text>\n";
    out << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2
        << ")\" text-anchor=\"middle\">error (log)</text>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    std::size_t idx = 0;
    for (const auto& [name, rows] : series) {
        const char* color = colors[idx % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (const auto* r : rows) out << sx(static_cast<double>(r->n)) << "," << sy(r->total.value) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << W - pad - 150 << "\" y=\"" << pad + 16 * idx << "\" fill=\"" << color << "\">" << name
            << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
}

}  // namespace

void write_report(const ConvergenceReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "report.csv");
        out << "pipeline,q,m,p,p_effective,n,rate,error_total,se_total,error_tracking,se_tracking,"
               "max_sup_error,bound,bound_ok,verified,failures\n";
        for (const auto& r : report.rows) {
            out << to_string(report.pipeline) << ',' << num(report.q) << ',' << num(r.m) << ',' << num(r.p) << ','
                << num(r.p_effective) << ',' << r.n << ',' << num(r.rate) << ',' << num(r.total.value) << ','
                << num(r.total.std_error) << ',' << num(r.tracking.value) << ',' << num(r.tracking.std_error) << ','
                << num(r.max_sup_error) << ',' << num(r.bound) << ',' << (r.bound_ok ? 1 : 0) << ','
                << r.verified << ',' << r.failures << '\n';
        }
    }
    {
        std::ofstream out(fs::path(dir) / "plot.csv");
        out << "series,n,error_total,se_total,error_tracking\n";
        for (const auto& r : report.rows) {
            out << series_name(r) << ',' << r.n << ',' << num(r.total.value) << ',' << num(r.total.std_error) << ','
                << num(r.tracking.value) << '\n';
        }
    }
    write_svg(report, fs::path(dir) / "plot.svg");
}

ThreeEpsilonChoice tune_three_epsilon(const Ensemble& ensemble, double q, NormKind norm, double eps,
                                      const std::vector<double>& m_values,
                                      const std::vector<double>& p_values) {
    if (!(eps > 0.0)) throw std::invalid_argument("tune: epsilon must be positive");
    if (norm == NormKind::sup) throw std::invalid_argument("tune: use the X or Xc norm");
    if (m_values.empty() || p_values.empty()) throw std::invalid_argument("tune: empty sweep");
    auto ms = m_values;
    auto ps = p_values;
    std::sort(ms.begin(), ms.end());
    std::sort(ps.begin(), ps.end());
    const double target = eps / 3.0;
    const std::size_t count = ensemble.paths;

    ThreeEpsilonChoice choice;

    // m: ||x - clip(x, m)||
    {
        std::vector<std::vector<Terms>> terms(count, std::vector<Terms>(ms.size()));
        detail::parallel_for(count, 0, [&](std::size_t i) {
            const auto x = ensemble.path(i);
            for (std::size_t a = 0; a < ms.size(); ++a) terms[i][a] = distance_terms(x, clip(x, ms[a]), q);
        });
        bool found = false;
        for (std::size_t a = 0; a < ms.size() && !found; ++a) {
            NormAccumulator acc(q, norm);
            for (std::size_t i = 0; i < count; ++i) acc.add_terms(terms[i][a].integral, terms[i][a].terminal, 0.0);
            choice.clip_error = acc.finish();
            choice.m = ms[a];
            found = choice.clip_error.value <= target;
        }
        if (!found) {
            throw BudgetExceeded("tune: no m in the sweep reaches eps/3 (best " + num(choice.clip_error.value) + ")",
                                 choice.m, std::numeric_limits<double>::quiet_NaN());
        }
    }

    // p: ||clip(x, m) - mollify(clip(x, m), p)||
    {
        std::vector<std::vector<Terms>> terms(count, std::vector<Terms>(ps.size()));
        std::vector<double> p_eff(ps.size());
        detail::parallel_for(count, 0, [&](std::size_t i) {
            const auto xbar = clip(ensemble.path(i), choice.m);
            for (std::size_t b = 0; b < ps.size(); ++b) {
                auto moll = mollify(xbar, ps[b]);
                terms[i][b] = distance_terms(xbar, moll.path, q);
                if (i == 0) p_eff[b] = moll.effective_p();
            }
        });
        bool found = false;
        for (std::size_t b = 0; b < ps.size() && !found; ++b) {
            NormAccumulator acc(q, norm);
            for (std::size_t i = 0; i < count; ++i) acc.add_terms(terms[i][b].integral, terms[i][b].terminal, 0.0);
            choice.moll_error = acc.finish();
            choice.p = ps[b];
            choice.p_effective = p_eff[b];
            found = choice.moll_error.value <= target;
        }
        if (!found) {
            throw BudgetExceeded("tune: no p in the sweep reaches eps/3 (best " + num(choice.moll_error.value) + ")",
                                 choice.m, choice.p);
        }
    }

    // n: smallest divisor of n_fine with 2 * factor * M * T/n <= eps/3.
    const TimeGrid& grid = ensemble.grid;
    const double T = grid.horizon();
    const double factor = std::pow(T, 1.0 / q) + (norm == NormKind::Xc ? 1.0 : 0.0);
    choice.rate = 2.0 * choice.m * choice.p_effective;
    for (std::size_t n = 1; n <= grid.intervals(); ++n) {
        if (grid.intervals() % n != 0) continue;
        const double bound = 2.0 * factor * choice.rate * T / static_cast<double>(n);
        if (bound <= target) {
            choice.n = n;
            choice.tracking_bound = bound;
            return choice;
        }
    }
    throw BudgetExceeded("tune: n_fine = " + std::to_string(grid.intervals()) +
                             " is too coarse for the required tracker step",
                         choice.m, choice.p);
}

NormEstimate measure_affine_error(const Ensemble& ensemble, double q, NormKind norm, double m, double p,
                                  std::size_t n) {
    std::vector<Terms> terms(ensemble.paths);
    detail::parallel_for(ensemble.paths, 0, [&](std::size_t i) {
        const auto x = ensemble.path(i);
        auto moll = mollify(clip(x, m), p);
        auto tr = track_affine(moll.path, TrackerParams{n, m, moll.effective_p(), 0.0});
        terms[i] = distance_terms(x, eval_binomial(tr.path, x.grid()), q);
    });
    NormAccumulator acc(q, norm);
    for (const auto& t : terms) acc.add_terms(t.integral, t.terminal, t.peak);
    return acc.finish();
}

}  // namespace binapprox
