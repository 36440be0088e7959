#include "binapprox/adaptive.hpp"
#include "binapprox/config.hpp"
#include "binapprox/crr_market.hpp"
#include "binapprox/errors.hpp"
#include "binapprox/experiment.hpp"
#include "binapprox/log_tracker.hpp"
#include "binapprox/ode_binary.hpp"
#include "binapprox/preprocess.hpp"
#include "binapprox/tracker.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace binapprox;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumeric = 2;
constexpr int kViolation = 3;

constexpr double kSlack = 1e-9;

const char* kFormats = R"(Output files (all CSV, header row, numbers printed with %.17g):
  simulate   paths.csv        path,j,t,x
  track      binomial.csv     k,t_k,y,direction      (direction of the move leaving t_k
                                                       in affine mode, of the jump at t_k
                                                       in step mode; empty where none)
             fine.csv         t,x,x_moll,y
  ode        solution.csv     t,x,x_moll,r,y,u
             binomial.csv     k,t_k,y,direction
  log-track  log_track.csv    k,t_k,y,zeta,eta        (zeta empty at k = 0)
  adaptive   certificate.csv  t,eps,ratio,bound,pass
             adaptive.csv     t,x,target,y
  price      price.csv        periods,s0,strike,vol,rate,d1,d2,rho,p_star,price,price_direct
             tree.csv         k,i,price
  converge   report.csv, plot.csv, plot.svg (see docs/FORMATS.md)
  tune       tune.csv         m,p,p_effective,n,rate,clip_error,clip_se,moll_error,moll_se,
                              tracking_bound,validation_error,validation_se,pass
Exit codes: 0 ok, 1 usage or config error, 2 numeric failure, 3 bound violation.)";

struct Options {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    bool quiet = false;
    std::size_t path_index = 0;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ExperimentConfig resolve(const Options& opt) {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
    if (opt.out) cfg.out_dir = *opt.out;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.paths) cfg.paths = *opt.paths;
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    return cfg;
}

std::ofstream open_csv(const ExperimentConfig& cfg, const std::string& name, const std::string& header) {
    std::ofstream out(fs::path(cfg.out_dir) / name);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(cfg.out_dir) / name).string());
    out << header << '\n';
    return out;
}

SampledPath pick_path(const ExperimentConfig& cfg, const Options& opt) {
    return cfg.ensemble(cfg.seed, opt.path_index + 1).path(opt.path_index);
}

void write_binomial(std::ofstream& out, const BinomialPath& y) {
    const auto nodes = y.nodes();
    const auto& dirs = y.directions();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        out << k << ',' << num(y.delta() * static_cast<double>(k)) << ',' << num(nodes[k]) << ',';
        if (y.mode() == TrackMode::affine && k < dirs.size()) out << dirs[k];
        if (y.mode() == TrackMode::step && k > 0) out << dirs[k - 1];
        out << '\n';
    }
}

int cmd_simulate(const Options& opt) {
    const auto cfg = resolve(opt);
    auto out = open_csv(cfg, "paths.csv", "path,j,t,x");
    const auto ens = cfg.ensemble(cfg.seed, cfg.paths);
    for (std::size_t i = 0; i < cfg.paths; ++i) {
        const auto x = ens.path(i);
        for (std::size_t j = 0; j < x.size(); ++j) {
            out << i << ',' << j << ',' << num(x.grid().time(j)) << ',' << num(x[j]) << '\n';
        }
    }
    if (!opt.quiet) std::cout << "wrote " << cfg.paths << " paths to " << cfg.out_dir << "/paths.csv\n";
    return kOk;
}

int cmd_track(const Options& opt) {
    const auto cfg = resolve(opt);
    const bool step = cfg.pipeline == Pipeline::thm3_step;
    const auto x = pick_path(cfg, opt);
    const auto moll = mollify(clip(x, cfg.m_values.front()), cfg.p_values.front());
    const TrackerParams params{cfg.n_values.front(), cfg.m_values.front(), moll.effective_p(), 0.0};
    const auto tr = step ? track_step(moll.path, params) : track_affine(moll.path, params);
    const auto y = eval_binomial(tr.path, x.grid());

    auto bin = open_csv(cfg, "binomial.csv", "k,t_k,y,direction");
    write_binomial(bin, tr.path);
    auto fine = open_csv(cfg, "fine.csv", "t,x,x_moll,y");
    for (std::size_t j = 0; j < x.size(); ++j) {
        fine << num(x.grid().time(j)) << ',' << num(x[j]) << ',' << num(moll.path[j]) << ',' << num(y[j]) << '\n';
    }
    const double delta = params.delta(cfg.horizon);
    const double bound = (step ? 4.0 : 2.0) * params.rate() * delta;
    const double err = sup_error(y, moll.path);
    if (!opt.quiet) {
        std::cout << (step ? "step" : "affine") << " tracker: M = " << num(params.rate())
                  << ", sup|y - x_mp| = " << num(err) << ", bound = " << num(bound)
                  << (tr.verified ? "" : " (target slope exceeds M; bound not guaranteed)") << '\n';
    }
    return tr.verified && err > bound + kSlack ? kViolation : kOk;
}

int cmd_ode(const Options& opt) {
    const auto cfg = resolve(opt);
    const auto mode = cfg.pipeline == Pipeline::thm4_ode_step ? TrackMode::step : TrackMode::affine;
    const auto drift = parse_drift(cfg.drift_selector);
    if (!std::isfinite(drift.c_f)) throw ConfigError("drift", "ode needs a bounded drift");
    const auto x = pick_path(cfg, opt);
    const auto moll = mollify(clip(x, cfg.m_values.front()), cfg.p_values.front());
    const TrackerParams params{cfg.n_values.front(), cfg.m_values.front(), moll.effective_p(), drift.sup_abs};
    const auto sol = solve_binary_ode(moll.path, x.front(), DriftField{drift.f, drift.c_f}, params, mode);

    auto out = open_csv(cfg, "solution.csv", "t,x,x_moll,r,y,u");
    for (std::size_t j = 0; j < x.size(); ++j) {
        out << num(x.grid().time(j)) << ',' << num(x[j]) << ',' << num(moll.path[j]) << ',' << num(sol.r[j]) << ','
            << num(sol.y_fine[j]) << ',' << num(sol.u[j]) << '\n';
    }
    auto bin = open_csv(cfg, "binomial.csv", "k,t_k,y,direction");
    write_binomial(bin, sol.y);

    const double bound = binary_ode_bound(params, drift.c_f, cfg.horizon, mode);
    const double err = sup_error(moll.path, sol.u);
    if (!opt.quiet) {
        std::cout << "binary-noise ode: sup|x_mp - u| = " << num(err) << ", bound = " << num(bound) << '\n';
    }
    return sol.verified && err > bound + kSlack ? kViolation : kOk;
}

int cmd_log_track(const Options& opt) {
    const auto cfg = resolve(opt);
    const auto x = pick_path(cfg, opt);
    const auto lt = track_log(x, TrackerParams{cfg.n_values.front(), cfg.m_values.front(), cfg.p_values.front(), 0.0});
    auto out = open_csv(cfg, "log_track.csv", "k,t_k,y,zeta,eta");
    const auto nodes = lt.path.nodes();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        out << k << ',' << num(lt.path.delta() * static_cast<double>(k)) << ',' << num(nodes[k]) << ',';
        if (k > 0) out << num(lt.path.factors()[k - 1]);
        out << ',' << num(lt.eta[k]) << '\n';
    }
    const std::size_t r = x.grid().ratio(lt.eta.size() - 1);
    double err = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) err = std::max(err, std::abs(lt.eta[j / r] - lt.target[j]));
    const double M = 2.0 * cfg.m_values.front() * lt.effective_p;
    const double bound = 4.0 * M * lt.path.delta();
    if (!opt.quiet) {
        std::cout << "log tracker: d1 = " << num(lt.path.rates().down) << ", d2 = " << num(lt.path.rates().up)
                  << ", sup|eta - log target| = " << num(err) << ", bound = " << num(bound);
        if (lt.path.d1_exceeds_delta()) std::cout << " (note: d1 >= delta)";
        std::cout << '\n';
    }
    return lt.verified && err > bound + kSlack ? kViolation : kOk;
}

int cmd_adaptive(const Options& opt) {
    const auto cfg = resolve(opt);
    const auto x = pick_path(cfg, opt);
    const HoelderParams hp{cfg.hoelder_q, cfg.theta, cfg.eps0, cfg.sigma_bound, parse_sigma(cfg.sigma_selector, x.grid())};
    const auto cert = check_hoelder(x, hp);
    auto c = open_csv(cfg, "certificate.csv", "t,eps,ratio,bound,pass");
    for (const auto& row : cert.rows) {
        c << num(row.t) << ',' << num(row.eps) << ',' << num(row.ratio) << ',' << num(row.bound) << ','
          << (row.pass ? 1 : 0) << '\n';
    }
    if (!cert.holds) {
        if (!opt.quiet) {
            std::cout << "hoelder certificate fails at t = " << num(cert.worst_t) << ", eps = " << num(cert.worst_eps)
                      << ": ratio " << num(cert.worst_ratio) << " > " << num(cert.worst_bound) << '\n';
        }
        return kViolation;
    }
    const auto at = track_adaptive(x, hp, cfg.n_values.front());
    auto out = open_csv(cfg, "adaptive.csv", "t,x,target,y");
    for (std::size_t j = 0; j < x.size(); ++j) {
        out << num(x.grid().time(j)) << ',' << num(x[j]) << ',' << num(at.target[j]) << ',' << num(at.y[j]) << '\n';
    }
    const double err = sup_error(at.y, at.target);
    if (!opt.quiet) {
        std::cout << "adaptive tracker: sup|y - target| = " << num(err) << ", bound = " << num(at.bound) << '\n';
    }
    return at.verified && err > at.bound + kSlack ? kViolation : kOk;
}

int cmd_price(const Options& opt) {
    const auto cfg = resolve(opt);
    if (!(cfg.vol > 0.0)) throw ConfigError("vol", "must be positive");
    if (!(cfg.rate >= 0.0)) throw ConfigError("rate", "must be non-negative");
    if (cfg.periods == 0) throw ConfigError("periods", "must be >= 1");
    const double delta = cfg.horizon / static_cast<double>(cfg.periods);
    const auto rates = rates_from_logslope(cfg.vol / std::sqrt(delta), delta);
    const CrrTree tree{cfg.s0, rates.down * delta, rates.up * delta, std::exp(cfg.rate * delta), cfg.periods};
    const double K = cfg.strike;
    const Payoff payoff = cfg.option == "put" ? Payoff([K](double s) { return std::max(K - s, 0.0); })
                                              : Payoff([K](double s) { return std::max(s - K, 0.0); });
    const double price = price_european(tree, payoff);
    const double direct = price_european_direct(tree, payoff);
    const double p_star = risk_neutral_prob(tree.down, tree.up);

    auto out = open_csv(cfg, "price.csv", "periods,s0,strike,vol,rate,d1,d2,rho,p_star,price,price_direct");
    out << cfg.periods << ',' << num(cfg.s0) << ',' << num(K) << ',' << num(cfg.vol) << ',' << num(cfg.rate) << ','
        << num(rates.down) << ',' << num(rates.up) << ',' << num(tree.rho) << ',' << num(p_star) << ','
        << num(price) << ',' << num(direct) << '\n';
    auto nodes = open_csv(cfg, "tree.csv", "k,i,price");
    for (std::size_t k = 0; k <= cfg.periods; ++k) {
        for (std::size_t i = 0; i <= k; ++i) nodes << k << ',' << i << ',' << num(tree.price(k, i)) << '\n';
    }
    if (!opt.quiet) std::cout << cfg.option << " price = " << num(price) << " (p* = " << num(p_star) << ")\n";
    return kOk;
}

int cmd_converge(const Options& opt) {
    const auto cfg = resolve(opt);
    const auto report = run_experiment(cfg);
    write_report(report, cfg.out_dir);
    if (!opt.quiet) {
        for (const auto& r : report.rows) {
            std::cout << "m=" << num(r.m) << " p=" << num(r.p) << " n=" << r.n << "  error=" << num(r.total.value)
                      << " +- " << num(r.total.std_error) << "  sup=" << num(r.max_sup_error)
                      << " bound=" << num(r.bound) << (r.bound_ok ? "" : "  VIOLATED") << '\n';
        }
    }
    if (report.failures() > 0) {
        std::cerr << report.failures() << " path evaluations failed numerically\n";
    }
    if (!report.all_bounds_ok()) return kViolation;
    return report.failures() > 0 ? kNumeric : kOk;
}

int cmd_tune(const Options& opt) {
    const auto cfg = resolve(opt);
    if (!cfg.epsilon) throw ConfigError("epsilon", "tune needs a target epsilon");
    const auto ens = cfg.ensemble(cfg.seed, cfg.paths);
    const auto choice = tune_three_epsilon(ens, cfg.q, cfg.norm, *cfg.epsilon, cfg.m_values, cfg.p_values);
    // Validation paths use the indices right after the tuning ensemble.
    const std::size_t vpaths = cfg.validate_paths > 0 ? cfg.validate_paths : cfg.paths;
    const auto val = measure_affine_error(cfg.ensemble(cfg.seed + cfg.paths, vpaths), cfg.q, cfg.norm, choice.m,
                                          choice.p, choice.n);
    const bool pass = val.value <= *cfg.epsilon + 3.0 * val.std_error;
    auto out = open_csv(cfg, "tune.csv",
                        "m,p,p_effective,n,rate,clip_error,clip_se,moll_error,moll_se,tracking_bound,"
                        "validation_error,validation_se,pass");
    out << num(choice.m) << ',' << num(choice.p) << ',' << num(choice.p_effective) << ',' << choice.n << ','
        << num(choice.rate) << ',' << num(choice.clip_error.value) << ',' << num(choice.clip_error.std_error) << ','
        << num(choice.moll_error.value) << ',' << num(choice.moll_error.std_error) << ','
        << num(choice.tracking_bound) << ',' << num(val.value) << ',' << num(val.std_error) << ','
        << (pass ? 1 : 0) << '\n';
    if (!opt.quiet) {
        std::cout << "m = " << num(choice.m) << ", p = " << num(choice.p) << ", n = " << choice.n
                  << "; validation error " << num(val.value) << " +- " << num(val.std_error) << '\n';
    }
    return pass ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal binomial approximation of sampled processes"};
    app.footer(kFormats);
    app.require_subcommand(1);

    Options opt;
    int (*handler)(const Options&) = nullptr;
    auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config_path, "config file (key = value)");
        sub->add_option("--out", opt.out, "output directory (overrides 'out')");
        sub->add_option("--seed", opt.seed, "seed base (overrides 'seed')");
        sub->add_option("--paths", opt.paths, "ensemble size (overrides 'paths')");
        sub->add_flag("--quiet", opt.quiet, "no summary on stdout");
        sub->callback([&handler, fn] { handler = fn; });
        return sub;
    };
    add("simulate", "generate an ensemble and write the paths", cmd_simulate);
    for (auto* sub : {add("track", "clip, mollify and track one path (affine or step per 'pipeline')", cmd_track),
                      add("ode", "solve the ode with binary noise for one path", cmd_ode),
                      add("log-track", "multiplicative tracker for one positive path", cmd_log_track),
                      add("adaptive", "hoelder certificate and adaptive tracker for one path", cmd_adaptive)}) {
        sub->add_option("--path", opt.path_index, "ensemble index of the path (default 0)");
    }
    add("price", "CRR tree from the log tracker rates and a European option price", cmd_price);
    add("converge", "run the (m, p, n) sweep and write the convergence report", cmd_converge);
    add("tune", "pick (m, p, n) for a target epsilon and validate out of sample", cmd_tune);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        return handler(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << " (best m = " << num(e.best_m) << ", best p = "
                  << num(e.best_p) << ")\n";
        return kUsage;
    } catch (const NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const PreconditionFailure& e) {
        std::cerr << "precondition failed: " << e.what() << '\n';
        return kViolation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    }
}
