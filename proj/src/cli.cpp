#include "plausets/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "plausets/coverage.hpp"
#include "plausets/dataset_io.hpp"
#include "plausets/errors.hpp"
#include "plausets/im_core.hpp"
#include "plausets/models.hpp"
#include "plausets/regions.hpp"

namespace plausets {
namespace {

struct CliConfig {
  std::string model;
  std::optional<std::string> data;
  std::optional<std::size_t> n;
  std::optional<double> theta, psi, mu, sigma2, t;
  std::optional<std::string> xspec;
  std::string base = "normal";
  double alpha = 0.05;
  std::optional<std::uint64_t> seed;
  std::size_t mc_size = 10000;
  std::optional<std::string> grid, grid2;
  std::optional<std::string> out;
  unsigned workers = 1;
  std::string method;
  std::size_t reps = 1000;
  std::string set = "default";
  std::size_t draws = 100000;
  bool shrunken = false;
  int precision = 6;
};

struct GridSpec {
  double lo, hi;
  std::size_t steps;
};

GridSpec parse_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw DomainError("grid must look like lo:hi:steps, got '" + s + "'");
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  const double steps = parse_double(parts[2]);
  if (!(lo < hi) || steps < 2 || steps != std::floor(steps)) {
    throw DomainError("grid needs lo < hi and an integer step count >= 2");
  }
  return {lo, hi, static_cast<std::size_t>(steps)};
}

// "a:b" -> a, a+1, ..., b; otherwise a comma-separated list.
std::vector<double> parse_xspec(const std::string& s) {
  std::vector<double> x;
  const auto colon = s.find(':');
  if (colon != std::string::npos) {
    const double a = parse_double(s.substr(0, colon));
    const double b = parse_double(s.substr(colon + 1));
    if (!(a <= b) || b - a > 1e7) throw DomainError("xspec range must satisfy a <= b");
    for (double v = a; v <= b + 1e-9; v += 1.0) x.push_back(v);
    return x;
  }
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) x.push_back(parse_double(p));
  if (x.empty()) throw DomainError("empty xspec");
  return x;
}

std::uint64_t resolve_seed(const CliConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("PLAUSETS_SEED"); env && *env) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw DomainError(std::string("PLAUSETS_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return 0;
}

BaseCdf parse_base(const std::string& s) {
  if (s == "normal") return BaseCdf::Normal;
  if (s == "logistic") return BaseCdf::Logistic;
  throw DomainError("unknown base distribution '" + s + "' (normal|logistic)");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("--alpha must lie in (0, 1)");
}

bool has_truth_flags(const CliConfig& c) {
  return c.n || c.theta || c.psi || c.mu || c.sigma2 || c.xspec;
}

void with_output(const CliConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (!cfg.out) {
    fn(out);
    return;
  }
  std::ofstream f(*cfg.out, std::ios::binary);
  if (!f) throw DomainError("cannot open output file '" + *cfg.out + "'");
  fn(f);
  f.flush();
  if (!f) throw DomainError("failed writing output file '" + *cfg.out + "'");
}

// ---------------------------------------------------------------------------
// Scalar-parameter problems (powerlaw, expreg).

struct ScalarProblem {
  ModelId model;
  std::size_t n = 0;
  double t = 0.0;
  std::optional<ExpRegData> data;
  std::shared_ptr<const PivotTable> table;
  ScalarPl pl;
  double mode = 0.0;
  Support support = Support::Real;
  std::uint64_t seed = 0;
};

ScalarProblem build_scalar(const CliConfig& cfg) {
  ScalarProblem p;
  p.model = parse_model(cfg.model);
  p.seed = resolve_seed(cfg);
  if (p.model != ModelId::PowerLaw && p.model != ModelId::ExpReg) {
    throw DomainError("this command needs a scalar model (powerlaw|expreg)");
  }
  if (cfg.data && (cfg.t || has_truth_flags(cfg))) {
    throw DomainError("give exactly one of --data, a synthetic spec (--n/--theta/...), or --t");
  }
  if (cfg.t && (cfg.theta || cfg.psi || cfg.mu || cfg.sigma2)) {
    throw DomainError("--t cannot be combined with synthetic truth flags");
  }

  if (p.model == ModelId::PowerLaw) {
    if (cfg.data) {
      const auto cols = read_numeric_csv_file(*cfg.data, {"time"});
      const PowerLawData d(cols[0]);
      p.n = d.size();
      p.t = powerlaw_statistic(d);
    } else if (cfg.t) {
      if (!cfg.n) throw DomainError("--t for powerlaw requires --n");
      p.n = *cfg.n;
      p.t = *cfg.t;
    } else {
      if (!cfg.n) throw DomainError("synthetic powerlaw data requires --n");
      Rng rng = derive_stream(p.seed, 0);
      const auto d = powerlaw_sample(cfg.theta.value_or(1.0), cfg.psi.value_or(1.0), *cfg.n, rng);
      p.n = d.size();
      p.t = powerlaw_statistic(d);
    }
    if (p.n < 2 || !(p.t > 0.0)) throw DomainError("powerlaw needs n >= 2 and t > 0");
    p.pl = [t = p.t, n = p.n](double th) { return th > 0.0 ? powerlaw_pl(t, th, n) : 0.0; };
    p.mode = gamma_quantile(0.5, static_cast<double>(p.n - 1), 1.0) / p.t;
    p.support = Support::Positive;
    return p;
  }

  std::vector<double> x;
  if (cfg.data) {
    const auto cols = read_numeric_csv_file(*cfg.data, {"x", "y"});
    p.data.emplace(cols[0], cols[1]);
    x = cols[0];
    p.t = expreg_mle(*p.data);
  } else {
    if (cfg.xspec) {
      x = parse_xspec(*cfg.xspec);
      if (cfg.n && *cfg.n != x.size()) throw DomainError("--n disagrees with --xspec length");
    } else if (cfg.n) {
      for (std::size_t i = 1; i <= *cfg.n; ++i) x.push_back(static_cast<double>(i));
    } else {
      throw DomainError("expreg requires --data, --n or --xspec");
    }
    validate_covariates(x);
    if (cfg.t) {
      p.t = *cfg.t;
    } else {
      Rng rng = derive_stream(p.seed, 0);
      p.data.emplace(x, expreg_sample(cfg.theta.value_or(1.0), x, rng));
      p.t = expreg_mle(*p.data);
    }
  }
  p.n = x.size();
  if (cfg.mc_size < 1000) throw DomainError("--mc-size must be at least 1000");
  p.table = std::make_shared<const PivotTable>(
      expreg_pivot_table(x, cfg.mc_size, derive_stream(p.seed, 1), cfg.workers));
  p.pl = [t = p.t, table = p.table](double th) { return expreg_pl(t, th, *table); };
  const std::size_t B = p.table->size();
  p.mode = p.t - p.table->order_stat((B + 1) / 2);
  p.support = Support::Real;
  return p;
}

double endpoint_tol(const ScalarProblem& p) {
  return 1e-12 * std::max(1.0, std::fabs(p.mode));
}

int cmd_pl_curve(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  check_alpha(cfg.alpha);
  const ScalarProblem p = build_scalar(cfg);
  double lo, hi;
  std::size_t steps = 401;
  if (cfg.grid) {
    const auto g = parse_grid(*cfg.grid);
    lo = g.lo;
    hi = g.hi;
    steps = g.steps;
  } else {
    std::tie(lo, hi) = auto_bracket(p.pl, p.mode, cfg.alpha, p.support);
  }
  CurveMeta meta{to_string(p.model), p.t, p.n, cfg.alpha, p.seed, p.table ? p.table->size() : 0};
  const auto curve = tabulate_curve(p.pl, lo, hi, steps, meta);
  const auto crossings = plausibility_interval(p.pl, cfg.alpha, p.mode, p.support, endpoint_tol(p));

  with_output(cfg, out, [&](std::ostream& os) { write_curve_csv(os, curve); });
  std::ostream& summary = cfg.out ? out : err;
  fmt::print(summary, "alpha-crossings,{:.{}f},{:.{}f}\n", crossings.lo, cfg.precision, crossings.hi,
             cfg.precision);
  if (p.data) {
    const auto w = expreg_wald_interval(*p.data, cfg.alpha);
    fmt::print(summary, "wald,{:.{}f},{:.{}f}\n", w.lo, cfg.precision, w.hi, cfg.precision);
  }
  return kExitOk;
}

int cmd_interval(const CliConfig& cfg, std::ostream& out, std::ostream&) {
  check_alpha(cfg.alpha);
  const ScalarProblem p = build_scalar(cfg);
  const Method method = cfg.method.empty() ? Method::Plausibility : parse_method(cfg.method);
  Interval1D iv;
  switch (method) {
    case Method::Plausibility:
      iv = p.model == ModelId::PowerLaw ? powerlaw_interval(p.t, p.n, cfg.alpha)
                                        : expreg_interval(p.t, cfg.alpha, *p.table);
      break;
    case Method::FixedS:
      iv = fixed_s_region(p.model == ModelId::PowerLaw ? powerlaw_model(p.n) : expreg_model(p.table),
                          p.t, cfg.alpha);
      break;
    case Method::Wald:
      if (p.model != ModelId::ExpReg || !p.data) {
        throw DomainError("--method wald needs expreg data (--data or a synthetic spec)");
      }
      iv = expreg_wald_interval(*p.data, cfg.alpha);
      break;
    default:
      throw DomainError("--method must be plausibility, fixed_s or wald for interval");
  }
  with_output(cfg, out, [&](std::ostream& os) { write_interval_csv(os, iv, cfg.precision); });
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Two-parameter regions (lognormal, locscale).

int cmd_region2d(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  check_alpha(cfg.alpha);
  const ModelId model = parse_model(cfg.model);
  if (model != ModelId::Lognormal && model != ModelId::LocScale) {
    throw DomainError("region2d needs a two-parameter model (lognormal|locscale)");
  }
  if (cfg.data && (has_truth_flags(cfg) || cfg.t)) {
    throw DomainError("give exactly one of --data or a synthetic spec (--n/--mu/--sigma2)");
  }
  const std::uint64_t seed = resolve_seed(cfg);
  const BaseCdf base = parse_base(cfg.base);
  std::vector<double> y;
  if (cfg.data) {
    y = read_numeric_csv_file(*cfg.data, {"y"})[0];
  } else {
    if (!cfg.n) throw DomainError("synthetic data requires --n");
    Rng rng = derive_stream(seed, 0);
    const double mu = cfg.mu.value_or(0.0), s2 = cfg.sigma2.value_or(1.0);
    y = model == ModelId::Lognormal ? lognormal_sample(mu, s2, *cfg.n, rng)
                                    : locscale_sample(mu, std::sqrt(s2), *cfg.n, base, rng);
  }
  const LognormalStats stats = lognormal_stats(y);
  const double n = static_cast<double>(stats.n);
  const double s2_hat = stats.t2 / n;

  Pl2D pl;
  GridBounds b;
  std::string y_name;
  if (model == ModelId::Lognormal) {
    pl = [stats](double mu, double s2) { return s2 > 0.0 ? lognormal_pl(stats, mu, s2) : 0.0; };
    b = {stats.t1 - 4.0 * std::sqrt(s2_hat / n), stats.t1 + 4.0 * std::sqrt(s2_hat / n), 0.1 * s2_hat,
         4.0 * s2_hat};
    y_name = "sigma2";
  } else {
    pl = [y, base](double mu, double sigma) { return sigma > 0.0 ? locscale_pl(y, mu, sigma, base) : 0.0; };
    const double sd = std::sqrt(s2_hat);
    b = {stats.t1 - 3.0 * sd, stats.t1 + 3.0 * sd, 0.1 * sd, 4.0 * sd};
    y_name = "sigma";
  }

  std::size_t nx = 128, ny = 128;
  const bool auto_bounds = !cfg.grid && !cfg.grid2;
  if (cfg.grid) {
    const auto g = parse_grid(*cfg.grid);
    b.x_min = g.lo;
    b.x_max = g.hi;
    nx = g.steps;
  }
  if (cfg.grid2) {
    const auto g = parse_grid(*cfg.grid2);
    b.y_min = g.lo;
    b.y_max = g.hi;
    ny = g.steps;
  }

  // The locscale level set is unbounded as sigma grows (every z_i -> 0 sends
  // pl -> 1), so its grid is clipped rather than rejected.
  const bool clip = model == ModelId::LocScale;
  std::optional<GridRegion2D> region;
  for (int attempt = 0; !region; ++attempt) {
    try {
      region = extract_grid_region(pl, cfg.alpha, b, nx, ny, cfg.workers, !clip);
    } catch (const BoundsError&) {
      if (!auto_bounds || attempt >= 12) throw;
      const double cx = 0.5 * (b.x_min + b.x_max), hw = b.x_max - b.x_min;
      b.x_min = cx - hw;
      b.x_max = cx + hw;
      b.y_min *= 0.5;
      b.y_max *= 2.0;
    }
  }

  with_output(cfg, out, [&](std::ostream& os) { write_grid_csv(os, *region, "mu", y_name); });
  std::ostream& summary = cfg.out ? out : err;
  fmt::print(summary, "cells_inside,{}\nboundary_cells,{}\ncomponents,{}\narea,{:.6g}\n", region->count(),
             region->boundary_cells.size(), count_components(*region), region_area(*region));
  if (clip) fmt::print(summary, "clipped,{}\n", region->touches_edge() ? 1 : 0);
  return kExitOk;
}

// ---------------------------------------------------------------------------

ModelSpec truth_from(const CliConfig& cfg, ModelId model) {
  ModelSpec s;
  s.model = model;
  if (cfg.xspec) s.x = parse_xspec(*cfg.xspec);
  if (cfg.n) {
    s.n = *cfg.n;
    if (!s.x.empty() && s.x.size() != s.n) throw DomainError("--n disagrees with --xspec length");
  } else if (!s.x.empty()) {
    s.n = s.x.size();
  } else {
    throw DomainError("--n is required");
  }
  s.theta = cfg.theta.value_or(1.0);
  s.psi = cfg.psi.value_or(1.0);
  s.mu = cfg.mu.value_or(0.0);
  s.sigma2 = cfg.sigma2.value_or(1.0);
  s.base = parse_base(cfg.base);
  return s;
}

int cmd_coverage(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  check_alpha(cfg.alpha);
  if (cfg.data || cfg.t) throw DomainError("coverage simulates its own data; --data/--t not allowed");
  CoverageSpec spec;
  spec.truth = truth_from(cfg, parse_model(cfg.model));
  spec.alpha = cfg.alpha;
  spec.reps = cfg.reps;
  spec.master_seed = resolve_seed(cfg);
  spec.mc_size = cfg.mc_size;
  spec.workers = cfg.workers;

  std::vector<Method> methods;
  if (cfg.method.empty() || cfg.method == "all") {
    methods = methods_for(spec.truth.model);
  } else {
    std::stringstream ss(cfg.method);
    for (std::string m; std::getline(ss, m, ',');) methods.push_back(parse_method(m));
  }
  const auto reports = run_coverage(spec, methods);
  with_output(cfg, out, [&](std::ostream& os) { write_coverage_csv(os, reports); });
  print_coverage_table(cfg.out ? out : err, reports);
  return kExitOk;
}

int cmd_validity(const CliConfig& cfg, std::ostream& out, std::ostream&) {
  PredictiveRandomSet prs = PredictiveRandomSet::default_1d();
  if (cfg.set == "box" || cfg.set == "box-shrunken") prs = PredictiveRandomSet::box(2);
  else if (cfg.set != "default" && cfg.set != "shrunken") {
    throw DomainError("--set must be default, box, shrunken or box-shrunken");
  }
  if (cfg.set.ends_with("shrunken")) prs = prs.shrunken(2.0);
  Rng rng = derive_stream(resolve_seed(cfg), 0);
  const auto r = validity_diagnostic(prs, uniform_sampler(prs.dim()), cfg.draws, rng);
  with_output(cfg, out, [&](std::ostream& os) {
    os << "set,draws,ks_plus,ks_two,critical,valid,exact\n";
    fmt::print(os, "{},{},{:.6f},{:.6f},{:.6f},{},{}\n", cfg.set, cfg.draws, r.stats.ks_plus,
               r.stats.ks_two, r.critical, r.pass ? "pass" : "fail", r.exact_pass ? "pass" : "fail");
  });
  return kExitOk;
}

int cmd_uniformity(const CliConfig& cfg, std::ostream& out, std::ostream&) {
  UniformitySpec spec;
  spec.truth = truth_from(cfg, parse_model(cfg.model));
  spec.reps = cfg.reps;
  spec.seed = resolve_seed(cfg);
  spec.shrunken = cfg.shrunken;
  spec.workers = cfg.workers;
  const auto r = uniformity_check(spec);
  with_output(cfg, out, [&](std::ostream& os) {
    os << "model,reps,ks_plus,ks_two,critical,valid,exact\n";
    fmt::print(os, "{},{},{:.6f},{:.6f},{:.6f},{},{}\n", cfg.model, spec.reps, r.stats.ks_plus,
               r.stats.ks_two, r.critical, r.valid_pass ? "pass" : "fail", r.exact_pass ? "pass" : "fail");
  });
  return kExitOk;
}

void add_model_inputs(CLI::App* sub, CliConfig& c, bool data_allowed = true) {
  sub->add_option("--model", c.model, "powerlaw|expreg|lognormal|locscale")->required();
  if (data_allowed) sub->add_option("--data", c.data, "input CSV (time | x,y | y)");
  sub->add_option("--n", c.n, "sample size for synthetic data");
  sub->add_option("--theta", c.theta, "true shape (powerlaw) or slope (expreg)");
  sub->add_option("--psi", c.psi, "true power-law scale");
  sub->add_option("--mu", c.mu, "true location");
  sub->add_option("--sigma2", c.sigma2, "true variance (locscale: sigma^2)");
  sub->add_option("--xspec", c.xspec, "covariates 'a:b' or 'x1,x2,...'");
  sub->add_option("--base", c.base, "locscale base distribution normal|logistic");
  sub->add_option("--alpha", c.alpha, "1 - nominal level");
  sub->add_option("--seed", c.seed, "master seed (fallback: $PLAUSETS_SEED, then 0)");
  sub->add_option("--mc-size", c.mc_size, "Monte Carlo size B for pivot tables");
  sub->add_option("--out", c.out, "output file (default: stdout)");
  sub->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Plausibility functions, regions and coverage experiments", "plausets"};
  app.require_subcommand(1);

  auto* curve = app.add_subcommand("pl-curve", "tabulate pl_t(theta) for a scalar model");
  add_model_inputs(curve, cfg);
  curve->add_option("--t", cfg.t, "observed statistic");
  curve->add_option("--grid", cfg.grid, "theta grid lo:hi:steps");
  curve->add_option("--precision", cfg.precision, "decimals for printed endpoints");

  auto* interval = app.add_subcommand("interval", "plausibility/confidence interval, one CSV line");
  add_model_inputs(interval, cfg);
  interval->add_option("--t", cfg.t, "observed statistic");
  interval->add_option("--method", cfg.method, "plausibility|fixed_s|wald");
  interval->add_option("--precision", cfg.precision, "decimals for endpoints");

  auto* region = app.add_subcommand("region2d", "2-D plausibility region on a grid");
  add_model_inputs(region, cfg);
  region->add_option("--grid", cfg.grid, "mu grid lo:hi:steps");
  region->add_option("--grid2", cfg.grid2, "sigma2 (locscale: sigma) grid lo:hi:steps");

  auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage of regions");
  add_model_inputs(coverage, cfg, false);
  coverage->add_option("--reps", cfg.reps, "replications");
  coverage->add_option("--method", cfg.method, "comma list of methods, or 'all'");

  auto* validity = app.add_subcommand("validity", "stochastic-dominance check of a random set");
  validity->add_option("--set", cfg.set, "default|box|shrunken|box-shrunken");
  validity->add_option("--draws", cfg.draws, "auxiliary draws N (>= 1000)");
  validity->add_option("--seed", cfg.seed, "master seed");
  validity->add_option("--out", cfg.out, "output file");

  auto* uniformity = app.add_subcommand("uniformity", "distribution of pl_T(truth) under the model");
  add_model_inputs(uniformity, cfg, false);
  uniformity->add_option("--reps", cfg.reps, "replications");
  uniformity->add_flag("--shrunken", cfg.shrunken, "use the squared (invalid) contour");

  std::vector<char*> argv;
  std::vector<std::string> storage = args.empty() ? std::vector<std::string>{"plausets"} : args;
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitDomain;
  }

  try {
    if (*curve) return cmd_pl_curve(cfg, out, err);
    if (*interval) return cmd_interval(cfg, out, err);
    if (*region) return cmd_region2d(cfg, out, err);
    if (*coverage) return cmd_coverage(cfg, out, err);
    if (*validity) return cmd_validity(cfg, out, err);
    if (*uniformity) return cmd_uniformity(cfg, out, err);
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const ReplicateError& e) {
    err << "error: " << e.what() << "\n";
    return e.is_convergence_failure() ? kExitConvergence : kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitDomain;
}

}  // namespace plausets
