#include "plausets/coverage.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "plausets/detail/parallel.hpp"
#include "plausets/errors.hpp"

namespace plausets {

std::string to_string(ModelId m) {
  switch (m) {
    case ModelId::PowerLaw: return "powerlaw";
    case ModelId::ExpReg: return "expreg";
    case ModelId::Lognormal: return "lognormal";
    case ModelId::LocScale: return "locscale";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Plausibility: return "plausibility";
    case Method::Wald: return "wald";
    case Method::MleEllipse: return "mle_ellipse";
    case Method::NaiveRect: return "naive_rect";
    case Method::FixedS: return "fixed_s";
    case Method::Whole: return "whole";
  }
  return "?";
}

ModelId parse_model(const std::string& s) {
  for (auto m : {ModelId::PowerLaw, ModelId::ExpReg, ModelId::Lognormal, ModelId::LocScale}) {
    if (to_string(m) == s) return m;
  }
  throw DomainError("unknown model '" + s + "'");
}

Method parse_method(const std::string& s) {
  for (auto m : {Method::Plausibility, Method::Wald, Method::MleEllipse, Method::NaiveRect,
                 Method::FixedS, Method::Whole}) {
    if (to_string(m) == s) return m;
  }
  throw DomainError("unknown method '" + s + "'");
}

std::vector<Method> methods_for(ModelId m) {
  switch (m) {
    case ModelId::PowerLaw: return {Method::Plausibility, Method::FixedS};
    case ModelId::ExpReg: return {Method::Plausibility, Method::Wald, Method::FixedS};
    case ModelId::Lognormal: return {Method::Plausibility, Method::MleEllipse, Method::NaiveRect};
    case ModelId::LocScale: return {Method::Plausibility};
  }
  return {};
}

std::vector<double> ModelSpec::covariates() const {
  if (!x.empty()) return x;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(i + 1);
  return out;
}

void ModelSpec::validate() const {
  switch (model) {
    case ModelId::PowerLaw:
      if (n < 2 || !(theta > 0.0) || !(psi > 0.0)) {
        throw DomainError("powerlaw: need n >= 2, theta > 0, psi > 0");
      }
      break;
    case ModelId::ExpReg:
      if (!std::isfinite(theta)) throw DomainError("expreg: theta must be finite");
      if (!x.empty() && x.size() != n) throw DomainError("expreg: covariate count differs from n");
      validate_covariates(covariates());
      break;
    case ModelId::Lognormal:
    case ModelId::LocScale:
      if (n < 2 || !(sigma2 > 0.0) || !std::isfinite(mu)) {
        throw DomainError("location-scale truth: need n >= 2 and sigma2 > 0");
      }
      break;
  }
}

namespace {

void check_method(ModelId model, Method method) {
  if (method == Method::Whole) return;
  for (auto m : methods_for(model)) {
    if (m == method) return;
  }
  throw DomainError(fmt::format("method {} is not defined for model {}", to_string(method),
                                to_string(model)));
}

// Evaluates every requested method on one replicated dataset.
void run_replicate(const CoverageSpec& spec, std::span<const Method> methods,
                   std::span<const double> x, Rng rng, std::uint8_t* hits) {
  const ModelSpec& truth = spec.truth;
  const double alpha = spec.alpha;
  Rng data_rng = rng.substream(0);

  switch (truth.model) {
    case ModelId::PowerLaw: {
      const auto data = powerlaw_sample(truth.theta, truth.psi, truth.n, data_rng);
      const double t = powerlaw_statistic(data);
      for (std::size_t k = 0; k < methods.size(); ++k) {
        switch (methods[k]) {
          case Method::Plausibility: hits[k] = powerlaw_pl(t, truth.theta, truth.n) > alpha; break;
          case Method::FixedS:
            hits[k] = fixed_s_region(powerlaw_model(truth.n), t, alpha).contains(truth.theta);
            break;
          default: hits[k] = 1; break;
        }
      }
      break;
    }
    case ModelId::ExpReg: {
      const auto y = expreg_sample(truth.theta, x, data_rng);
      const ExpRegData data({x.begin(), x.end()}, y);
      const double t = expreg_mle(data);
      std::shared_ptr<const PivotTable> table;
      auto need_table = [&] {
        if (!table) {
          table = std::make_shared<const PivotTable>(expreg_pivot_table(x, spec.mc_size, rng.substream(1)));
        }
        return table;
      };
      for (std::size_t k = 0; k < methods.size(); ++k) {
        switch (methods[k]) {
          case Method::Plausibility: hits[k] = expreg_pl(t, truth.theta, *need_table()) > alpha; break;
          case Method::FixedS:
            hits[k] = fixed_s_region(expreg_model(need_table()), t, alpha).contains(truth.theta);
            break;
          case Method::Wald: hits[k] = expreg_wald_interval(data, alpha).contains(truth.theta); break;
          default: hits[k] = 1; break;
        }
      }
      break;
    }
    case ModelId::Lognormal: {
      const auto y = lognormal_sample(truth.mu, truth.sigma2, truth.n, data_rng);
      const auto stats = lognormal_stats(y);
      for (std::size_t k = 0; k < methods.size(); ++k) {
        switch (methods[k]) {
          case Method::Plausibility: hits[k] = lognormal_pl(stats, truth.mu, truth.sigma2) > alpha; break;
          case Method::MleEllipse:
            hits[k] = lognormal_mle_region(stats, alpha).contains(truth.mu, truth.sigma2);
            break;
          case Method::NaiveRect:
            hits[k] = lognormal_naive_region(stats, alpha).contains(truth.mu, truth.sigma2);
            break;
          default: hits[k] = 1; break;
        }
      }
      break;
    }
    case ModelId::LocScale: {
      const double sigma = std::sqrt(truth.sigma2);
      const auto y = locscale_sample(truth.mu, sigma, truth.n, truth.base, data_rng);
      for (std::size_t k = 0; k < methods.size(); ++k) {
        hits[k] = methods[k] == Method::Plausibility
                      ? locscale_pl(y, truth.mu, sigma, truth.base) > alpha
                      : 1;
      }
      break;
    }
  }
}

}  // namespace

std::vector<CoverageReport> run_coverage(const CoverageSpec& spec, std::span<const Method> methods) {
  if (spec.reps < 100) throw DomainError("run_coverage: reps must be at least 100");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw DomainError("run_coverage: alpha must lie in (0, 1)");
  if (methods.empty()) throw DomainError("run_coverage: no methods requested");
  spec.truth.validate();
  for (auto m : methods) check_method(spec.truth.model, m);
  const bool needs_table = spec.truth.model == ModelId::ExpReg &&
                           std::any_of(methods.begin(), methods.end(), [](Method m) {
                             return m == Method::Plausibility || m == Method::FixedS;
                           });
  if (needs_table && spec.mc_size < 1000) throw DomainError("run_coverage: mc_size must be at least 1000");

  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> x = spec.truth.covariates();
  const std::size_t m = methods.size();
  std::vector<std::uint8_t> hits(spec.reps * m, 0);

  detail::parallel_for(spec.reps, spec.workers, [&](std::size_t r) {
    try {
      run_replicate(spec, methods, x, derive_stream(spec.master_seed, r), hits.data() + r * m);
    } catch (const ConvergenceError& e) {
      throw ReplicateError(e.what(), r, spec.master_seed, true);
    } catch (const std::exception& e) {
      throw ReplicateError(e.what(), r, spec.master_seed, false);
    }
  });

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<CoverageReport> out;
  for (std::size_t k = 0; k < m; ++k) {
    CoverageReport rep;
    rep.spec = spec;
    rep.spec.method = methods[k];
    for (std::size_t r = 0; r < spec.reps; ++r) rep.hits += hits[r * m + k];
    const double reps = static_cast<double>(spec.reps);
    rep.estimate = static_cast<double>(rep.hits) / reps;
    rep.stderr_ = std::sqrt(rep.estimate * (1.0 - rep.estimate) / reps);
    rep.wall_seconds = elapsed;
    out.push_back(rep);
  }
  return out;
}

CoverageReport run_coverage(const CoverageSpec& spec) {
  const Method one[] = {spec.method};
  return run_coverage(spec, one).front();
}

void write_coverage_csv(std::ostream& os, std::span<const CoverageReport> reports, bool header) {
  if (header) os << "method,alpha,reps,estimate,stderr,seed\n";
  for (const auto& r : reports) {
    fmt::print(os, "{},{:g},{},{:.6f},{:.6f},{}\n", to_string(r.spec.method), r.spec.alpha,
               r.spec.reps, r.estimate, r.stderr_, r.spec.master_seed);
  }
}

void print_coverage_table(std::ostream& os, std::span<const CoverageReport> reports) {
  if (reports.empty()) return;
  const auto& s = reports.front().spec;
  fmt::print(os, "model {}  n={}  alpha={:g}  reps={}  seed={}\n", to_string(s.truth.model), s.truth.n,
             s.alpha, s.reps, s.master_seed);
  fmt::print(os, "{:<14} {:>9} {:>9} {:>9}\n", "method", "coverage", "stderr", "target");
  for (const auto& r : reports) {
    fmt::print(os, "{:<14} {:>9.4f} {:>9.4f} {:>9.4f}\n", to_string(r.spec.method), r.estimate,
               r.stderr_, 1.0 - r.spec.alpha);
  }
}

UniformityReport uniformity_check(const UniformitySpec& spec) {
  spec.truth.validate();
  if (spec.reps < 100) throw DomainError("uniformity_check: reps must be at least 100");
  const ModelSpec& truth = spec.truth;

  Association assoc;
  PredictiveRandomSet prs = PredictiveRandomSet::default_1d();
  Point theta;
  switch (truth.model) {
    case ModelId::PowerLaw:
      assoc = powerlaw_model(truth.n).association();
      theta = {truth.theta};
      break;
    case ModelId::Lognormal:
      assoc = lognormal_association(truth.n);
      prs = PredictiveRandomSet::box(2);
      theta = {truth.mu, truth.sigma2};
      break;
    case ModelId::LocScale:
      assoc = locscale_association(truth.n, truth.base);
      prs = PredictiveRandomSet::box(truth.n);
      theta = {truth.mu, std::sqrt(truth.sigma2)};
      break;
    case ModelId::ExpReg:
      throw DomainError("uniformity_check: regression statistic is Monte Carlo based; not supported");
  }
  if (spec.shrunken) prs = prs.shrunken(2.0);

  std::vector<double> values(spec.reps);
  detail::parallel_for(spec.reps, spec.workers, [&](std::size_t r) {
    Rng rng = derive_stream(spec.seed, r).substream(0);
    Point t;
    switch (truth.model) {
      case ModelId::PowerLaw:
        t = {powerlaw_statistic(powerlaw_sample(truth.theta, truth.psi, truth.n, rng))};
        break;
      case ModelId::Lognormal: {
        const auto s = lognormal_stats(lognormal_sample(truth.mu, truth.sigma2, truth.n, rng));
        t = {s.t1, s.t2};
        break;
      }
      default:
        t = locscale_sample(truth.mu, theta[1], truth.n, truth.base, rng);
        break;
    }
    values[r] = plausibility_point(assoc, prs, t, theta);
  });

  UniformityReport rep;
  rep.stats = kolmogorov_uniform(std::move(values));
  rep.critical = kKolmogorovBand / std::sqrt(static_cast<double>(spec.reps));
  rep.valid_pass = rep.stats.ks_plus <= rep.critical;
  rep.exact_pass = rep.stats.ks_two <= rep.critical;
  return rep;
}

}  // namespace plausets
