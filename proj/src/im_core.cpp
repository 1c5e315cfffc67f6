#include "plausets/im_core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "plausets/detail/roots.hpp"
#include "plausets/errors.hpp"

namespace plausets {
namespace {

void require_unit_interval(double u, const char* what) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError(fmt::format("{}: auxiliary coordinate {} outside [0, 1]", what, u));
  }
}

double max_centered_distance(PointView u) {
  double m = 0.0;
  for (double ui : u) m = std::max(m, std::fabs(ui - 0.5));
  return m;
}

}  // namespace

AuxSampler uniform_sampler(std::size_t dim) {
  return [dim](Rng& rng) {
    Point u(dim);
    for (auto& ui : u) ui = rng.uniform();
    return u;
  };
}

Probability contour_default(Probability u) {
  require_unit_interval(u, "contour_default");
  return 1.0 - std::fabs(2.0 * u - 1.0);
}

Probability contour_box(Probability u1, Probability u2) {
  require_unit_interval(u1, "contour_box");
  require_unit_interval(u2, "contour_box");
  const double m = std::max(std::fabs(2.0 * u1 - 1.0), std::fabs(2.0 * u2 - 1.0));
  return 1.0 - m * m;
}

Probability contour_box(PointView u) {
  if (u.empty()) throw DomainError("contour_box: empty point");
  for (double ui : u) require_unit_interval(ui, "contour_box");
  // P{max_i |U_i - 1/2| >= m} = 1 - (2m)^d for independent uniforms.
  const double r = 2.0 * max_centered_distance(u);
  return 1.0 - std::pow(r, static_cast<double>(u.size()));
}

PredictiveRandomSet PredictiveRandomSet::default_1d() {
  return {Kind::Default1D, 1, [](PointView u) { return std::fabs(u[0] - 0.5); },
          [](PointView u) { return contour_default(u[0]); }};
}

PredictiveRandomSet PredictiveRandomSet::box(std::size_t dim) {
  if (dim == 0) throw DomainError("box: dimension must be positive");
  return {Kind::Box, dim, [](PointView u) { return max_centered_distance(u); },
          [](PointView u) { return contour_box(u); }};
}

PredictiveRandomSet PredictiveRandomSet::generalized(PointFunction h, std::size_t dim,
                                                     PointFunction closed_form) {
  if (!h) throw DomainError("generalized: h must be callable");
  if (dim == 0) throw DomainError("generalized: dimension must be positive");
  return {Kind::GeneralizedH, dim, std::move(h), std::move(closed_form)};
}

PredictiveRandomSet PredictiveRandomSet::shrunken(double power) const {
  if (!(power > 0.0)) throw DomainError("shrunken: power must be positive");
  PredictiveRandomSet out = *this;
  out.power_ = power_ * power;
  return out;
}

std::string PredictiveRandomSet::name() const {
  std::string base;
  switch (kind_) {
    case Kind::Default1D: base = "default"; break;
    case Kind::Box: base = dim_ == 2 ? "box" : fmt::format("box{}", dim_); break;
    case Kind::GeneralizedH: base = "generalized"; break;
  }
  return is_shrunken() ? base + "-shrunken" : base;
}

double PredictiveRandomSet::h(PointView u) const {
  if (u.size() != dim_) throw DomainError("predictive random set: dimension mismatch");
  return h_(u);
}

Probability PredictiveRandomSet::contour(PointView u) const {
  if (!closed_form_) throw DomainError("contour: set has no closed-form contour; use contour_h");
  if (u.size() != dim_) throw DomainError("contour: dimension mismatch");
  for (double ui : u) require_unit_interval(ui, "contour");
  const double f = closed_form_(u);
  return power_ == 1.0 ? f : std::pow(f, power_);
}

Probability contour_h(PointView u, const PredictiveRandomSet& prs, const AuxSampler& sampler,
                      int B, Rng& rng) {
  if (B <= 0) throw DomainError("contour_h: Monte Carlo size must be positive");
  if (prs.has_closed_form()) return prs.contour(u);
  const double hu = prs.h(u);
  long hits = 0;
  for (int b = 0; b < B; ++b) {
    const Point draw = sampler(rng);
    if (prs.h(draw) >= hu) ++hits;
  }
  const double f = static_cast<double>(hits) / B;
  return prs.is_shrunken() ? std::pow(f, prs.power()) : f;
}

Association ScalarCdfModel::association() const {
  Association a;
  a.model = model;
  a.theta_dim = 1;
  a.aux_dim = 1;
  a.sample_aux = uniform_sampler(1);
  a.forward = [q = quantile](PointView u, PointView theta) { return Point{q(u[0], theta[0])}; };
  a.inverse = [F = cdf](PointView t, PointView theta) { return Point{F(t[0], theta[0])}; };
  return a;
}

namespace {

Point checked_inverse(const Association& assoc, PointView t, PointView theta) {
  if (theta.size() != assoc.theta_dim) throw DomainError("plausibility_point: theta dimension");
  Point u;
  try {
    u = assoc.inverse(t, theta);
  } catch (const DomainError& e) {
    throw ModelError(fmt::format("{}: inverse map undefined: {}", assoc.model, e.what()));
  }
  if (u.size() != assoc.aux_dim) throw ModelError(assoc.model + ": inverse returned wrong dimension");
  for (double ui : u) {
    if (!(ui >= 0.0 && ui <= 1.0)) {
      throw ModelError(fmt::format("{}: inverse map undefined at this (t, theta): u = {}",
                                   assoc.model, ui));
    }
  }
  return u;
}

}  // namespace

Probability plausibility_point(const Association& assoc, const PredictiveRandomSet& prs,
                               PointView t, PointView theta) {
  return prs.contour(checked_inverse(assoc, t, theta));
}

Probability plausibility_point(const Association& assoc, const PredictiveRandomSet& prs,
                               double t, double theta) {
  return plausibility_point(assoc, prs, PointView(&t, 1), PointView(&theta, 1));
}

Probability plausibility_point(const Association& assoc, const PredictiveRandomSet& prs,
                               PointView t, PointView theta, int B, Rng& rng) {
  return contour_h(checked_inverse(assoc, t, theta), prs, assoc.sample_aux, B, rng);
}

double PlausibilityCurve::at(double x) const {
  if (theta.empty() || x < theta.front() || x > theta.back()) {
    throw DomainError("PlausibilityCurve::at: point outside tabulated range");
  }
  const auto it = std::lower_bound(theta.begin(), theta.end(), x);
  const auto i = static_cast<std::size_t>(it - theta.begin());
  if (theta[i] == x) return pl[i];
  const double w = (x - theta[i - 1]) / (theta[i] - theta[i - 1]);
  return (1.0 - w) * pl[i - 1] + w * pl[i];
}

PlausibilityCurve tabulate_curve(std::function<double(double)> fn, double lo, double hi,
                                 std::size_t steps, CurveMeta meta) {
  if (!(lo < hi) || steps < 2) throw DomainError("tabulate_curve: need lo < hi and steps >= 2");
  PlausibilityCurve c;
  c.meta = std::move(meta);
  c.theta.resize(steps);
  c.pl.resize(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    c.theta[i] = x;
    c.pl[i] = fn(x);
  }
  c.fn = std::move(fn);
  return c;
}

void write_curve_csv(std::ostream& os, const PlausibilityCurve& c) {
  fmt::print(os, "# model={}\n# t={:.17g}\n# n={}\n# alpha={:g}\n# seed={}\n# mc_size={}\n",
             c.meta.model, c.meta.t, c.meta.n, c.meta.alpha, c.meta.seed, c.meta.mc_size);
  os << "theta,pl\n";
  for (std::size_t i = 0; i < c.theta.size(); ++i) {
    fmt::print(os, "{:.17g},{:.17g}\n", c.theta[i], c.pl[i]);
  }
}

PlausibilityCurve read_curve_csv(std::istream& is) {
  PlausibilityCurve c;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string val = line.substr(eq + 1);
      try {
        if (key == "model") c.meta.model = val;
        else if (key == "t") c.meta.t = std::stod(val);
        else if (key == "n") c.meta.n = std::stoul(val);
        else if (key == "alpha") c.meta.alpha = std::stod(val);
        else if (key == "seed") c.meta.seed = std::stoull(val);
        else if (key == "mc_size") c.meta.mc_size = std::stoul(val);
      } catch (const std::exception&) {
        throw ParseError("malformed metadata value for '" + key + "'", lineno);
      }
      continue;
    }
    if (!header) {
      if (line != "theta,pl") throw ParseError("expected header 'theta,pl'", lineno);
      header = true;
      continue;
    }
    std::istringstream row(line);
    double x, p;
    char comma;
    if (!(row >> x >> comma >> p) || comma != ',' || !(row >> std::ws).eof()) {
      throw ParseError("malformed row '" + line + "'", lineno);
    }
    if (!c.theta.empty() && x <= c.theta.back()) throw ParseError("theta not increasing", lineno);
    if (!(p >= 0.0 && p <= 1.0)) throw ParseError("pl outside [0, 1]", lineno);
    c.theta.push_back(x);
    c.pl.push_back(p);
  }
  if (!header) throw ParseError("missing header 'theta,pl'", lineno);
  return c;
}

Probability plausibility_set(const std::function<double(double)>& pl, double lo, double hi,
                             std::optional<double> mode) {
  if (!(lo <= hi)) throw DomainError("plausibility_set: empty assertion");
  if (lo == hi) return pl(lo);
  if (mode) return pl(std::clamp(*mode, lo, hi));

  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("plausibility_set: unbounded assertion requires a known mode");
  }
  constexpr int kGrid = 1000;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = pl(lo + (hi - lo) * i / kGrid);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section refinement in the neighbouring cells.
  double a = lo + (hi - lo) * std::max(best - 1, 0) / kGrid;
  double b = lo + (hi - lo) * std::min(best + 1, kGrid) / kGrid;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = pl(c), fd = pl(d);
  for (int i = 0; i < 100 && b - a > 1e-14 * (1.0 + std::fabs(a)); ++i) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = pl(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = pl(d);
    }
  }
  return std::max({best_val, fc, fd});
}

Probability plausibility_set(const PlausibilityCurve& curve, double lo, double hi) {
  if (!(lo <= hi)) throw DomainError("plausibility_set: empty assertion");
  double best = std::max(curve.at(lo), curve.at(hi));
  for (std::size_t i = 0; i < curve.theta.size(); ++i) {
    if (curve.theta[i] >= lo && curve.theta[i] <= hi) best = std::max(best, curve.pl[i]);
  }
  return best;
}

Probability plausibility_set(const std::function<double(double, double)>& pl,
                             std::span<const std::array<double, 2>> points) {
  if (points.empty()) throw DomainError("plausibility_set: empty assertion");
  double best = 0.0;
  for (const auto& p : points) best = std::max(best, pl(p[0], p[1]));
  return best;
}

KolmogorovStats kolmogorov_uniform(std::vector<double> values) {
  if (values.empty()) throw DomainError("kolmogorov_uniform: no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  KolmogorovStats s;
  s.n = values.size();
  double minus = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::clamp(values[i], 0.0, 1.0);
    s.ks_plus = std::max(s.ks_plus, static_cast<double>(i + 1) / n - v);
    minus = std::max(minus, v - static_cast<double>(i) / n);
  }
  s.ks_two = std::max(s.ks_plus, minus);
  return s;
}

ValidityReport validity_diagnostic(const PointFunction& contour, const AuxSampler& sampler,
                                   std::size_t N, Rng& rng) {
  if (N < 1000) throw DomainError("validity_diagnostic: N must be at least 1000");
  std::vector<double> values(N);
  for (auto& v : values) {
    const Point u = sampler(rng);
    v = contour(u);
  }
  ValidityReport r;
  r.stats = kolmogorov_uniform(std::move(values));
  r.critical = kKolmogorovBand / std::sqrt(static_cast<double>(N));
  r.pass = r.stats.ks_plus <= r.critical;
  r.exact_pass = r.stats.ks_two <= r.critical;
  return r;
}

ValidityReport validity_diagnostic(const PredictiveRandomSet& prs, const AuxSampler& sampler,
                                   std::size_t N, Rng& rng) {
  return validity_diagnostic([&prs](PointView u) { return prs.contour(u); }, sampler, N, rng);
}

Interval1D fixed_s_region(const ScalarCdfModel& model, double t, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("fixed_s_region: alpha must lie in (0, 1)");
  const double lo_u = 0.5 * alpha;
  const double hi_u = 1.0 - 0.5 * alpha;
  auto F = [&](double theta) {
    try {
      return model.cdf(t, theta);
    } catch (const DomainError& e) {
      throw ModelError(fmt::format("{}: inverse map undefined: {}", model.model, e.what()));
    }
  };
  const double start = model.support == Support::Positive ? 1.0 : 0.0;
  // With F increasing in theta, {F >= lo_u} is an upper set and {F > hi_u} too;
  // the region lies between the two switch points. Mirror for decreasing F.
  Interval1D iv;
  iv.alpha = alpha;
  iv.open = false;
  if (model.cdf_increasing_in_theta) {
    iv.lo = detail::locate_switch([&](double th) { return F(th) >= lo_u; }, start, model.support).second;
    iv.hi = detail::locate_switch([&](double th) { return F(th) > hi_u; }, start, model.support).first;
  } else {
    iv.lo = detail::locate_switch([&](double th) { return F(th) <= hi_u; }, start, model.support).second;
    iv.hi = detail::locate_switch([&](double th) { return F(th) < lo_u; }, start, model.support).first;
  }
  return iv;
}

void write_interval_csv(std::ostream& os, const Interval1D& iv, int decimals) {
  fmt::print(os, "{:.{}f},{:.{}f},{:g}\n", iv.lo, decimals, iv.hi, decimals, iv.alpha);
}

}  // namespace plausets
