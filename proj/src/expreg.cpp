#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "plausets/detail/parallel.hpp"
#include "plausets/errors.hpp"
#include "plausets/models.hpp"
#include "plausets/numerics.hpp"

namespace plausets {
namespace {

struct ScoreEval {
  double score;
  double slope;  // d score / d theta < 0
};

ScoreEval score_and_slope(double theta, std::span<const double> x, std::span<const double> y) {
  double s = 0.0, ds = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    const double w = std::exp(std::log(y[i]) - theta * x[i]);
    s += (w - 1.0) * x[i];
    ds -= x[i] * x[i] * w;
  }
  return {s, ds};
}

// Rounds k to the nearest integer when it is within floating noise of it.
double snap(double k) {
  const double r = std::round(k);
  return std::fabs(k - r) <= 1e-9 * std::max(1.0, std::fabs(k)) ? r : k;
}

}  // namespace

void validate_covariates(std::span<const double> x) {
  if (x.empty()) throw DomainError("expreg: no observations");
  bool pos = false, neg = false;
  for (double xi : x) {
    if (!std::isfinite(xi)) throw DomainError("expreg: covariates must be finite");
    pos |= xi > 0.0;
    neg |= xi < 0.0;
  }
  if (!pos && !neg) throw DomainError("expreg: covariates are all zero");
  if (pos && neg) throw DomainError("expreg: covariates must all share one sign");
}

ExpRegData::ExpRegData(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw DomainError("expreg: x and y lengths differ");
  validate_covariates(x_);
  for (double yi : y_) {
    if (!(yi > 0.0) || !std::isfinite(yi)) throw DomainError("expreg: responses must be positive");
  }
}

double expreg_loglik(double theta, const ExpRegData& data) {
  double l = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double lin = theta * data.x()[i];
    l -= lin + std::exp(std::log(data.y()[i]) - lin);
  }
  return l;
}

double expreg_score(double theta, const ExpRegData& data) {
  return score_and_slope(theta, data.x(), data.y()).score;
}

double expreg_information(double theta, const ExpRegData& data) {
  return -score_and_slope(theta, data.x(), data.y()).slope;
}

double expreg_mle(const ExpRegData& data) { return expreg_mle(data.x(), data.y()); }

double expreg_mle(std::span<const double> x, std::span<const double> y) {
  // Bracket the root of the decreasing score by doubling steps from 0.
  double lo = 0.0, hi = 0.0;
  const double s0 = score_and_slope(0.0, x, y).score;
  if (s0 == 0.0) return 0.0;
  double step = 1.0;
  int doublings = 0;
  if (s0 > 0.0) {
    for (hi = step; score_and_slope(hi, x, y).score > 0.0; hi += step) {
      lo = hi;
      step *= 2.0;
      if (++doublings > 100) throw ConvergenceError("expreg_mle: no upper bracket within 100 doublings");
    }
  } else {
    for (lo = -step; score_and_slope(lo, x, y).score < 0.0; lo -= step) {
      hi = lo;
      step *= 2.0;
      if (++doublings > 100) throw ConvergenceError("expreg_mle: no lower bracket within 100 doublings");
    }
  }

  double theta = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const auto [s, ds] = score_and_slope(theta, x, y);
    if (s == 0.0) return theta;
    if (s > 0.0) lo = theta; else hi = theta;
    double next = theta - s / ds;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double delta = std::fabs(next - theta);
    theta = next;
    if (delta <= 1e-14 * (1.0 + std::fabs(theta)) || hi - lo <= 1e-15 * (1.0 + std::fabs(theta))) {
      return theta;
    }
  }
  throw ConvergenceError("expreg_mle: Newton iteration did not converge");
}

std::vector<double> expreg_sample(double theta, std::span<const double> x, Rng& rng) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(theta * x[i]) * rng.exponential(1.0);
  return y;
}

double PivotTable::cdf(double x) const {
  const auto k = std::upper_bound(sorted_draws.begin(), sorted_draws.end(), x) - sorted_draws.begin();
  return static_cast<double>(k) / static_cast<double>(sorted_draws.size());
}

PivotTable expreg_pivot_table(std::span<const double> x, std::size_t B, const Rng& rng,
                              unsigned workers) {
  if (B < 1000) throw DomainError("expreg_pivot_table: B must be at least 1000");
  validate_covariates(x);
  PivotTable table;
  table.seed = rng.master_seed();
  table.stream = rng.stream_index();
  table.sorted_draws.resize(B);
  detail::parallel_for(B, workers, [&](std::size_t b) {
    Rng draw = rng.substream(b);
    const auto y = expreg_sample(0.0, x, draw);
    try {
      table.sorted_draws[b] = expreg_mle(x, y);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(fmt::format("pivot draw {}: {}", b, e.what()));
    }
  });
  std::sort(table.sorted_draws.begin(), table.sorted_draws.end());
  return table;
}

Probability expreg_pl(double t, double theta, const PivotTable& table) {
  if (table.sorted_draws.empty()) throw DomainError("expreg_pl: empty pivot table");
  // Count form keeps pl exact at the jumps: 2 min(k, B - k) / B.
  const auto& d = table.sorted_draws;
  const auto k = static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), t - theta) - d.begin());
  return static_cast<double>(2 * std::min(k, d.size() - k)) / static_cast<double>(d.size());
}

Interval1D expreg_interval(double t, double alpha, const PivotTable& table) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("expreg_interval: alpha must lie in (0, 1)");
  const double B = static_cast<double>(table.size());
  if (alpha * B < 1.0) {
    throw DomainError(fmt::format("expreg_interval: alpha * B = {} < 1; increase the Monte Carlo size",
                                  alpha * B));
  }
  // G(x) > alpha/2   <=> x >= d_(floor(alpha B / 2) + 1)
  // G(x) < 1-alpha/2 <=> x <  d_(ceil((1 - alpha/2) B))
  const auto k_lo = static_cast<std::size_t>(std::floor(snap(0.5 * alpha * B))) + 1;
  const auto k_hi = static_cast<std::size_t>(std::ceil(snap((1.0 - 0.5 * alpha) * B)));
  return {t - table.order_stat(k_hi), t - table.order_stat(k_lo), alpha, true};
}

ScalarCdfModel expreg_model(std::shared_ptr<const PivotTable> table) {
  if (!table || table->sorted_draws.empty()) throw DomainError("expreg_model: empty pivot table");
  ScalarCdfModel m;
  m.model = "expreg";
  m.cdf = [table](double t, double theta) { return table->cdf(t - theta); };
  m.quantile = [table](double u, double theta) {
    if (!(u > 0.0 && u <= 1.0)) throw DomainError("expreg: quantile level outside (0, 1]");
    const double k = std::ceil(snap(u * static_cast<double>(table->size())));
    return theta + table->order_stat(static_cast<std::size_t>(std::max(1.0, k)));
  };
  m.support = Support::Real;
  m.cdf_increasing_in_theta = false;
  return m;
}

Probability expreg_pl_resimulated(double t, double theta, std::span<const double> x,
                                  std::size_t B, const Rng& rng) {
  if (B == 0) throw DomainError("expreg_pl_resimulated: B must be positive");
  validate_covariates(x);
  std::size_t below = 0;
  for (std::size_t b = 0; b < B; ++b) {
    Rng draw = rng.substream(b);
    const auto y = expreg_sample(theta, x, draw);
    if (expreg_mle(x, y) <= t) ++below;
  }
  return static_cast<double>(2 * std::min(below, B - below)) / static_cast<double>(B);
}

Interval1D expreg_wald_interval(const ExpRegData& data, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("expreg_wald_interval: alpha must lie in (0, 1)");
  const double theta_hat = expreg_mle(data);
  const double info = expreg_information(theta_hat, data);
  if (!(info > 0.0)) throw ConvergenceError("expreg_wald_interval: nonpositive observed information");
  const double half = norm_quantile(1.0 - 0.5 * alpha) / std::sqrt(info);
  return {theta_hat - half, theta_hat + half, alpha, true};
}

}  // namespace plausets
