#include <cmath>

#include "plausets/errors.hpp"
#include "plausets/models.hpp"
#include "plausets/numerics.hpp"

namespace plausets {

PowerLawData::PowerLawData(std::vector<double> event_times) : times_(std::move(event_times)) {
  if (times_.size() < 2) throw DomainError("power-law data: need at least 2 event times");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] > 0.0) || !std::isfinite(times_[i])) {
      throw DomainError("power-law data: event times must be positive and finite");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw DomainError("power-law data: event times must be strictly increasing (no ties)");
    }
  }
}

double powerlaw_statistic(const PowerLawData& data) {
  const auto& y = data.times();
  const double log_last = std::log(y.back());
  double t = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) t += log_last - std::log(y[i]);
  return t;
}

PowerLawMle powerlaw_mle(const PowerLawData& data) {
  const double n = static_cast<double>(data.size());
  const double theta = n / powerlaw_statistic(data);
  return {theta, n / std::pow(data.times().back(), theta)};
}

Probability powerlaw_pl(double t, double theta, std::size_t n) {
  if (!(t > 0.0) || !(theta > 0.0) || n < 2) {
    throw DomainError("powerlaw_pl: need t > 0, theta > 0, n >= 2");
  }
  // F_{n-1,1/theta}(t) = P(n-1, theta t); take the smaller tail for accuracy.
  const double a = static_cast<double>(n - 1);
  const double x = theta * t;
  const double p = gamma_p(a, x);
  return p <= 0.5 ? 2.0 * p : 2.0 * gamma_q(a, x);
}

Interval1D powerlaw_interval(double t, std::size_t n, double alpha) {
  if (!(t > 0.0) || n < 2) throw DomainError("powerlaw_interval: need t > 0 and n >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("powerlaw_interval: alpha must lie in (0, 1)");
  const double a = static_cast<double>(n - 1);
  return {gamma_quantile(0.5 * alpha, a, 1.0) / t, gamma_quantile(1.0 - 0.5 * alpha, a, 1.0) / t,
          alpha, true};
}

ScalarCdfModel powerlaw_model(std::size_t n) {
  if (n < 2) throw DomainError("powerlaw_model: n must be at least 2");
  const double shape = static_cast<double>(n - 1);
  ScalarCdfModel m;
  m.model = "powerlaw";
  m.cdf = [shape](double t, double theta) {
    if (!(theta > 0.0)) throw DomainError("powerlaw: theta must be positive");
    return gamma_cdf(t, shape, 1.0 / theta);
  };
  m.quantile = [shape](double u, double theta) {
    if (!(theta > 0.0)) throw DomainError("powerlaw: theta must be positive");
    return gamma_quantile(u, shape, 1.0 / theta);
  };
  m.support = Support::Positive;
  m.cdf_increasing_in_theta = true;
  return m;
}

PowerLawData powerlaw_sample(double theta, double psi, std::size_t n, Rng& rng) {
  if (!(theta > 0.0) || !(psi > 0.0) || n < 2) {
    throw DomainError("powerlaw_sample: need theta > 0, psi > 0, n >= 2");
  }
  std::vector<double> y(n);
  double arrival = 0.0;
  for (auto& yi : y) {
    arrival += rng.exponential(1.0);
    yi = std::pow(arrival / psi, 1.0 / theta);
  }
  return PowerLawData(std::move(y));
}

}  // namespace plausets
