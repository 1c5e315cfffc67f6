#include <algorithm>
#include <cmath>

#include "plausets/errors.hpp"
#include "plausets/models.hpp"
#include "plausets/numerics.hpp"

namespace plausets {

LognormalStats lognormal_stats(std::span<const double> y) {
  if (y.size() < 2) throw DomainError("lognormal: need at least 2 observations");
  double mean = 0.0;
  for (double v : y) {
    if (!std::isfinite(v)) throw DomainError("lognormal: observations must be finite");
    mean += v;
  }
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  if (!(ss > 0.0)) throw DomainError("lognormal: observations are all equal (t2 = 0)");
  return {y.size(), mean, ss};
}

Probability lognormal_pl(const LognormalStats& s, double mu, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("lognormal_pl: sigma2 must be positive");
  if (s.n < 2 || !(s.t2 > 0.0)) throw DomainError("lognormal_pl: invalid statistics");
  const double z = (s.t1 - mu) * std::sqrt(static_cast<double>(s.n) / sigma2);
  const double u1 = norm_cdf(z);
  const double u2 = chisq_cdf(s.t2 / sigma2, static_cast<int>(s.n - 1));
  return contour_box(u1, u2);
}

Association lognormal_association(std::size_t n) {
  if (n < 2) throw DomainError("lognormal_association: n must be at least 2");
  const int df = static_cast<int>(n - 1);
  const double rn = std::sqrt(static_cast<double>(n));
  Association a;
  a.model = "lognormal";
  a.theta_dim = 2;
  a.aux_dim = 2;
  a.sample_aux = uniform_sampler(2);
  a.forward = [df, rn](PointView u, PointView theta) {
    if (!(theta[1] > 0.0)) throw DomainError("lognormal: sigma2 must be positive");
    const double sigma = std::sqrt(theta[1]);
    return Point{theta[0] + sigma / rn * norm_quantile(u[0]), theta[1] * chisq_quantile(u[1], df)};
  };
  a.inverse = [df, rn](PointView t, PointView theta) {
    if (!(theta[1] > 0.0)) throw DomainError("lognormal: sigma2 must be positive");
    if (!(t[1] > 0.0)) throw DomainError("lognormal: t2 must be positive");
    const double sigma = std::sqrt(theta[1]);
    return Point{norm_cdf((t[0] - theta[0]) * rn / sigma), chisq_cdf(t[1] / theta[1], df)};
  };
  return a;
}

std::vector<double> lognormal_sample(double mu, double sigma2, std::size_t n, Rng& rng) {
  if (!(sigma2 > 0.0)) throw DomainError("lognormal_sample: sigma2 must be positive");
  const double sigma = std::sqrt(sigma2);
  std::vector<double> y(n);
  for (auto& v : y) v = mu + sigma * rng.normal();
  return y;
}

double Ellipse2D::quadratic_form(double mu, double sigma2) const {
  const double dm = mu - mu_hat;
  const double ds = sigma2 - sigma2_hat;
  return info_mu * dm * dm + info_sigma2 * ds * ds;
}

Ellipse2D lognormal_mle_region(const LognormalStats& s, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("lognormal_mle_region: alpha must lie in (0, 1)");
  if (s.n < 2 || !(s.t2 > 0.0)) throw DomainError("lognormal_mle_region: degenerate statistics");
  const double n = static_cast<double>(s.n);
  Ellipse2D e;
  e.mu_hat = s.t1;
  e.sigma2_hat = s.t2 / n;
  e.info_mu = n / e.sigma2_hat;
  e.info_sigma2 = n / (2.0 * e.sigma2_hat * e.sigma2_hat);
  e.threshold = chisq_quantile(1.0 - alpha, 2);
  e.alpha = alpha;
  return e;
}

Rect2D lognormal_naive_region(const LognormalStats& s, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("lognormal_naive_region: alpha must lie in (0, 1)");
  if (s.n < 2 || !(s.t2 > 0.0)) throw DomainError("lognormal_naive_region: degenerate statistics");
  const double n = static_cast<double>(s.n);
  const int df = static_cast<int>(s.n - 1);
  const double se = std::sqrt(s.t2 / (n - 1.0) / n);
  const double tq = student_t_quantile(1.0 - 0.25 * alpha, df);
  Rect2D r;
  r.mu_lo = s.t1 - tq * se;
  r.mu_hi = s.t1 + tq * se;
  r.sigma2_lo = s.t2 / chisq_quantile(1.0 - 0.25 * alpha, df);
  r.sigma2_hi = s.t2 / chisq_quantile(0.25 * alpha, df);
  r.alpha = alpha;
  return r;
}

double base_cdf(BaseCdf F, double z) {
  return F == BaseCdf::Normal ? norm_cdf(z) : logistic_cdf(z);
}

double base_quantile(BaseCdf F, double u) {
  if (F == BaseCdf::Normal) return norm_quantile(u);
  if (!(u > 0.0 && u < 1.0)) throw DomainError("logistic quantile: u must lie in (0, 1)");
  return std::log(u / (1.0 - u));
}

Probability locscale_pl(std::span<const double> y, double mu, double sigma, BaseCdf F) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("locscale_pl: sigma must be positive");
  if (y.empty()) throw DomainError("locscale_pl: no observations");
  std::vector<double> u(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) u[i] = base_cdf(F, (y[i] - mu) / sigma);
  return contour_box(u);
}

Association locscale_association(std::size_t n, BaseCdf F) {
  if (n == 0) throw DomainError("locscale_association: n must be positive");
  Association a;
  a.model = F == BaseCdf::Normal ? "locscale-normal" : "locscale-logistic";
  a.theta_dim = 2;
  a.aux_dim = n;
  a.sample_aux = uniform_sampler(n);
  a.forward = [F](PointView u, PointView theta) {
    if (!(theta[1] > 0.0)) throw DomainError("locscale: sigma must be positive");
    Point y(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) y[i] = theta[0] + theta[1] * base_quantile(F, u[i]);
    return y;
  };
  a.inverse = [F](PointView y, PointView theta) {
    if (!(theta[1] > 0.0)) throw DomainError("locscale: sigma must be positive");
    Point u(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) u[i] = base_cdf(F, (y[i] - theta[0]) / theta[1]);
    return u;
  };
  return a;
}

std::vector<double> locscale_sample(double mu, double sigma, std::size_t n, BaseCdf F, Rng& rng) {
  if (!(sigma > 0.0)) throw DomainError("locscale_sample: sigma must be positive");
  std::vector<double> y(n);
  for (auto& v : y) v = mu + sigma * base_quantile(F, rng.uniform());
  return y;
}

}  // namespace plausets
