#pragma once

// Worked models: power-law process, exponential regression through the
// origin, normal (log-lifetime) model, and a generic location-scale model.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "plausets/im_core.hpp"
#include "plausets/interval.hpp"
#include "plausets/rng.hpp"

namespace plausets {

// ---------------------------------------------------------------------------
// Power-law process: NHPP with mean function m(y) = psi * y^theta.

/// Event times Y_1 < ... < Y_n, n >= 2, all positive.
class PowerLawData {
 public:
  explicit PowerLawData(std::vector<double> event_times);
  const std::vector<double>& times() const noexcept { return times_; }
  std::size_t size() const noexcept { return times_.size(); }

 private:
  std::vector<double> times_;
};

struct PowerLawMle {
  double theta_hat;
  double psi_hat;
};

/// theta_hat = n / sum_{i<n} log(Y_n / Y_i), psi_hat = n / Y_n^theta_hat.
PowerLawMle powerlaw_mle(const PowerLawData& data);
/// T = sum_{i<n} log(Y_n / Y_i) = n / theta_hat ~ Gamma(n - 1, scale 1/theta).
double powerlaw_statistic(const PowerLawData& data);
/// 1 - |2 F_{n-1, 1/theta}(t) - 1|.
Probability powerlaw_pl(double t, double theta, std::size_t n);
/// (gamma_{n-1}(alpha/2) / t, gamma_{n-1}(1 - alpha/2) / t), open.
Interval1D powerlaw_interval(double t, std::size_t n, double alpha);
/// T = F_{n-1,1/theta}^{-1}(U).
ScalarCdfModel powerlaw_model(std::size_t n);
/// First n event times: Y_k = (Gamma_k / psi)^(1/theta), Gamma_k a unit-rate
/// Poisson arrival sequence.
PowerLawData powerlaw_sample(double theta, double psi, std::size_t n, Rng& rng);

// ---------------------------------------------------------------------------
// Exponential regression through the origin: Y_i ~ Exp(mean e^{theta x_i}).

/// Covariates must share one sign (zeros allowed, not all zero); responses positive.
class ExpRegData {
 public:
  ExpRegData(std::vector<double> x, std::vector<double> y);
  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& y() const noexcept { return y_; }
  std::size_t size() const noexcept { return x_.size(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

/// Throws DomainError unless x is nonempty, not all zero, and sign-homogeneous.
void validate_covariates(std::span<const double> x);

/// l(theta) = -sum(theta x_i + exp(log y_i - theta x_i)).
double expreg_loglik(double theta, const ExpRegData& data);
/// sum (exp(log y_i - theta x_i) - 1) x_i; strictly decreasing in theta.
double expreg_score(double theta, const ExpRegData& data);
/// Observed information sum x_i^2 exp(log y_i - theta x_i).
double expreg_information(double theta, const ExpRegData& data);
/// Root of the score: expanding bracket, then Newton with bisection safeguard.
double expreg_mle(const ExpRegData& data);
/// Same solver on raw vectors (no copy), used by Monte Carlo loops.
double expreg_mle(std::span<const double> x, std::span<const double> y);

/// y_i = e^{theta x_i} E_i, E_i standard exponential.
std::vector<double> expreg_sample(double theta, std::span<const double> x, Rng& rng);

/// Sorted Monte Carlo draws of the pivot D = theta_hat - theta.
struct PivotTable {
  std::vector<double> sorted_draws;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::size_t size() const noexcept { return sorted_draws.size(); }
  /// Empirical CDF #{d <= x} / B.
  double cdf(double x) const;
  /// 1-based order statistic d_(k).
  double order_stat(std::size_t k) const { return sorted_draws.at(k - 1); }
};

/// B >= 1000 draws of expreg_mle(sample at theta = 0); draw b uses
/// rng.substream(b), so the table does not depend on `workers`.
PivotTable expreg_pivot_table(std::span<const double> x, std::size_t B, const Rng& rng,
                              unsigned workers = 1);

/// 1 - |2 G_0(t - theta) - 1| with G_0 the table's empirical CDF.
Probability expreg_pl(double t, double theta, const PivotTable& table);
/// {theta : alpha/2 < G_0(t - theta) < 1 - alpha/2}
///   = (t - d_(ceil((1-alpha/2)B)), t - d_(floor(alpha B/2)+1)].
/// Throws DomainError when alpha * B < 1.
Interval1D expreg_interval(double t, double alpha, const PivotTable& table);
/// G_theta(t) = G_0(t - theta); decreasing in theta.
ScalarCdfModel expreg_model(std::shared_ptr<const PivotTable> table);
/// Per-theta re-simulation: G_theta(t) from B fresh datasets at theta, with
/// dataset b drawn from rng.substream(b) (common random numbers across theta).
Probability expreg_pl_resimulated(double t, double theta, std::span<const double> x,
                                  std::size_t B, const Rng& rng);
/// theta_hat +- z_{1-alpha/2} / sqrt(I(theta_hat)), observed information.
Interval1D expreg_wald_interval(const ExpRegData& data, double alpha);

// ---------------------------------------------------------------------------
// Normal model for log-lifetimes, theta = (mu, sigma^2).

struct LognormalStats {
  std::size_t n = 0;
  double t1 = 0.0;  // sample mean
  double t2 = 0.0;  // centred sum of squares
};

LognormalStats lognormal_stats(std::span<const double> y);
/// 1 - max{|2 F1((t1-mu) sqrt(n)/sigma) - 1|, |2 F2(t2/sigma^2) - 1|}^2,
/// F1 = N(0,1), F2 = ChiSq(n-1).
Probability lognormal_pl(const LognormalStats& stats, double mu, double sigma2);
/// t = (mu + sigma n^{-1/2} F1^{-1}(u1), sigma^2 F2^{-1}(u2)).
Association lognormal_association(std::size_t n);
std::vector<double> lognormal_sample(double mu, double sigma2, std::size_t n, Rng& rng);

/// Wald ellipse from the MLE with Fisher information diag(n/s2, n/(2 s2^2)).
struct Ellipse2D {
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  double info_mu = 0.0;
  double info_sigma2 = 0.0;
  double threshold = 0.0;  // chisq_quantile(1 - alpha, 2)
  double alpha = 0.1;

  double quadratic_form(double mu, double sigma2) const;
  bool contains(double mu, double sigma2) const { return quadratic_form(mu, sigma2) <= threshold; }
};

/// Bonferroni product of a t interval for mu and an equal-tailed chi-square
/// interval for sigma^2, each at level 1 - alpha/2.
struct Rect2D {
  double mu_lo = 0.0, mu_hi = 0.0;
  double sigma2_lo = 0.0, sigma2_hi = 0.0;
  double alpha = 0.1;

  bool contains(double mu, double sigma2) const {
    return mu_lo <= mu && mu <= mu_hi && sigma2_lo <= sigma2 && sigma2 <= sigma2_hi;
  }
};

Ellipse2D lognormal_mle_region(const LognormalStats& stats, double alpha);
Rect2D lognormal_naive_region(const LognormalStats& stats, double alpha);

// ---------------------------------------------------------------------------
// Location-scale model Y_i = mu + sigma F^{-1}(U_i) with an n-dimensional box set.

enum class BaseCdf { Normal, Logistic };

double base_cdf(BaseCdf F, double z);
double base_quantile(BaseCdf F, double u);

/// 1 - {max_i |2 F((y_i - mu)/sigma) - 1|}^n.
Probability locscale_pl(std::span<const double> y, double mu, double sigma, BaseCdf F);
Association locscale_association(std::size_t n, BaseCdf F);
std::vector<double> locscale_sample(double mu, double sigma, std::size_t n, BaseCdf F, Rng& rng);

}  // namespace plausets
