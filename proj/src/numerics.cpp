#include "plausets/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "plausets/errors.hpp"

namespace plausets {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxSeriesIter = 100000;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

void require_open_unit(double q, const char* what) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError(std::string(what) + ": probability must lie in (0, 1), got " +
                      std::to_string(q));
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + ": parameter must be positive and finite");
  }
}

// P(a, x) by its power series; valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxSeriesIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the modified Lentz continued fraction; valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for I_x(a, b), Lentz form.
double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxSeriesIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw ConvergenceError("beta_inc: continued fraction did not converge");
}

// Lower-tail t probability for x <= 0, computed without cancellation.
double student_t_lower(double x, double df) {
  return 0.5 * beta_inc(0.5 * df, 0.5, df / (df + x * x));
}

double student_t_pdf(double x, double df) {
  const double log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                          0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

// Acklam's rational approximation to the normal quantile, |rel err| < 1.2e-9.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  return std::lgamma(x);
}

double gamma_p(double a, double x) {
  require_positive(a, "gamma_p");
  if (!(x >= 0.0)) throw DomainError("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return std::clamp(gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(1.0 - gamma_q_cf(a, x), 0.0, 1.0);
}

double gamma_q(double a, double x) {
  require_positive(a, "gamma_q");
  if (!(x >= 0.0)) throw DomainError("gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_cf(a, x), 0.0, 1.0);
}

double beta_inc(double a, double b, double x) {
  require_positive(a, "beta_inc");
  require_positive(b, "beta_inc");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("beta_inc: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::clamp(front * beta_cf(a, b, x) / a, 0.0, 1.0);
  return std::clamp(1.0 - front * beta_cf(b, a, 1.0 - x) / b, 0.0, 1.0);
}

Probability norm_cdf(double x) {
  require_finite(x, "norm_cdf");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_quantile(Probability q) {
  require_open_unit(q, "norm_quantile");
  if (q == 0.5) return 0.0;
  // Solve in the lower tail, where q is represented exactly, then reflect.
  const bool upper = q > 0.5;
  const double p = upper ? 1.0 - q : q;
  double x = acklam(p);
  for (int i = 0; i < 2; ++i) {
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return upper ? -x : x;
}

Probability gamma_cdf(double t, double shape, double scale) {
  require_positive(shape, "gamma_cdf shape");
  require_positive(scale, "gamma_cdf scale");
  if (std::isnan(t)) throw DomainError("gamma_cdf: NaN argument");
  if (t <= 0.0) return 0.0;
  return gamma_p(shape, t / scale);
}

double gamma_pdf(double t, double shape, double scale) {
  require_positive(shape, "gamma_pdf shape");
  require_positive(scale, "gamma_pdf scale");
  if (t < 0.0) return 0.0;
  if (t == 0.0) return shape < 1.0 ? std::numeric_limits<double>::infinity()
                                   : (shape == 1.0 ? 1.0 / scale : 0.0);
  const double z = t / scale;
  return std::exp((shape - 1.0) * std::log(z) - z - std::lgamma(shape)) / scale;
}

double gamma_quantile(Probability q, double shape, double scale) {
  require_open_unit(q, "gamma_quantile");
  require_positive(shape, "gamma_quantile shape");
  require_positive(scale, "gamma_quantile scale");

  // Work on unit scale with an increasing residual that avoids cancellation:
  // P(a,x) - q in the lower half, (1-q) - Q(a,x) in the upper half.
  const bool upper = q > 0.5;
  const double target = upper ? 1.0 - q : q;
  auto residual = [&](double x) {
    return upper ? target - gamma_q(shape, x) : gamma_p(shape, x) - target;
  };

  double x;
  if (shape >= 0.1) {
    const double z = norm_quantile(q);
    const double k = 1.0 / (9.0 * shape);
    x = shape * std::pow(1.0 - k + z * std::sqrt(k), 3);
  } else {
    x = 0.0;
  }
  if (!(x > 0.0)) {
    // Small-x behaviour P(a,x) ~ x^a / Gamma(a+1).
    x = std::exp((std::log(q) + std::lgamma(shape + 1.0)) / shape);
  }
  x = std::max(x, 1e-300);

  double lo = 0.0;
  double hi = std::max(2.0 * x, shape + 1.0);
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw ConvergenceError("gamma_quantile: bracket expansion failed");
  }
  if (x <= lo || x >= hi) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double f = residual(x);
    if (f == 0.0) return x * scale;
    if (f < 0.0) lo = x; else hi = x;
    const double dens = gamma_pdf(x, shape, 1.0);
    double next = (dens > 0.0 && std::isfinite(dens)) ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 4.0 * kEps * x || hi - lo <= 4.0 * kEps * hi) {
      return next * scale;
    }
    x = next;
  }
  // Newton failed to settle; plain bisection on the surviving bracket.
  for (int iter = 0; iter < 2000 && hi - lo > 4.0 * kEps * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi) * scale;
}

Probability chisq_cdf(double x, int df) {
  if (df <= 0) throw DomainError("chisq_cdf: df must be positive");
  return gamma_cdf(x, 0.5 * df, 2.0);
}

double chisq_quantile(Probability q, int df) {
  if (df <= 0) throw DomainError("chisq_quantile: df must be positive");
  return gamma_quantile(q, 0.5 * df, 2.0);
}

Probability student_t_cdf(double x, double df) {
  require_positive(df, "student_t_cdf df");
  require_finite(x, "student_t_cdf");
  if (x == 0.0) return 0.5;
  return x < 0.0 ? student_t_lower(x, df) : 1.0 - student_t_lower(-x, df);
}

double student_t_quantile(Probability q, double df) {
  require_open_unit(q, "student_t_quantile");
  require_positive(df, "student_t_quantile df");
  if (q == 0.5) return 0.0;
  if (df == 1.0) return std::tan(std::numbers::pi * (q - 0.5));
  if (df == 2.0) return (2.0 * q - 1.0) / std::sqrt(2.0 * q * (1.0 - q));

  // Solve cdf(x) = p for x < 0 in the lower tail, then reflect.
  const bool upper = q > 0.5;
  const double p = upper ? 1.0 - q : q;
  const double z = norm_quantile(p);
  // Cornish-Fisher start.
  double x = z + (z * z * z + z) / (4.0 * df) +
             (5.0 * std::pow(z, 5) + 16.0 * z * z * z + 3.0 * z) / (96.0 * df * df);
  x = std::min(x, -1e-12);

  double lo = std::min(2.0 * x, -1.0);
  while (student_t_lower(lo, df) > p) {
    lo *= 2.0;
    if (!std::isfinite(lo)) throw ConvergenceError("student_t_quantile: bracket expansion failed");
  }
  double hi = 0.0;
  if (x <= lo || x >= hi) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double f = student_t_lower(x, df) - p;
    if (f == 0.0) break;
    if (f < 0.0) lo = x; else hi = x;
    const double dens = student_t_pdf(x, df);
    double next = dens > 0.0 ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::fabs(next - x) <= 1e-14 * (1.0 + std::fabs(x));
    x = next;
    if (done) break;
  }
  return upper ? -x : x;
}

Probability logistic_cdf(double x) {
  require_finite(x, "logistic_cdf");
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace plausets
