#pragma once

// Special functions and distribution routines shared by every model.
// All functions are pure and throw DomainError on invalid arguments.

namespace plausets {

// Documents a value in [0, 1]; range is enforced at the API boundary.
using Probability = double;

double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x). Series for x < a + 1,
/// Lentz continued fraction for Q otherwise.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), without cancellation.
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

Probability norm_cdf(double x);
double norm_pdf(double x);
double norm_quantile(Probability q);

Probability gamma_cdf(double t, double shape, double scale);
double gamma_pdf(double t, double shape, double scale);
/// Newton from a Wilson-Hilferty start, safeguarded by a bisection bracket.
double gamma_quantile(Probability q, double shape, double scale);

Probability chisq_cdf(double x, int df);
double chisq_quantile(Probability q, int df);

Probability student_t_cdf(double x, double df);
double student_t_quantile(Probability q, double df);

Probability logistic_cdf(double x);

}  // namespace plausets
