#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "plausets/errors.hpp"
#include "plausets/numerics.hpp"

using namespace plausets;

TEST_CASE("norm_cdf: symmetry and centre") {
  CHECK(norm_cdf(0.0) == 0.5);
  for (double x : {0.5, 1.0, 2.0}) CHECK(std::fabs(norm_cdf(-x) - (1.0 - norm_cdf(x))) < 1e-15);
}

TEST_CASE("norm_cdf: matches integrated density") {
  CHECK(std::fabs(norm_cdf(1.959964) - 0.975) < 1e-6);
  for (double x : {-6.0, -3.3, -1.0, -0.2, 0.7, 1.959964, 2.5, 4.0, 7.5}) {
    CHECK(std::fabs(norm_cdf(x) - oracle::normal_cdf(x)) < 1e-12);
  }
}

TEST_CASE("norm_cdf: deep tails stay accurate in relative terms") {
  // Mills-ratio asymptotics: Phi(-x) ~ phi(x)/x (1 - 1/x^2 + 3/x^4 - 15/x^6).
  for (double x : {10.0, 20.0, 30.0}) {
    const double phi = oracle::normal_density(x);
    const double mills = phi / x * (1 - 1 / (x * x) + 3 / std::pow(x, 4) - 15 / std::pow(x, 6));
    CHECK(norm_cdf(-x) == doctest::Approx(mills).epsilon(2e-5));
  }
}

TEST_CASE("norm_cdf: non-finite input rejected") {
  CHECK_THROWS_AS(norm_cdf(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(norm_cdf(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("norm_quantile: examples and round trip") {
  CHECK(norm_quantile(0.5) == 0.0);
  const double z = oracle::bisect([](double x) { return oracle::normal_cdf(x) - 0.975; }, 0.0, 5.0, 80);
  CHECK(std::fabs(norm_quantile(0.975) - z) < 1e-6);
  CHECK(std::fabs(norm_quantile(0.975) - 1.959964) < 1e-6);
  for (double q : {1e-300, 1e-100, 1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.77, 0.97575, 0.999,
                   1 - 1e-9}) {
    CHECK(std::fabs(norm_cdf(norm_quantile(q)) - q) <= 1e-10 * std::max(1.0, q));
    if (q < 0.5) CHECK(norm_cdf(norm_quantile(q)) == doctest::Approx(q).epsilon(1e-10));
  }
  CHECK_THROWS_AS(norm_quantile(0.0), DomainError);
  CHECK_THROWS_AS(norm_quantile(1.0), DomainError);
}

TEST_CASE("gamma_cdf: closed forms") {
  CHECK(std::fabs(gamma_cdf(std::log(2.0), 1, 1) - 0.5) < 1e-15);
  CHECK(std::fabs(gamma_cdf(1, 2, 1) - (1 - 2 * std::exp(-1.0))) < 1e-14);
  CHECK(std::fabs(gamma_cdf(1, 2, 1) - 0.2642411) < 1e-7);
  // Integer shape: Poisson sum 1 - e^{-t} sum_{k<a} t^k / k!.
  for (int a : {3, 7, 20}) {
    for (double t : {0.5, 4.0, 19.0, 45.0}) {
      double term = 1.0, sum = 0.0;
      for (int k = 0; k < a; ++k) {
        sum += term;
        term *= t / (k + 1);
      }
      CHECK(std::fabs(gamma_cdf(t, a, 1) - (1 - std::exp(-t) * sum)) < 1e-12);
    }
  }
}

TEST_CASE("gamma_cdf: shape 1 equals the exponential CDF pointwise") {
  for (int i = 0; i <= 400; ++i) {
    const double t = 0.05 * i;
    CHECK(std::fabs(gamma_cdf(t, 1, 1) - (-std::expm1(-t))) <= 1e-12);
  }
}

TEST_CASE("gamma_cdf: scale identity and integrated-density oracle") {
  for (double shape : {1.0, 1.5, 4.0, 12.5}) {
    for (double t : {0.3, 2.0, 9.0, 25.0}) {
      CHECK(std::fabs(gamma_cdf(t, shape, 2.5) - gamma_cdf(t / 2.5, shape, 1)) < 1e-15);
      CHECK(std::fabs(gamma_cdf(t, shape, 1) - oracle::gamma_cdf(t, shape)) < 1e-10);
    }
  }
}

TEST_CASE("gamma_cdf: small shapes against the series definition") {
  // P(a, x) = x^a e^{-x} sum_k x^k / Gamma(a + k + 1).
  for (double a : {0.05, 0.3, 0.8}) {
    for (double x : {1e-4, 0.2, 1.0}) {
      double sum = 0.0;
      for (int k = 0; k < 200; ++k) sum += std::exp(k * std::log(x) - std::lgamma(a + k + 1));
      const double ref = std::exp(a * std::log(x) - x) * sum;
      CHECK(gamma_cdf(x, a, 1) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("gamma_cdf: domain errors and negative support") {
  CHECK_THROWS_AS(gamma_cdf(1, 0, 1), DomainError);
  CHECK_THROWS_AS(gamma_cdf(1, 1, -1), DomainError);
  CHECK(gamma_cdf(-1, 1, 1) == 0.0);
}

TEST_CASE("gamma_quantile: examples and round trip") {
  CHECK(std::fabs(gamma_quantile(0.95, 1, 1) - 2.9957323) < 1e-7);
  const double med = oracle::bisect([](double x) { return gamma_cdf(x, 24, 1) - 0.5; }, 0.0, 100.0);
  CHECK(std::fabs(gamma_quantile(0.5, 24, 1) - med) < 1e-9);
  CHECK(std::fabs(gamma_quantile(0.5, 24, 1) - 23.67) < 0.01);
  for (double shape : {0.1, 0.5, 1.0, 2.5, 24.0, 100.0, 2000.0}) {
    for (double q : {1e-10, 1e-4, 0.025, 0.3, 0.5, 0.8, 0.975, 1 - 1e-6}) {
      const double x = gamma_quantile(q, shape, 1);
      CHECK(std::fabs(gamma_cdf(x, shape, 1) - q) <= 1e-10);
      CHECK(gamma_quantile(q, shape, 3.0) == doctest::Approx(3.0 * x).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gamma_quantile(0.0, 2, 1), DomainError);
  CHECK_THROWS_AS(gamma_quantile(1.0, 2, 1), DomainError);
}

TEST_CASE("chisq: identities") {
  for (double x : {0.1, 1.0, 3.0, 10.0}) {
    CHECK(std::fabs(chisq_cdf(x, 2) - (1 - std::exp(-x / 2))) < 1e-14);
    CHECK(std::fabs(chisq_cdf(x, 7) - gamma_cdf(x, 3.5, 2)) < 1e-15);
  }
  CHECK(std::fabs(chisq_quantile(0.9, 2) - 4.60517) < 1e-5);
  CHECK(std::fabs(chisq_quantile(0.9, 2) + 2 * std::log(0.1)) < 1e-12);
  for (double q : {0.001, 0.05, 0.5, 0.95, 0.999}) {
    CHECK(std::fabs(chisq_cdf(chisq_quantile(q, 24), 24) - q) <= 1e-10);
  }
  CHECK_THROWS_AS(chisq_cdf(1.0, 0), DomainError);
}

TEST_CASE("student_t: cdf matches integrated density") {
  for (double v : {1.0, 2.0, 3.5, 24.0}) {
    for (double x : {-4.0, -1.0, 0.3, 2.0, 9.0}) {
      CHECK(std::fabs(student_t_cdf(x, v) - oracle::student_t_cdf(x, v)) < 1e-9);
    }
  }
}

TEST_CASE("student_t_quantile: examples") {
  for (double v : {1.0, 3.0, 24.0}) CHECK(student_t_quantile(0.5, v) == 0.0);
  CHECK(std::fabs(student_t_quantile(0.975, 1) - std::tan(std::numbers::pi * 0.475)) < 1e-9);
  CHECK(std::fabs(student_t_quantile(0.975, 1) - 12.7062) < 1e-4);
  for (double q : {0.01, 0.2, 0.9, 0.975}) {
    CHECK(std::fabs(student_t_quantile(q, 1e6) - norm_quantile(q)) < 1e-3);
  }
  for (double v : {1.0, 2.0, 3.0, 5.5, 24.0, 300.0}) {
    for (double q : {1e-8, 0.001, 0.05, 0.4, 0.6, 0.95, 0.999}) {
      CHECK(std::fabs(student_t_cdf(student_t_quantile(q, v), v) - q) <= 1e-8 * std::max(q, 1e-3));
    }
  }
  CHECK_THROWS_AS(student_t_quantile(1.0, 3), DomainError);
}

TEST_CASE("log_gamma agrees with std::lgamma") {
  for (double x : {0.01, 0.5, 1.0, 2.0, 3.7, 10.0, 171.5, 1e5}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("property: CDFs are nondecreasing and map into [0, 1]") {
  for (int trial = 0; trial < 50; ++trial) {
    const double shape = oracle::unif(0.2, 60.0);
    const int df = 1 + static_cast<int>(oracle::unif(0, 40));
    double prev_g = 0.0, prev_n = 0.0, prev_t = 0.0, prev_c = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x = -10.0 + 0.1 * i;
      const double g = gamma_cdf(std::max(x + 10.0, 0.0) * shape / 10.0, shape, 1);
      const double n = norm_cdf(x);
      const double t = student_t_cdf(x, df);
      const double c = chisq_cdf(std::max(x + 10.0, 0.0) * df / 8.0, df);
      for (double v : {g, n, t, c}) CHECK((v >= 0.0 && v <= 1.0));
      CHECK(g >= prev_g);
      CHECK(n >= prev_n);
      CHECK(t >= prev_t);
      CHECK(c >= prev_c);
      prev_g = g, prev_n = n, prev_t = t, prev_c = c;
    }
  }
}

TEST_CASE("property: quantiles invert CDFs on random grids") {
  for (int trial = 0; trial < 300; ++trial) {
    const double q = oracle::unif(1e-6, 1 - 1e-6);
    const double shape = std::exp(oracle::unif(std::log(0.05), std::log(5000.0)));
    const double v = std::exp(oracle::unif(0.0, std::log(1000.0)));
    CHECK(std::fabs(gamma_cdf(gamma_quantile(q, shape, 1), shape, 1) - q) <= 1e-10);
    CHECK(std::fabs(norm_cdf(norm_quantile(q)) - q) <= 1e-10);
    CHECK(std::fabs(student_t_cdf(student_t_quantile(q, v), v) - q) <= 1e-8);
  }
}
