#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "plausets/errors.hpp"
#include "plausets/im_core.hpp"
#include "plausets/models.hpp"
#include "plausets/regions.hpp"

using namespace plausets;

namespace {

double centered(PointView u) { return std::fabs(u[0] - 0.5); }

double box_h(PointView u) { return std::max(std::fabs(u[0] - 0.5), std::fabs(u[1] - 0.5)); }

}  // namespace

TEST_CASE("contour_default: closed form") {
  CHECK(contour_default(0.5) == 1.0);
  CHECK(contour_default(0.0) == 0.0);
  CHECK(contour_default(1.0) == 0.0);
  CHECK(contour_default(0.25) == 0.5);
  CHECK_THROWS_AS(contour_default(-0.1), DomainError);
  CHECK_THROWS_AS(contour_default(1.1), DomainError);
}

TEST_CASE("contour_box: closed form and brute-force probability") {
  CHECK(contour_box(0.5, 0.5) == 1.0);
  CHECK(contour_box(0.0, 0.7) == 0.0);
  CHECK(contour_box(0.25, 0.5) == 0.75);
  CHECK_THROWS_AS(contour_box(0.2, 1.5), DomainError);
  // P{max(|U1 - 1/2|, |U2 - 1/2|) >= 1/4} by direct simulation.
  const int N = 1000000;
  int hits = 0;
  for (int i = 0; i < N; ++i) {
    const double a = oracle::unif(), b = oracle::unif();
    hits += std::max(std::fabs(a - 0.5), std::fabs(b - 0.5)) >= 0.25;
  }
  CHECK(oracle::within_3sigma(static_cast<double>(hits) / N, contour_box(0.25, 0.5), N));
}

TEST_CASE("contour_box: d-dimensional form") {
  const std::vector<double> u = {0.3, 0.55, 0.9};
  CHECK(contour_box(u) == doctest::Approx(1.0 - std::pow(0.8, 3)).epsilon(1e-15));
  const std::vector<double> two = {0.1, 0.6};
  CHECK(contour_box(two) == contour_box(0.1, 0.6));
}

TEST_CASE("contour_h: Monte Carlo recovers the closed forms") {
  const int B = 200000;
  Rng rng = derive_stream(1, 0);
  const auto gen1 = PredictiveRandomSet::generalized(centered, 1);
  CHECK_FALSE(gen1.has_closed_form());
  for (double u : {0.05, 0.3, 0.5, 0.81}) {
    const double est = contour_h(PointView(&u, 1), gen1, uniform_sampler(1), B, rng);
    CHECK(oracle::within_3sigma(est, contour_default(u), B));
  }
  const auto gen2 = PredictiveRandomSet::generalized(box_h, 2);
  for (auto [a, b] : {std::pair{0.25, 0.5}, std::pair{0.9, 0.2}, std::pair{0.45, 0.6}}) {
    const std::vector<double> u = {a, b};
    const double est = contour_h(u, gen2, uniform_sampler(2), B, rng);
    CHECK(oracle::within_3sigma(est, contour_box(a, b), B));
  }
  const double u = 0.3;
  CHECK_THROWS_AS(contour_h(PointView(&u, 1), gen1, uniform_sampler(1), 0, rng), DomainError);
}

TEST_CASE("contour_h: registered closed form is used exactly") {
  const auto gen = PredictiveRandomSet::generalized(centered, 1,
                                                    [](PointView u) { return contour_default(u[0]); });
  Rng rng = derive_stream(2, 0);
  const Rng before = rng;
  const double u = 0.2;
  CHECK(contour_h(PointView(&u, 1), gen, uniform_sampler(1), 10, rng) == contour_default(0.2));
  CHECK(rng == before);
}

TEST_CASE("contour_h: shifting h by a constant changes nothing") {
  const auto gen = PredictiveRandomSet::generalized(centered, 1);
  const auto shifted = PredictiveRandomSet::generalized([](PointView u) { return centered(u) + 7.25; }, 1);
  for (double u : {0.1, 0.4, 0.66}) {
    Rng a = derive_stream(3, 1), b = derive_stream(3, 1);
    CHECK(contour_h(PointView(&u, 1), gen, uniform_sampler(1), 5000, a) ==
          contour_h(PointView(&u, 1), shifted, uniform_sampler(1), 5000, b));
  }
}

TEST_CASE("property: realizations are nested") {
  const PredictiveRandomSet sets[] = {PredictiveRandomSet::default_1d(), PredictiveRandomSet::box(2),
                                      PredictiveRandomSet::box(5),
                                      PredictiveRandomSet::generalized(box_h, 2)};
  for (const auto& prs : sets) {
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<double> u(prs.dim());
      for (auto& v : u) v = oracle::unif();
      double m1 = oracle::unif(0.0, 0.5), m2 = oracle::unif(0.0, 0.5);
      if (m1 > m2) std::swap(m1, m2);
      if (prs.realization_contains(u, m1)) CHECK(prs.realization_contains(u, m2));
    }
  }
}

TEST_CASE("property: contour range, maximum at the centre") {
  const PredictiveRandomSet sets[] = {PredictiveRandomSet::default_1d(), PredictiveRandomSet::box(2),
                                      PredictiveRandomSet::box(4)};
  for (const auto& prs : sets) {
    const std::vector<double> centre(prs.dim(), 0.5);
    CHECK(prs.contour(centre) == 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<double> u(prs.dim());
      for (auto& v : u) v = oracle::unif();
      const double f = prs.contour(u);
      CHECK((f >= 0.0 && f <= 1.0));
    }
  }
}

TEST_CASE("plausibility_point: gamma model") {
  const auto assoc = powerlaw_model(5).association();
  const auto prs = PredictiveRandomSet::default_1d();
  const double t = 2.0;
  const double median = gamma_quantile(0.5, 4, 1);
  CHECK(plausibility_point(assoc, prs, t, median / t) == doctest::Approx(1.0).epsilon(1e-12));
  // n = 2: T ~ Exp(rate theta), pl = 1 - |1 - 2 e^{-theta t}|.
  const auto assoc2 = powerlaw_model(2).association();
  for (double theta : {0.05, 0.4, 0.69, 1.3, 4.0}) {
    for (double tt : {0.3, 1.0, 2.2}) {
      const double ref = 1.0 - std::fabs(1.0 - 2.0 * std::exp(-theta * tt));
      CHECK(plausibility_point(assoc2, prs, tt, theta) == doctest::Approx(ref).epsilon(1e-13).scale(1));
    }
  }
}

TEST_CASE("plausibility_point: lognormal pinch at both medians") {
  const std::size_t n = 12;
  const auto assoc = lognormal_association(n);
  const auto prs = PredictiveRandomSet::box(2);
  const double mu = 0.7, sigma2 = 1.9;
  const std::vector<double> t = {mu, sigma2 * chisq_quantile(0.5, n - 1)};
  const std::vector<double> theta = {mu, sigma2};
  CHECK(plausibility_point(assoc, prs, t, theta) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("plausibility_point: undefined inverse raises ModelError") {
  const auto assoc = powerlaw_model(4).association();
  CHECK_THROWS_AS(plausibility_point(assoc, PredictiveRandomSet::default_1d(), 1.0, -2.0), ModelError);
}

TEST_CASE("plausibility identity: contour equals simulated set membership") {
  // pl_t(theta) = P_S{Theta_t(S) contains theta}; for a nested set this is the
  // event u(t, theta) in S, simulated by drawing S's index m = h(U).
  const auto model = powerlaw_model(6);
  const auto assoc = model.association();
  const PredictiveRandomSet sets[] = {PredictiveRandomSet::default_1d(),
                                      PredictiveRandomSet::default_1d().shrunken(2.0)};
  const int N = 200000;
  for (const auto& prs : sets) {
    for (double theta : {0.3, 1.0, 2.5}) {
      const double t = 3.1;
      const double u = model.cdf(t, theta);
      Rng rng = derive_stream(4, static_cast<std::uint64_t>(theta * 10));
      int hits = 0;
      if (!prs.is_shrunken()) {
        for (int i = 0; i < N; ++i) {
          const double U = rng.uniform();
          hits += prs.realization_contains(PointView(&u, 1), prs.h(PointView(&U, 1)));
        }
      } else {
        // f^2: the point must be caught by two independent draws of the set.
        for (int i = 0; i < N; ++i) {
          const double U1 = rng.uniform(), U2 = rng.uniform();
          hits += prs.realization_contains(PointView(&u, 1), prs.h(PointView(&U1, 1))) &&
                  prs.realization_contains(PointView(&u, 1), prs.h(PointView(&U2, 1)));
        }
      }
      CHECK(oracle::within_3sigma(static_cast<double>(hits) / N, plausibility_point(assoc, prs, t, theta), N));
    }
  }
}

TEST_CASE("plausibility_set: sup over assertions") {
  const std::size_t n = 8;
  const double t = 4.0;
  auto pl = [&](double th) { return powerlaw_pl(t, th, n); };
  const double mode = gamma_quantile(0.5, n - 1, 1) / t;
  auto curve = tabulate_curve(pl, 0.01, 6.0, 2001, {"powerlaw", t, n, 0.05, 0, 0});
  const double curve_max = *std::max_element(curve.pl.begin(), curve.pl.end());
  CHECK(plausibility_set(curve, 0.01, 6.0) == curve_max);
  CHECK(plausibility_set(pl, 0.01, 6.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(plausibility_set(pl, 0.01, 6.0, mode) == doctest::Approx(1.0).epsilon(1e-12));
  for (double th : {0.2, 1.1, 3.0}) {
    CHECK(plausibility_set(pl, th, th) == pl(th));
    CHECK(plausibility_set(pl, th, th, mode) == pl(th));
  }
  for (int trial = 0; trial < 200; ++trial) {
    double a = oracle::unif(0.05, 5.0), b = oracle::unif(0.05, 5.0);
    if (a > b) std::swap(a, b);
    const double c = oracle::unif(0.01, a), d = oracle::unif(b, 6.0);
    CHECK(plausibility_set(pl, a, b, mode) <= plausibility_set(pl, c, d, mode));
    CHECK(plausibility_set(curve, a, b) <= plausibility_set(curve, c, d));
    // Grid search never exceeds the exact sup.
    CHECK(plausibility_set(pl, a, b) <= plausibility_set(pl, a, b, mode) + 1e-12);
  }
  CHECK_THROWS_AS(plausibility_set(pl, 2.0, 1.0), DomainError);
}

TEST_CASE("plausibility_set: 2-D point sets") {
  const std::array<double, 2> pts[] = {{0.0, 1.0}, {0.5, 1.0}, {3.0, 2.0}};
  auto pl = [](double a, double b) { return std::exp(-a * a - (b - 1) * (b - 1)); };
  CHECK(plausibility_set(pl, std::span(pts)) == 1.0);
  CHECK(plausibility_set(pl, std::span(pts).subspan(1)) == pl(0.5, 1.0));
  CHECK_THROWS_AS(plausibility_set(pl, std::span(pts).subspan(3)), DomainError);
}

TEST_CASE("curve CSV round trip") {
  auto pl = [](double th) { return powerlaw_pl(1.7, th, 4); };
  const auto curve = tabulate_curve(pl, 0.1, 5.0, 50, {"powerlaw", 1.7, 4, 0.1, 77, 0});
  std::stringstream ss;
  write_curve_csv(ss, curve);
  const std::string text = ss.str();
  CHECK(text.find("# model=powerlaw\n") == 0);
  CHECK(text.find("theta,pl\n") != std::string::npos);
  const auto back = read_curve_csv(ss);
  CHECK(back.theta == curve.theta);
  CHECK(back.pl == curve.pl);
  CHECK(back.meta.model == "powerlaw");
  CHECK(back.meta.n == 4);
  CHECK(back.meta.seed == 77);
  CHECK(back.meta.t == 1.7);
  CHECK(back.at(curve.theta[10]) == curve.pl[10]);
  const double mid = 0.5 * (curve.theta[3] + curve.theta[4]);
  CHECK(back.at(mid) == doctest::Approx(0.5 * (curve.pl[3] + curve.pl[4])));
  CHECK_THROWS_AS(back.at(100.0), DomainError);
}

TEST_CASE("kolmogorov_uniform: brute-force supremum") {
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(25);
    for (auto& x : v) x = std::pow(oracle::unif(), trial % 3 + 1.0);
    const auto s = kolmogorov_uniform(v);
    // Evaluate F_n(x) - x just before and at each jump and on a fine grid.
    double plus = 0.0, two = 0.0;
    auto Fn = [&](double x, bool left) {
      return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double y) {
               return left ? y < x : y <= x;
             })) / v.size();
    };
    for (double x : v) {
      plus = std::max({plus, Fn(x, false) - x});
      two = std::max({two, std::fabs(Fn(x, false) - x), std::fabs(Fn(x, true) - x)});
    }
    for (int i = 0; i <= 10000; ++i) {
      const double x = i / 10000.0;
      plus = std::max(plus, Fn(x, false) - x);
      two = std::max(two, std::fabs(Fn(x, false) - x));
    }
    CHECK(s.ks_plus == doctest::Approx(plus).epsilon(1e-12));
    CHECK(s.ks_two == doctest::Approx(two).epsilon(1e-12));
  }
}

TEST_CASE("validity_diagnostic: shipped sets pass, shrunken set fails") {
  for (std::uint64_t seed : {1, 2, 3}) {
    Rng rng = derive_stream(seed, 0);
    const auto r = validity_diagnostic(PredictiveRandomSet::default_1d(), uniform_sampler(1), 100000, rng);
    CHECK(r.pass);
    CHECK(r.exact_pass);
    CHECK(r.critical == doctest::Approx(1.63 / std::sqrt(1e5)));
  }
  Rng rng = derive_stream(9, 0);
  const auto box = validity_diagnostic(PredictiveRandomSet::box(2), uniform_sampler(2), 100000, rng);
  CHECK(box.pass);
  CHECK(box.exact_pass);
  const auto shrunk =
      validity_diagnostic(PredictiveRandomSet::default_1d().shrunken(), uniform_sampler(1), 100000, rng);
  CHECK_FALSE(shrunk.pass);
  // Exact ks_plus of (1 - |2U - 1|)^2: sup_x sqrt(x) - x = 1/4.
  CHECK(shrunk.stats.ks_plus == doctest::Approx(0.25).epsilon(0.02));
  CHECK_THROWS_AS(validity_diagnostic(PredictiveRandomSet::default_1d(), uniform_sampler(1), 999, rng),
                  DomainError);
}

TEST_CASE("fixed_s_region: gamma model equals the closed-form interval") {
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(oracle::unif(0, 40));
    const double t = oracle::unif(0.1, 30.0);
    const double alpha = oracle::unif(0.01, 0.5);
    const auto fs = fixed_s_region(powerlaw_model(n), t, alpha);
    const auto cf = powerlaw_interval(t, n, alpha);
    CHECK_FALSE(fs.open);
    CHECK(fs.lo == doctest::Approx(cf.lo).epsilon(1e-12));
    CHECK(fs.hi == doctest::Approx(cf.hi).epsilon(1e-12));
    // Numeric inversion of pl = alpha agrees with the closed set's interior.
    auto pl = [&](double th) { return th > 0 ? powerlaw_pl(t, th, n) : 0.0; };
    const double mode = gamma_quantile(0.5, n - 1, 1) / t;
    const auto inv = plausibility_interval(pl, alpha, mode, Support::Positive, 1e-13 * mode);
    CHECK(inv.lo == doctest::Approx(fs.lo).epsilon(1e-8));
    CHECK(inv.hi == doctest::Approx(fs.hi).epsilon(1e-8));
  }
}

TEST_CASE("fixed_s_region: alpha near 1 pinches to the median solution") {
  const double t = 3.0;
  const auto fs = fixed_s_region(powerlaw_model(6), t, 1.0 - 1e-9);
  const double centre = gamma_quantile(0.5, 5, 1) / t;
  CHECK(fs.lo <= centre);
  CHECK(fs.hi >= centre);
  CHECK(fs.width() < 1e-8);
  CHECK_THROWS_AS(fixed_s_region(powerlaw_model(6), t, 1.0), DomainError);
}

TEST_CASE("fixed_s_region: decreasing CDF in theta (pivot model)") {
  auto table = std::make_shared<PivotTable>();
  for (int i = 1; i <= 1000; ++i) table->sorted_draws.push_back((i - 500.5) / 1000.0);
  const auto fs = fixed_s_region(expreg_model(table), 0.3, 0.1);
  const auto iv = expreg_interval(0.3, 0.1, *table);
  // Closed inequalities on a step CDF admit one extra order statistic per side.
  CHECK(fs.lo == doctest::Approx(0.3 - table->order_stat(951)).epsilon(1e-12));
  CHECK(fs.hi == doctest::Approx(0.3 - table->order_stat(50)).epsilon(1e-12));
  CHECK(iv.lo == 0.3 - table->order_stat(950));
  CHECK(iv.hi == 0.3 - table->order_stat(51));
}
