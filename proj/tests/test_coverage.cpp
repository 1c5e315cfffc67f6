#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "plausets/coverage.hpp"
#include "plausets/errors.hpp"

using namespace plausets;

namespace {

CoverageSpec spec_for(ModelId model, std::size_t n, double alpha, std::size_t reps, std::uint64_t seed) {
  CoverageSpec s;
  s.truth.model = model;
  s.truth.n = n;
  s.alpha = alpha;
  s.reps = reps;
  s.master_seed = seed;
  return s;
}

std::string csv(const std::vector<CoverageReport>& reports) {
  std::ostringstream os;
  write_coverage_csv(os, reports);
  return os.str();
}

}  // namespace

TEST_CASE("coverage: whole-space region always covers") {
  for (ModelId m : {ModelId::PowerLaw, ModelId::Lognormal, ModelId::LocScale}) {
    auto s = spec_for(m, 6, 0.1, 200, 1);
    s.method = Method::Whole;
    const auto r = run_coverage(s);
    CHECK(r.estimate == 1.0);
    CHECK(r.stderr_ == 0.0);
    CHECK(r.hits == 200);
  }
}

TEST_CASE("coverage: exact methods hit 1 - alpha within 3 standard errors") {
  struct Case {
    ModelId model;
    std::size_t n;
    double alpha;
    BaseCdf base = BaseCdf::Normal;
  };
  const Case cases[] = {{ModelId::PowerLaw, 5, 0.1},
                        {ModelId::PowerLaw, 20, 0.05},
                        {ModelId::Lognormal, 10, 0.2},
                        {ModelId::LocScale, 4, 0.1, BaseCdf::Logistic},
                        {ModelId::LocScale, 8, 0.3}};
  for (const auto& c : cases) {
    auto s = spec_for(c.model, c.n, c.alpha, 20000, 99);
    s.truth.theta = 1.7;
    s.truth.mu = -0.4;
    s.truth.sigma2 = 2.5;
    s.truth.base = c.base;
    s.workers = 4;
    const auto r = run_coverage(s);
    CHECK(std::fabs(r.estimate - (1 - c.alpha)) <= 3 * r.stderr_);
    CHECK(r.stderr_ == doctest::Approx(std::sqrt(r.estimate * (1 - r.estimate) / 20000)));
  }
}

TEST_CASE("coverage: fixed_s agrees with plausibility") {
  auto s = spec_for(ModelId::PowerLaw, 7, 0.1, 5000, 5);
  const Method methods[] = {Method::Plausibility, Method::FixedS};
  const auto r = run_coverage(s, methods);
  CHECK(std::fabs(r[0].estimate - r[1].estimate) <= 2 * r[0].stderr_);

  auto e = spec_for(ModelId::ExpReg, 6, 0.1, 200, 5);
  e.mc_size = 1000;
  const auto re = run_coverage(e, methods);
  CHECK(std::fabs(re[0].estimate - re[1].estimate) <= 2 * std::max(re[0].stderr_, 0.01));
}

TEST_CASE("coverage: reports independent of worker count") {
  auto s = spec_for(ModelId::ExpReg, 5, 0.1, 120, 8);
  s.mc_size = 1000;
  const Method methods[] = {Method::Plausibility, Method::Wald, Method::FixedS};
  s.workers = 1;
  const auto one = csv(run_coverage(s, methods));
  s.workers = 6;
  CHECK(csv(run_coverage(s, methods)) == one);

  auto l = spec_for(ModelId::Lognormal, 12, 0.1, 3000, 8);
  const auto lm = methods_for(ModelId::Lognormal);
  l.workers = 1;
  const auto lone = csv(run_coverage(l, lm));
  l.workers = 3;
  CHECK(csv(run_coverage(l, lm)) == lone);
}

TEST_CASE("coverage: spec validation") {
  auto s = spec_for(ModelId::PowerLaw, 5, 0.1, 99, 0);
  CHECK_THROWS_AS(run_coverage(s), DomainError);
  s.reps = 100;
  s.alpha = 1.0;
  CHECK_THROWS_AS(run_coverage(s), DomainError);
  s.alpha = 0.1;
  s.method = Method::Wald;
  CHECK_THROWS_AS(run_coverage(s), DomainError);
  s.method = Method::Plausibility;
  s.truth.theta = -1.0;
  CHECK_THROWS_AS(run_coverage(s), DomainError);
  auto e = spec_for(ModelId::ExpReg, 5, 0.1, 100, 0);
  e.truth.x = {1, -1, 2, 3, 4};
  CHECK_THROWS_AS(run_coverage(e), DomainError);
  e.truth.x.clear();
  e.mc_size = 10;
  CHECK_THROWS_AS(run_coverage(e), DomainError);
}

TEST_CASE("coverage: CSV and table formats") {
  auto s = spec_for(ModelId::Lognormal, 10, 0.1, 100, 42);
  const auto r = run_coverage(s, methods_for(ModelId::Lognormal));
  const std::string text = csv(r);
  CHECK(text.rfind("method,alpha,reps,estimate,stderr,seed\nplausibility,0.1,100,", 0) == 0);
  CHECK(text.find("\nmle_ellipse,0.1,100,") != std::string::npos);
  CHECK(text.find("\nnaive_rect,0.1,100,") != std::string::npos);
  std::ostringstream table;
  print_coverage_table(table, r);
  CHECK(table.str().find("lognormal") != std::string::npos);
  CHECK(parse_method("fixed_s") == Method::FixedS);
  CHECK(parse_model("locscale") == ModelId::LocScale);
  CHECK_THROWS_AS(parse_model("weibull"), DomainError);
}

TEST_CASE("uniformity: power-law exactness and shrunken failure") {
  UniformitySpec u;
  u.truth.model = ModelId::PowerLaw;
  u.truth.n = 5;
  u.truth.theta = 2.0;
  u.reps = 20000;
  u.seed = 3;
  u.workers = 4;
  const auto r = uniformity_check(u);
  CHECK(r.valid_pass);
  CHECK(r.exact_pass);
  u.shrunken = true;
  const auto bad = uniformity_check(u);
  CHECK_FALSE(bad.valid_pass);
}

TEST_CASE("uniformity: deterministic under fixed seed, expreg rejected") {
  UniformitySpec u;
  u.truth.model = ModelId::Lognormal;
  u.truth.n = 6;
  u.reps = 2000;
  u.seed = 11;
  const auto a = uniformity_check(u);
  u.workers = 5;
  const auto b = uniformity_check(u);
  CHECK(a.stats.ks_plus == b.stats.ks_plus);
  CHECK(a.stats.ks_two == b.stats.ks_two);
  u.truth.model = ModelId::ExpReg;
  CHECK_THROWS_AS(uniformity_check(u), DomainError);
}
