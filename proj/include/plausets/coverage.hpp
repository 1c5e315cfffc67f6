#pragma once

// Repeated-sampling estimates of coverage probability and of the
// distribution of pl_T(truth).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "plausets/im_core.hpp"
#include "plausets/models.hpp"

namespace plausets {

enum class ModelId { PowerLaw, ExpReg, Lognormal, LocScale };
enum class Method { Plausibility, Wald, MleEllipse, NaiveRect, FixedS, Whole };

std::string to_string(ModelId m);
std::string to_string(Method m);
ModelId parse_model(const std::string& s);
Method parse_method(const std::string& s);
/// Methods defined for a model, in reporting order.
std::vector<Method> methods_for(ModelId m);

/// Sampling model and true parameter.
struct ModelSpec {
  ModelId model = ModelId::PowerLaw;
  std::size_t n = 10;
  double theta = 1.0;   // power-law shape or regression slope
  double psi = 1.0;     // power-law scale
  double mu = 0.0;      // location
  double sigma2 = 1.0;  // lognormal variance; locscale uses sigma = sqrt(sigma2)
  BaseCdf base = BaseCdf::Normal;
  std::vector<double> x;  // regression covariates; empty means x_i = i

  std::vector<double> covariates() const;
  void validate() const;
};

struct CoverageSpec {
  ModelSpec truth;
  Method method = Method::Plausibility;
  double alpha = 0.05;
  std::size_t reps = 1000;
  std::uint64_t master_seed = 0;
  std::size_t mc_size = 10000;
  unsigned workers = 1;
};

struct CoverageReport {
  CoverageSpec spec;
  std::size_t hits = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;  // sqrt(p (1 - p) / reps)
  double wall_seconds = 0.0;
};

/// Replicate r draws its data from derive_stream(seed, r).substream(0) and any
/// per-dataset Monte Carlo (the regression pivot table) from .substream(1), so
/// results do not depend on the number of workers. A failing replicate raises
/// ReplicateError naming the replicate and seed.
CoverageReport run_coverage(const CoverageSpec& spec);
/// Several methods evaluated on the same replicated datasets; spec.method is ignored.
std::vector<CoverageReport> run_coverage(const CoverageSpec& spec, std::span<const Method> methods);

/// `method,alpha,reps,estimate,stderr,seed`.
void write_coverage_csv(std::ostream& os, std::span<const CoverageReport> reports, bool header = true);
void print_coverage_table(std::ostream& os, std::span<const CoverageReport> reports);

struct UniformitySpec {
  ModelSpec truth;
  std::size_t reps = 100000;
  std::uint64_t seed = 0;
  bool shrunken = false;  // use the squared (invalid) contour
  unsigned workers = 1;
};

struct UniformityReport {
  KolmogorovStats stats;
  double critical = 0.0;
  bool valid_pass = false;  // ks_plus within band
  bool exact_pass = false;  // ks_two within band
};

/// Simulates T at the truth and tests pl_T(truth) against Unif(0,1). Defined
/// for the continuous-statistic models (power-law, lognormal, locscale).
UniformityReport uniformity_check(const UniformitySpec& spec);

}  // namespace plausets
