#pragma once

// Predictive random sets, associations and the plausibility identity
// pl_t(theta) = f_S(u(t, theta)).

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plausets/interval.hpp"
#include "plausets/numerics.hpp"
#include "plausets/rng.hpp"

namespace plausets {

using Point = std::vector<double>;
using PointView = std::span<const double>;

using AuxSampler = std::function<Point(Rng&)>;
using PointFunction = std::function<double(PointView)>;

/// Independent Unif(0,1) coordinates.
AuxSampler uniform_sampler(std::size_t dim);

/// 1 - |2u - 1|.
Probability contour_default(Probability u);
/// 1 - max(|2u1 - 1|, |2u2 - 1|)^2.
Probability contour_box(Probability u1, Probability u2);
/// Box contour in d dimensions: 1 - (max_i |2u_i - 1|)^d.
Probability contour_box(PointView u);

/// A nested (consonant) random set on the auxiliary space, represented by its
/// contour function. Realizations are the sublevel sets S(m) = {u : h(u) <= m}
/// with m = h(U), U ~ P_U, so the family is totally ordered by m.
class PredictiveRandomSet {
 public:
  enum class Kind { Default1D, GeneralizedH, Box };

  /// S = {u : |u - 1/2| <= |U - 1/2|}, U ~ Unif(0,1).
  static PredictiveRandomSet default_1d();
  /// S = {u : max_i |u_i - 1/2| <= max_i |U_i - 1/2|}, U ~ Unif(0,1)^dim.
  static PredictiveRandomSet box(std::size_t dim = 2);
  /// S = {u : h(u) <= h(U)}. h must be continuous and constant only on null
  /// sets (not checked). Without `closed_form`, contours need Monte Carlo.
  static PredictiveRandomSet generalized(PointFunction h, std::size_t dim,
                                         PointFunction closed_form = {});

  /// Negative control: contour f^power. For power > 1 this set is NOT valid,
  /// f(U) is stochastically smaller than uniform.
  PredictiveRandomSet shrunken(double power = 2.0) const;

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  bool has_closed_form() const noexcept { return static_cast<bool>(closed_form_); }
  bool is_shrunken() const noexcept { return power_ != 1.0; }
  double power() const noexcept { return power_; }
  std::string name() const;

  /// Nesting index h(u).
  double h(PointView u) const;
  /// Membership of u in the realization S(m).
  bool realization_contains(PointView u, double m) const { return h(u) <= m; }

  /// Closed-form contour f_S(u). Throws DomainError if the set has none or u
  /// leaves the unit cube.
  Probability contour(PointView u) const;
  Probability contour(double u) const { return contour(PointView(&u, 1)); }

 private:
  PredictiveRandomSet(Kind kind, std::size_t dim, PointFunction h, PointFunction closed_form)
      : kind_(kind), dim_(dim), h_(std::move(h)), closed_form_(std::move(closed_form)) {}

  Kind kind_;
  std::size_t dim_;
  PointFunction h_;
  PointFunction closed_form_;
  double power_ = 1.0;
};

/// f_S(u) = P_U{h(u) <= h(U)}. Exact when the set has a closed form, otherwise
/// a B-draw Monte Carlo estimate (standard error <= 1/(2 sqrt(B))).
Probability contour_h(PointView u, const PredictiveRandomSet& prs, const AuxSampler& sampler,
                      int B, Rng& rng);

/// Auxiliary-variable representation T = forward(U, theta), U ~ P_U, with the
/// unique solution U = inverse(T, theta).
struct Association {
  std::string model;
  std::size_t theta_dim = 1;
  std::size_t aux_dim = 1;
  AuxSampler sample_aux;
  std::function<Point(PointView u, PointView theta)> forward;
  std::function<Point(PointView t, PointView theta)> inverse;
};

enum class Support { Real, Positive };

/// T = F_theta^{-1}(U) for a scalar statistic with continuous, monotone-in-theta
/// distribution function F_theta.
struct ScalarCdfModel {
  std::string model;
  std::function<double(double t, double theta)> cdf;
  std::function<double(double u, double theta)> quantile;
  Support support = Support::Real;
  bool cdf_increasing_in_theta = true;

  Association association() const;
};

/// pl_t(theta) = f_S(inverse(t, theta)). Throws ModelError where the inverse is
/// undefined.
Probability plausibility_point(const Association& assoc, const PredictiveRandomSet& prs,
                               PointView t, PointView theta);
Probability plausibility_point(const Association& assoc, const PredictiveRandomSet& prs,
                               double t, double theta);
/// Monte Carlo variant for generalized sets without a closed form.
Probability plausibility_point(const Association& assoc, const PredictiveRandomSet& prs,
                               PointView t, PointView theta, int B, Rng& rng);

struct CurveMeta {
  std::string model;
  double t = 0.0;
  std::size_t n = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::size_t mc_size = 0;
};

/// Tabulated pl_t(theta) on a strictly increasing grid, plus the closure that
/// generated it (empty after deserialization).
struct PlausibilityCurve {
  std::vector<double> theta;
  std::vector<double> pl;
  CurveMeta meta;
  std::function<double(double)> fn;

  /// Linear interpolation; throws DomainError outside the tabulated range.
  double at(double x) const;
};

PlausibilityCurve tabulate_curve(std::function<double(double)> fn, double lo, double hi,
                                 std::size_t steps, CurveMeta meta);

/// `#`-prefixed metadata lines, then `theta,pl` rows at 17 significant digits.
void write_curve_csv(std::ostream& os, const PlausibilityCurve& curve);
PlausibilityCurve read_curve_csv(std::istream& is);

/// Consonant plausibility of an interval assertion A = [lo, hi]: sup over A of
/// pl. With a known mode of a unimodal pl this is pl at the point of A nearest
/// the mode; otherwise a grid search refined by golden section.
Probability plausibility_set(const std::function<double(double)>& pl, double lo, double hi,
                             std::optional<double> mode = std::nullopt);
/// Sup over the tabulated points inside [lo, hi] (endpoints interpolated).
Probability plausibility_set(const PlausibilityCurve& curve, double lo, double hi);
/// Sup over a finite set of 2-D parameter points.
Probability plausibility_set(const std::function<double(double, double)>& pl,
                             std::span<const std::array<double, 2>> points);

struct KolmogorovStats {
  std::size_t n = 0;
  double ks_plus = 0.0;  // sup_x (F_n(x) - x)
  double ks_two = 0.0;   // sup_x |F_n(x) - x|
};

/// One- and two-sided Kolmogorov statistics of `values` against Unif(0,1).
KolmogorovStats kolmogorov_uniform(std::vector<double> values);

/// 1% Kolmogorov band constant used for every pass/fail decision.
inline constexpr double kKolmogorovBand = 1.63;

struct ValidityReport {
  KolmogorovStats stats;
  double critical = 0.0;    // kKolmogorovBand / sqrt(N)
  bool pass = false;        // ks_plus <= critical: f_S(U) not stochastically smaller
  bool exact_pass = false;  // ks_two <= critical: f_S(U) consistent with Unif(0,1)
};

/// Draws U_1..U_N ~ P_U and tests f_S(U) for stochastic dominance over
/// Unif(0,1). Requires N >= 1000.
ValidityReport validity_diagnostic(const PointFunction& contour, const AuxSampler& sampler,
                                   std::size_t N, Rng& rng);
ValidityReport validity_diagnostic(const PredictiveRandomSet& prs, const AuxSampler& sampler,
                                   std::size_t N, Rng& rng);

/// Theta_t(S) for the central support set S = [alpha/2, 1 - alpha/2] of the
/// default set: the closed interval {theta : alpha/2 <= F_theta(t) <= 1 - alpha/2}.
Interval1D fixed_s_region(const ScalarCdfModel& model, double t, double alpha);

}  // namespace plausets
