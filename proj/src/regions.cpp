#include "plausets/regions.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "plausets/detail/parallel.hpp"
#include "plausets/errors.hpp"

namespace plausets {
namespace {

// Bisect [a, b] where inside(a) != inside(b) down to width tol.
template <class Pred>
double bisect_flank(Pred&& inside, double a, double b, double tol) {
  const bool in_a = inside(a);
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (a + b);
    if (std::fabs(b - a) <= tol || mid == a || mid == b) break;
    if (inside(mid) == in_a) a = mid; else b = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace

Interval1D invert_unimodal(const ScalarPl& pl, double alpha, std::pair<double, double> bracket,
                           double tol, std::optional<double> mode) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("invert_unimodal: alpha must lie in (0, 1)");
  auto [lo, hi] = bracket;
  if (!(lo < hi)) throw DomainError("invert_unimodal: bracket must satisfy lo < hi");
  if (!(tol > 0.0)) throw DomainError("invert_unimodal: tol must be positive");
  if (pl(lo) > alpha || pl(hi) > alpha) {
    throw BracketError(fmt::format("invert_unimodal: bracket ({}, {}) endpoints not below alpha; widen it",
                                   lo, hi));
  }

  double peak;
  if (mode && *mode > lo && *mode < hi) {
    peak = *mode;
  } else {
    constexpr int kScan = 2000;
    peak = lo;
    double best = -1.0;
    for (int i = 1; i < kScan; ++i) {
      const double x = lo + (hi - lo) * i / kScan;
      const double v = pl(x);
      if (v > best) {
        best = v;
        peak = x;
      }
    }
  }
  if (!(pl(peak) > alpha)) {
    throw EmptyRegionError(fmt::format("invert_unimodal: max plausibility {} does not exceed alpha {}",
                                       pl(peak), alpha));
  }
  auto inside = [&](double x) { return pl(x) > alpha; };
  return {bisect_flank(inside, lo, peak, tol), bisect_flank(inside, peak, hi, tol), alpha, true};
}

std::pair<double, double> auto_bracket(const ScalarPl& pl, double mode, double alpha,
                                       Support support) {
  const double target = 0.1 * alpha;
  if (support == Support::Positive && !(mode > 0.0)) {
    throw DomainError("auto_bracket: mode must be positive on a positive support");
  }
  const double scale = std::ldexp(std::max(1.0, std::fabs(mode)), -10);
  auto step = [&](int k, bool up) {
    if (support == Support::Positive) return up ? std::ldexp(mode, k) : std::ldexp(mode, -k);
    return up ? mode + std::ldexp(scale, k) : mode - std::ldexp(scale, k);
  };
  double lo = mode, hi = mode;
  for (int k = 1; pl(lo) >= target; ++k) {
    lo = step(k, false);
    if (k > 1100 || !std::isfinite(lo)) throw ConvergenceError("auto_bracket: lower flank never drops below alpha/10");
  }
  for (int k = 1; pl(hi) >= target; ++k) {
    hi = step(k, true);
    if (k > 1100 || !std::isfinite(hi)) throw ConvergenceError("auto_bracket: upper flank never drops below alpha/10");
  }
  return {lo, hi};
}

Interval1D plausibility_interval(const ScalarPl& pl, double alpha, double mode, Support support,
                                 double tol) {
  return invert_unimodal(pl, alpha, auto_bracket(pl, mode, alpha, support), tol, mode);
}

std::size_t GridRegion2D::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

bool GridRegion2D::touches_edge() const {
  for (std::size_t i = 0; i < nx; ++i) {
    if (inside(i, 0) || inside(i, ny - 1)) return true;
  }
  for (std::size_t j = 0; j < ny; ++j) {
    if (inside(0, j) || inside(nx - 1, j)) return true;
  }
  return false;
}

std::vector<std::size_t> find_boundary_cells(const std::vector<std::uint8_t>& mask,
                                             std::size_t nx, std::size_t ny) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = j * nx + i;
      const bool differs = (i > 0 && mask[k - 1] != mask[k]) || (i + 1 < nx && mask[k + 1] != mask[k]) ||
                           (j > 0 && mask[k - nx] != mask[k]) || (j + 1 < ny && mask[k + nx] != mask[k]);
      if (differs) out.push_back(k);
    }
  }
  return out;
}

GridRegion2D extract_grid_region(const Pl2D& pl, double alpha, const GridBounds& bounds,
                                 std::size_t nx, std::size_t ny, unsigned workers,
                                 bool check_bounds) {
  if (nx < 32 || ny < 32) throw DomainError("extract_grid_region: resolution must be at least 32 per axis");
  if (!(bounds.x_min < bounds.x_max) || !(bounds.y_min < bounds.y_max)) {
    throw DomainError("extract_grid_region: empty bounds");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("extract_grid_region: alpha must lie in (0, 1)");
  GridRegion2D r;
  r.bounds = bounds;
  r.nx = nx;
  r.ny = ny;
  r.alpha = alpha;
  r.mask.assign(nx * ny, 0);
  r.values.assign(nx * ny, 0.0);
  detail::parallel_for(ny, workers, [&](std::size_t j) {
    const double y = r.y_at(j);
    for (std::size_t i = 0; i < nx; ++i) {
      const double v = pl(r.x_at(i), y);
      r.values[j * nx + i] = v;
      r.mask[j * nx + i] = v > alpha ? 1 : 0;
    }
  });
  r.boundary_cells = find_boundary_cells(r.mask, nx, ny);
  if (check_bounds && r.touches_edge()) {
    throw BoundsError(fmt::format(
        "extract_grid_region: level set clipped by bounds [{}, {}] x [{}, {}]; expand the grid",
        bounds.x_min, bounds.x_max, bounds.y_min, bounds.y_max));
  }
  return r;
}

double region_area(const GridRegion2D& region) {
  return static_cast<double>(region.count()) * region.dx() * region.dy();
}

std::size_t count_components(const GridRegion2D& region) {
  std::vector<std::uint8_t> seen(region.mask.size(), 0);
  std::vector<std::size_t> stack;
  std::size_t components = 0;
  const std::size_t nx = region.nx, ny = region.ny;
  for (std::size_t start = 0; start < region.mask.size(); ++start) {
    if (!region.mask[start] || seen[start]) continue;
    ++components;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      const std::size_t i = k % nx, j = k / nx;
      auto visit = [&](std::size_t q) {
        if (region.mask[q] && !seen[q]) {
          seen[q] = 1;
          stack.push_back(q);
        }
      };
      if (i > 0) visit(k - 1);
      if (i + 1 < nx) visit(k + 1);
      if (j > 0) visit(k - nx);
      if (j + 1 < ny) visit(k + nx);
    }
  }
  return components;
}

void write_grid_csv(std::ostream& os, const GridRegion2D& r, const std::string& x_name,
                    const std::string& y_name) {
  fmt::print(os, "{},{},pl,inside\n", x_name, y_name);
  for (std::size_t j = 0; j < r.ny; ++j) {
    for (std::size_t i = 0; i < r.nx; ++i) {
      const std::size_t k = j * r.nx + i;
      fmt::print(os, "{:.10g},{:.10g},{:.10g},{}\n", r.x_at(i), r.y_at(j), r.values[k],
                 static_cast<int>(r.mask[k]));
    }
  }
}

}  // namespace plausets
