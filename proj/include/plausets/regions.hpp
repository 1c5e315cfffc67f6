#pragma once

// Plausibility regions {theta : pl(theta) > alpha}: interval extraction for
// scalar parameters, level-set masks for two-parameter models.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plausets/im_core.hpp"
#include "plausets/interval.hpp"

namespace plausets {

using ScalarPl = std::function<double(double)>;
using Pl2D = std::function<double(double, double)>;

/// Intersects a unimodal pl with the level alpha by bisection on each flank.
/// Requires pl(lo) <= alpha and pl(hi) <= alpha (BracketError otherwise) and
/// max pl > alpha (EmptyRegionError otherwise). Without `mode` the peak is
/// located by a 2001-point scan of the bracket. Each returned endpoint is the
/// midpoint of a final flank bracket no wider than `tol`.
Interval1D invert_unimodal(const ScalarPl& pl, double alpha, std::pair<double, double> bracket,
                           double tol, std::optional<double> mode = std::nullopt);

/// Expands geometrically from the mode until pl < alpha/10 on both flanks.
std::pair<double, double> auto_bracket(const ScalarPl& pl, double mode, double alpha,
                                       Support support);

/// auto_bracket followed by invert_unimodal.
Interval1D plausibility_interval(const ScalarPl& pl, double alpha, double mode, Support support,
                                 double tol);

struct GridBounds {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
};

/// Level set on a cell-centred nx-by-ny grid. Cell (i, j) has centre
/// (x_min + (i + 1/2) dx, y_min + (j + 1/2) dy) and row-major index j * nx + i.
struct GridRegion2D {
  GridBounds bounds;
  std::size_t nx = 0, ny = 0;
  double alpha = 0.1;
  std::vector<std::uint8_t> mask;      // pl > alpha
  std::vector<double> values;          // pl at cell centres
  std::vector<std::size_t> boundary_cells;

  double dx() const { return (bounds.x_max - bounds.x_min) / static_cast<double>(nx); }
  double dy() const { return (bounds.y_max - bounds.y_min) / static_cast<double>(ny); }
  double x_at(std::size_t i) const { return bounds.x_min + (static_cast<double>(i) + 0.5) * dx(); }
  double y_at(std::size_t j) const { return bounds.y_min + (static_cast<double>(j) + 0.5) * dy(); }
  bool inside(std::size_t i, std::size_t j) const { return mask[j * nx + i] != 0; }
  std::size_t count() const;
  /// True when any masked cell lies on the outer ring of the grid.
  bool touches_edge() const;
};

/// Evaluates pl at every cell centre (rows in parallel). Resolution must be at
/// least 32 per axis. With `check_bounds`, a level set touching the grid edge
/// raises BoundsError.
GridRegion2D extract_grid_region(const Pl2D& pl, double alpha, const GridBounds& bounds,
                                 std::size_t nx, std::size_t ny, unsigned workers = 1,
                                 bool check_bounds = true);

/// Recomputes boundary_cells from the mask: cells with a 4-neighbour of the
/// opposite membership, in scan order.
std::vector<std::size_t> find_boundary_cells(const std::vector<std::uint8_t>& mask,
                                             std::size_t nx, std::size_t ny);

/// Number of masked cells times the cell area.
double region_area(const GridRegion2D& region);

/// Four-connected components of the mask; returns the component count.
std::size_t count_components(const GridRegion2D& region);

/// `x_name,y_name,pl,inside` rows in scan order.
void write_grid_csv(std::ostream& os, const GridRegion2D& region, const std::string& x_name = "mu",
                    const std::string& y_name = "sigma2");

}  // namespace plausets
