#pragma once

#include <limits>
#include <ostream>

namespace plausets {

/// A scalar confidence/plausibility interval. `alpha` is the level tag:
/// the interval targets coverage 1 - alpha. Endpoints may be +-infinity.
struct Interval1D {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double alpha = 0.05;
  bool open = true;

  double level() const noexcept { return 1.0 - alpha; }
  double width() const noexcept { return hi - lo; }
  bool contains(double theta) const noexcept {
    return open ? (lo < theta && theta < hi) : (lo <= theta && theta <= hi);
  }
};

/// One-line CSV `lo,hi,alpha` with endpoints at the given number of decimals.
void write_interval_csv(std::ostream& os, const Interval1D& iv, int decimals = 6);

}  // namespace plausets
