#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "plausets/errors.hpp"
#include "plausets/im_core.hpp"

namespace plausets::detail {

// Step a trial point away from `from` by 2^k: multiplicatively on (0, inf),
// additively on the real line.
inline double expand(double from, int k, bool upward, Support support) {
  const double f = std::ldexp(1.0, k);
  if (support == Support::Positive) return upward ? from * f : from / f;
  return upward ? from + f : from - f;
}

// Locates the switch point of a monotone predicate (false below, true above)
// to relative width `rtol`. Returns (last false, first true).
template <class Pred>
std::pair<double, double> locate_switch(Pred&& pred, double start, Support support,
                                        double rtol = 1e-15, int max_doublings = 1100) {
  double lo, hi;
  if (pred(start)) {
    hi = start;
    int k = 0;
    for (lo = expand(start, k, false, support); pred(lo); lo = expand(start, ++k, false, support)) {
      hi = lo;
      if (k > max_doublings || lo == 0.0 || !std::isfinite(lo)) {
        throw ConvergenceError("locate_switch: no lower bracket found");
      }
    }
  } else {
    lo = start;
    int k = 0;
    for (hi = expand(start, k, true, support); !pred(hi); hi = expand(start, ++k, true, support)) {
      lo = hi;
      if (k > max_doublings || !std::isfinite(hi)) {
        throw ConvergenceError("locate_switch: no upper bracket found");
      }
    }
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= rtol * std::fmax(std::fabs(lo), std::fabs(hi))) break;
    if (pred(mid)) hi = mid; else lo = mid;
  }
  return {lo, hi};
}

}  // namespace plausets::detail
