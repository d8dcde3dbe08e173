#pragma once

#include <cmath>
#include <utility>

namespace dmt {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Returns the best evaluated point, including both end points.
template <typename Fn>
ScalarOptimum golden_section_max(Fn&& fn, double lo, double hi, int iters) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarOptimum best{lo, fn(lo)};
  auto consider = [&best](double x, double v) {
    if (v > best.value || (v == best.value && x < best.x)) best = {x, v};
  };
  consider(hi, fn(hi));

  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  consider(c, fc);
  consider(d, fd);
  for (int i = 0; i < iters; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
      consider(d, fd);
    }
  }
  return best;
}

/// Minimum counterpart of golden_section_max.
template <typename Fn>
ScalarOptimum golden_section_min(Fn&& fn, double lo, double hi, int iters) {
  ScalarOptimum r = golden_section_max([&fn](double x) { return -fn(x); }, lo, hi, iters);
  r.value = -r.value;
  return r;
}

}  // namespace dmt
