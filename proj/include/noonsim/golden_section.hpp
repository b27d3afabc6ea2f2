#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace noonsim {

struct ScalarOptimum {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal `f` on [lo, hi].
/// Stops once the bracket is narrower than `tol` and returns the best point
/// evaluated so far.
template <class F>
ScalarOptimum golden_section_maximize(F&& f, double lo, double hi, double tol,
                                      int max_iterations = 200) {
  if (!(tol > 0.0)) throw std::invalid_argument("golden-section tolerance must be positive");
  if (lo > hi) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iterations && (b - a) > tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? ScalarOptimum{c, fc} : ScalarOptimum{d, fd};
}

}  // namespace noonsim
