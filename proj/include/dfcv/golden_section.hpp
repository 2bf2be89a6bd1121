#pragma once

#include <cmath>
#include <string>

#include "dfcv/errors.hpp"

namespace dfcv {

struct ScalarMinimum {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
};

/// Golden-section search for the minimum of f on [lo, hi], shrinking the
/// bracket to `width`. The endpoints are compared with the interior result at
/// the end, so monotone functions return the minimizing endpoint exactly.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double width = 1e-10) {
  if (!(lo < hi)) throw ValidationError("golden section needs lo < hi, got [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  while (b - a > width) {
    if (fc < fd) {
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
    ++evals;
  }
  ScalarMinimum best = fc < fd ? ScalarMinimum{c, fc, 0} : ScalarMinimum{d, fd, 0};
  const double flo = f(lo), fhi = f(hi);
  evals += 2;
  if (flo < best.f) best = {lo, flo, 0};
  if (fhi < best.f) best = {hi, fhi, 0};
  best.evaluations = evals;
  return best;
}

}  // namespace dfcv
