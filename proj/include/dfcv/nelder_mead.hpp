#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace dfcv {

struct NelderMeadOptions {
  double initial_step = 0.5;
  // Stop when the spread of simplex values drops below f_tolerance * max(1, |f_best|).
  double f_tolerance = 1e-14;
  int max_evaluations = 20000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool stationary = false;
};

/// Downhill simplex with the standard coefficients (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2).
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& start, const NelderMeadOptions& opts = {}) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> x(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += opts.initial_step;
  std::vector<double> fx(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& p) {
    ++evals;
    return f(p);
  };
  for (std::size_t j = 0; j <= n; ++j) fx[j] = eval(x[j]);

  std::vector<std::size_t> order(n + 1);
  bool stationary = false;
  while (evals < opts.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (fx[worst] - fx[best] <= opts.f_tolerance * std::max(1.0, std::abs(fx[best]))) {
      stationary = true;
      break;
    }

    std::vector<double> c(n, 0.0);
    for (std::size_t j = 0; j <= n; ++j)
      if (j != worst)
        for (std::size_t i = 0; i < n; ++i) c[i] += x[j][i] / static_cast<double>(n);
    auto along = [&](double s) {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = c[i] + s * (x[worst][i] - c[i]);
      return p;
    };

    const std::vector<double> xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fx[best]) {
      const std::vector<double> xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second]) {
      x[worst] = xr;
      fx[worst] = fr;
      continue;
    }
    const bool outside = fr < fx[worst];
    const std::vector<double> xc = along(outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fx[worst])) {
      x[worst] = xc;
      fx[worst] = fc;
      continue;
    }
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == best) continue;
      for (std::size_t i = 0; i < n; ++i) x[j][i] = x[best][i] + 0.5 * (x[j][i] - x[best][i]);
      fx[j] = eval(x[j]);
    }
  }
  const std::size_t best =
      static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {x[best], fx[best], evals, stationary};
}

}  // namespace dfcv
