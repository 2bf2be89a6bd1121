#pragma once

// Reference computations used only by the tests. Nothing here calls the
// library's kernels: sums are evaluated from the gamma-function definition in
// long double, derivatives by central differences.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// nu/Gamma(nu+1) (n - 1 + nu)^(nu-1) = Gamma(n + nu) / (Gamma(nu) Gamma(n + 1)), n >= 1.
inline long double kernel(long double nu, int n) {
  return std::exp(std::lgamma(n + nu) - std::lgamma(nu) - std::lgamma(n + 1.0L));
}

inline double left_sum(const std::vector<double>& f, double nu, int t) {
  if (nu == 0.0) return f[static_cast<std::size_t>(t)];
  long double acc = f[static_cast<std::size_t>(t)];
  for (int s = 0; s < t; ++s) acc += kernel(nu, t - s) * f[static_cast<std::size_t>(s)];
  return static_cast<double>(acc);
}

inline double right_sum(const std::vector<double>& f, double nu, int t) {
  if (nu == 0.0) return f[static_cast<std::size_t>(t)];
  const int b = static_cast<int>(f.size()) - 1;
  long double acc = f[static_cast<std::size_t>(t)];
  for (int s = t + 1; s <= b; ++s) acc += kernel(nu, s - t) * f[static_cast<std::size_t>(s)];
  return static_cast<double>(acc);
}

inline double left_diff(const std::vector<double>& f, double alpha, int t) {
  return left_sum(f, 1.0 - alpha, t + 1) - left_sum(f, 1.0 - alpha, t);
}

inline double right_diff(const std::vector<double>& f, double alpha, int t) {
  return -(right_sum(f, 1.0 - alpha, t + 1) - right_sum(f, 1.0 - alpha, t));
}

inline double falling(double x, double y) {
  return static_cast<double>(std::tgamma(static_cast<long double>(x) + 1.0L) /
                             std::tgamma(static_cast<long double>(x) + 1.0L - y));
}

using Field = std::function<double(const std::vector<double>&)>;

inline double step_for(double x, double h) { return h * std::max(1.0, std::abs(x)); }

inline std::vector<double> gradient(const Field& f, std::vector<double> x, double h = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i], hi = step_for(xi, h);
    x[i] = xi + hi;
    const double fp = f(x);
    x[i] = xi - hi;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * hi);
  }
  return g;
}

inline double central_second(const Field& f, const std::vector<double>& x, std::size_t i, std::size_t j, double h) {
  const double hi = step_for(x[i], h), hj = step_for(x[j], h);
  auto at = [&](double si, double sj) {
    std::vector<double> z = x;
    z[i] += si * hi;
    z[j] += sj * hj;
    return f(z);
  };
  if (i == j) return (at(1, 0) - 2.0 * f(x) + at(-1, 0)) / (hi * hi);
  return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
}

/// Central second difference with one Richardson step (error O(h^4)).
inline double second_partial(const Field& f, const std::vector<double>& x, std::size_t i, std::size_t j,
                             double h = 2e-3) {
  return (4.0 * central_second(f, x, i, j, 0.5 * h) - central_second(f, x, i, j, h)) / 3.0;
}

/// Random smooth expressions in t, u, v, w that stay finite on [-1, 1]^4.
class ExpressionGenerator {
 public:
  explicit ExpressionGenerator(unsigned seed) : rng_(seed) {}

  std::string next(int depth = 4) {
    if (depth <= 0 || pick(4) == 0) return leaf();
    switch (pick(9)) {
      case 0: return "(" + next(depth - 1) + " + " + next(depth - 1) + ")";
      case 1: return "(" + next(depth - 1) + " - " + next(depth - 1) + ")";
      case 2: return "(" + next(depth - 1) + " * " + next(depth - 1) + ")";
      case 3: return "(" + next(depth - 1) + " / (2 + " + next(depth - 1) + "^2))";
      case 4: return "(" + next(depth - 1) + ")^" + std::to_string(2 + pick(2));
      case 5: return "sin(" + next(depth - 1) + ")";
      case 6: return "cos(" + next(depth - 1) + ")";
      case 7: return "exp(sin(" + next(depth - 1) + "))";
      default: return pick(2) ? "log(1 + " + next(depth - 1) + "^2)" : "sqrt(3 + cos(" + next(depth - 1) + "))";
    }
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string leaf() {
    static const char* vars[] = {"t", "u", "v", "w", "u", "v", "w"};
    if (pick(4) == 0) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", uniform(-2.0, 2.0));
      return std::string("(") + buf + ")";
    }
    return vars[pick(7)];
  }

  std::mt19937 rng_;
};

}  // namespace oracle
