#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include "dfcv/errors.hpp"

namespace dfcv {

namespace detail {

inline bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }
inline bool is_gamma_pole(double z) { return is_integer(z) && z <= 0.0; }

// Sign of Gamma(z) for z off the poles.
inline double gamma_sign(double z) {
  if (z > 0.0) return 1.0;
  return (static_cast<long long>(std::floor(z)) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace detail

/// Falling factorial power x^(y) = Gamma(x+1) / Gamma(x+1-y).
///
/// Integer y uses the finite product form, which also covers the cases where
/// the two gamma poles cancel. Otherwise the ratio is evaluated through
/// log-gamma with explicit sign tracking. Throws PoleError when a gamma
/// argument sits on a pole and no cancellation is available.
inline double falling_factorial(double x, double y) {
  if (y == 0.0) return 1.0;
  if (y == 1.0) return x;
  if (detail::is_integer(y)) {
    const long long n = static_cast<long long>(y);
    if (n > 0) {
      double p = 1.0;
      for (long long i = 0; i < n; ++i) p *= x - static_cast<double>(i);
      return p;
    }
    double denom = 1.0;
    for (long long i = 1; i <= -n; ++i) denom *= x + static_cast<double>(i);
    if (denom == 0.0)
      throw PoleError("falling factorial " + std::to_string(x) + "^(" + std::to_string(y) + ") hits a pole");
    return 1.0 / denom;
  }
  const double num = x + 1.0;
  const double den = x + 1.0 - y;
  if (detail::is_gamma_pole(num) || detail::is_gamma_pole(den))
    throw PoleError("falling factorial " + std::to_string(x) + "^(" + std::to_string(y) +
                    "): gamma argument at a non-positive integer");
  const double sign = detail::gamma_sign(num) * detail::gamma_sign(den);
  return sign * std::exp(std::lgamma(num) - std::lgamma(den));
}

/// Weights of the rewritten fractional sums.
///
/// weight(m) = (nu / Gamma(nu+1)) * (m + nu)^(nu-1) = Gamma(m+1+nu) / (Gamma(nu) Gamma(m+2))
///           = prod_{i=0}^{m} (nu+i) / (m+1)!
/// for the integer gap m = t - s - 1 >= 0. Built by the recurrence
/// w(0) = nu, w(m) = w(m-1) (nu+m) / (m+1), which is exact at nu = 0 and
/// never overflows. Returns weights for m = 0..count-1.
inline std::vector<double> sum_weights(double nu, int count) {
  std::vector<double> w(static_cast<std::size_t>(count > 0 ? count : 0));
  double c = nu;
  for (int m = 0; m < count; ++m) {
    if (m > 0) c *= (nu + m) / (m + 1.0);
    w[static_cast<std::size_t>(m)] = c;
  }
  return w;
}

/// Difference of two consecutive sum weights in closed product form:
///   nu (nu-1) prod_{i=0}^{n-3} (nu+i+1) / (n Gamma(n)),   n >= 2,
/// which equals sum_weights(nu)[n-1] - sum_weights(nu)[n-2].
/// These are the coefficients of the squared kernel terms in the fractional
/// Legendre condition.
inline double weight_increment(double nu, int n) {
  if (n < 2) throw IndexError("weight_increment needs n >= 2, got " + std::to_string(n));
  double p = nu * (nu - 1.0);
  for (int i = 0; i <= n - 3; ++i) p *= nu + i + 1.0;
  // n Gamma(n) = n!
  for (int i = 2; i <= n; ++i) p /= i;
  return p;
}

/// Accumulator used by the fractional sums. Long double-precision sums
/// (more than 64 terms) switch to Neumaier compensation.
template <class T>
class KernelAccumulator {
 public:
  explicit KernelAccumulator(int terms) : compensated_(terms > 64) {}

  void add(const T& x) {
    if constexpr (std::is_floating_point_v<T>) {
      if (compensated_) {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
          comp_ += (sum_ - t) + x;
        else
          comp_ += (x - t) + sum_;
        sum_ = t;
        return;
      }
    }
    sum_ = sum_ + x;
  }

  T result() const {
    if constexpr (std::is_floating_point_v<T>) return sum_ + comp_;
    else return sum_;
  }

 private:
  bool compensated_;
  T sum_{};
  T comp_{};
};

}  // namespace dfcv
