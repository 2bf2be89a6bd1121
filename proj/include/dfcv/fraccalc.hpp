#pragma once

// Left/right fractional sums and differences on a uniform unit-step grid.
//
// All operators come in two flavours: a span-level form acting on the raw
// samples f[0..n] (used for truncated grids such as {a, ..., b-1}) and a
// GridFunction form. Both are templates over the sample type so that the
// solver can push dual numbers through them; the kernel weights are always
// plain doubles since they depend only on the order.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dfcv/errors.hpp"
#include "dfcv/grid.hpp"
#include "dfcv/special.hpp"

namespace dfcv {

namespace detail {

inline void check_sum_order(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu))
    throw ValidationError("fractional sum order must be finite and >= 0, got " + std::to_string(nu));
}

inline void check_difference_order(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ValidationError("fractional difference order must lie in (0, 1], got " + std::to_string(alpha));
}

inline void check_point(std::size_t n_points, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= n_points)
    throw IndexError("grid index " + std::to_string(i) + " outside [0, " + std::to_string(n_points - 1) + "]");
}

inline void check_kappa_point(std::size_t n_points, int i) {
  if (n_points < 2 || i < 0 || static_cast<std::size_t>(i) + 1 >= n_points)
    throw IndexError("grid index " + std::to_string(i) + " outside the kappa-domain [0, " +
                     std::to_string(static_cast<long long>(n_points) - 2) + "]");
}

}  // namespace detail

/// Delta f(i) = f[i+1] - f[i] for i in 0..n-1.
template <class T>
T forward_diff(std::span<const T> f, int i) {
  detail::check_kappa_point(f.size(), i);
  return f[static_cast<std::size_t>(i) + 1] - f[static_cast<std::size_t>(i)];
}

/// Left fractional sum of order nu at point i:
///   f(t) + (nu / Gamma(nu+1)) sum_{s=a}^{t-1} (t + nu - sigma(s))^(nu-1) f(s).
/// Order zero is the identity.
template <class T>
T left_frac_sum(std::span<const T> f, double nu, int i) {
  detail::check_sum_order(nu);
  detail::check_point(f.size(), i);
  if (nu == 0.0 || i == 0) return f[static_cast<std::size_t>(i)];
  const std::vector<double> w = sum_weights(nu, i);
  KernelAccumulator<T> acc(i);
  for (int s = 0; s < i; ++s) acc.add(w[static_cast<std::size_t>(i - s - 1)] * f[static_cast<std::size_t>(s)]);
  return f[static_cast<std::size_t>(i)] + acc.result();
}

/// Right fractional sum of order nu at point i:
///   f(t) + (nu / Gamma(nu+1)) sum_{s=sigma(t)}^{b} (s + nu - sigma(t))^(nu-1) f(s).
template <class T>
T right_frac_sum(std::span<const T> f, double nu, int i) {
  detail::check_sum_order(nu);
  detail::check_point(f.size(), i);
  const int last = static_cast<int>(f.size()) - 1;
  if (nu == 0.0 || i == last) return f[static_cast<std::size_t>(i)];
  const std::vector<double> w = sum_weights(nu, last - i);
  KernelAccumulator<T> acc(last - i);
  for (int s = i + 1; s <= last; ++s) acc.add(w[static_cast<std::size_t>(s - i - 1)] * f[static_cast<std::size_t>(s)]);
  return f[static_cast<std::size_t>(i)] + acc.result();
}

/// Left fractional difference of order alpha in (0,1]: the forward difference
/// of the left sum of order 1 - alpha.
template <class T>
T left_frac_diff(std::span<const T> f, double alpha, int i) {
  detail::check_difference_order(alpha);
  detail::check_kappa_point(f.size(), i);
  const double mu = 1.0 - alpha;
  return left_frac_sum(f, mu, i + 1) - left_frac_sum(f, mu, i);
}

/// Right fractional difference of order alpha in (0,1]: minus the forward
/// difference of the right sum of order 1 - alpha.
template <class T>
T right_frac_diff(std::span<const T> f, double alpha, int i) {
  detail::check_difference_order(alpha);
  detail::check_kappa_point(f.size(), i);
  const double mu = 1.0 - alpha;
  return -(right_frac_sum(f, mu, i + 1) - right_frac_sum(f, mu, i));
}

// Whole-grid versions. Each returns one value per point (sums) or per
// kappa-point (differences); cost is O(n^2) with the weights built once.

template <class T>
std::vector<T> left_frac_sums(std::span<const T> f, double nu) {
  detail::check_sum_order(nu);
  const int n = static_cast<int>(f.size());
  const std::vector<double> w = sum_weights(nu, n);
  std::vector<T> out(f.begin(), f.end());
  if (nu == 0.0) return out;
  for (int i = 1; i < n; ++i) {
    KernelAccumulator<T> acc(i);
    for (int s = 0; s < i; ++s) acc.add(w[static_cast<std::size_t>(i - s - 1)] * f[static_cast<std::size_t>(s)]);
    out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)] + acc.result();
  }
  return out;
}

template <class T>
std::vector<T> right_frac_sums(std::span<const T> f, double nu) {
  detail::check_sum_order(nu);
  const int n = static_cast<int>(f.size());
  const std::vector<double> w = sum_weights(nu, n);
  std::vector<T> out(f.begin(), f.end());
  if (nu == 0.0) return out;
  for (int i = 0; i + 1 < n; ++i) {
    KernelAccumulator<T> acc(n - 1 - i);
    for (int s = i + 1; s < n; ++s) acc.add(w[static_cast<std::size_t>(s - i - 1)] * f[static_cast<std::size_t>(s)]);
    out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)] + acc.result();
  }
  return out;
}

template <class T>
std::vector<T> left_frac_diffs(std::span<const T> f, double alpha) {
  detail::check_difference_order(alpha);
  const std::vector<T> sums = left_frac_sums(f, 1.0 - alpha);
  std::vector<T> out;
  out.reserve(sums.empty() ? 0 : sums.size() - 1);
  for (std::size_t i = 0; i + 1 < sums.size(); ++i) out.push_back(sums[i + 1] - sums[i]);
  return out;
}

template <class T>
std::vector<T> right_frac_diffs(std::span<const T> f, double alpha) {
  detail::check_difference_order(alpha);
  const std::vector<T> sums = right_frac_sums(f, 1.0 - alpha);
  std::vector<T> out;
  out.reserve(sums.empty() ? 0 : sums.size() - 1);
  for (std::size_t i = 0; i + 1 < sums.size(); ++i) out.push_back(-(sums[i + 1] - sums[i]));
  return out;
}

// GridFunction overloads.

template <class T>
T forward_diff(const GridFunction<T>& f, int i) {
  return forward_diff(f.values(), i);
}
template <class T>
T left_frac_sum(const GridFunction<T>& f, double nu, int i) {
  return left_frac_sum(f.values(), nu, i);
}
template <class T>
T right_frac_sum(const GridFunction<T>& f, double nu, int i) {
  return right_frac_sum(f.values(), nu, i);
}
template <class T>
T left_frac_diff(const GridFunction<T>& f, double alpha, int i) {
  return left_frac_diff(f.values(), alpha, i);
}
template <class T>
T right_frac_diff(const GridFunction<T>& f, double alpha, int i) {
  return right_frac_diff(f.values(), alpha, i);
}

// std::vector conveniences; spans do not take part in template deduction.

template <class T>
T forward_diff(const std::vector<T>& f, int i) {
  return forward_diff(std::span<const T>(f), i);
}
template <class T>
T left_frac_sum(const std::vector<T>& f, double nu, int i) {
  return left_frac_sum(std::span<const T>(f), nu, i);
}
template <class T>
T right_frac_sum(const std::vector<T>& f, double nu, int i) {
  return right_frac_sum(std::span<const T>(f), nu, i);
}
template <class T>
T left_frac_diff(const std::vector<T>& f, double alpha, int i) {
  return left_frac_diff(std::span<const T>(f), alpha, i);
}
template <class T>
T right_frac_diff(const std::vector<T>& f, double alpha, int i) {
  return right_frac_diff(std::span<const T>(f), alpha, i);
}
template <class T>
std::vector<T> left_frac_sums(const std::vector<T>& f, double nu) {
  return left_frac_sums(std::span<const T>(f), nu);
}
template <class T>
std::vector<T> right_frac_sums(const std::vector<T>& f, double nu) {
  return right_frac_sums(std::span<const T>(f), nu);
}
template <class T>
std::vector<T> left_frac_diffs(const std::vector<T>& f, double alpha) {
  return left_frac_diffs(std::span<const T>(f), alpha);
}
template <class T>
std::vector<T> right_frac_diffs(const std::vector<T>& f, double alpha) {
  return right_frac_diffs(std::span<const T>(f), alpha);
}

}  // namespace dfcv
