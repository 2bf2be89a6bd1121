#pragma once

// Randomized self-tests of the operator identities:
//
//   left commutation    aDt^{-nu} (Delta f)(t) = Delta(aDt^{-nu} f)(t) - nu/Gamma(nu+1) (t+nu-a)^(nu-1) f(a)
//   right commutation   tD_{rho(b)}^{-nu} (Delta f)(t) = nu/Gamma(nu+1) (b+nu-sigma(t))^(nu-1) f(b) + Delta(tDb^{-nu} f)(t)
//   summation by parts  see summation_by_parts_residual
//   weight increments   nu/Gamma(nu+1) [(n-1+nu)^(nu-1) - (n-2+nu)^(nu-1)] = weight_increment(nu, n)
//
// The boundary coefficients are evaluated through falling_factorial and
// tgamma, i.e. independently of the product recurrence used by the operators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dfcv/fraccalc.hpp"
#include "dfcv/special.hpp"
#include "dfcv/variational.hpp"

namespace dfcv {

struct IdentityCheckOptions {
  double tolerance = 1e-10;
  int max_length = 12;
  /// Relative perturbation applied to the gamma-path coefficients. Nonzero
  /// values exist only to exercise the failure path.
  double coefficient_fault = 0.0;
};

struct IdentityViolation {
  std::string suite;
  int case_index = 0;
  int length = 0;
  double order = 0.0;
  double residual = 0.0;
};

struct IdentitySuiteResult {
  std::string name;
  int instances = 0;
  double max_residual = 0.0;
};

struct IdentityReport {
  std::vector<IdentitySuiteResult> suites;
  std::vector<IdentityViolation> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

// nu/Gamma(nu+1) * (gap + nu)^(nu-1), gamma route.
inline double boundary_coefficient(double nu, int gap, double fault) {
  if (nu == 0.0) return 0.0;
  return (1.0 + fault) * nu / std::tgamma(nu + 1.0) * falling_factorial(gap + nu, nu - 1.0);
}

inline double left_commutation_residual(std::span<const double> f, double nu, double fault) {
  const int k = static_cast<int>(f.size()) - 1;
  std::vector<double> df(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) df[static_cast<std::size_t>(i)] = forward_diff(f, i);
  const std::vector<double> sums = left_frac_sums(f, nu);
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    const double lhs = left_frac_sum(std::span<const double>(df), nu, i);
    const double rhs = sums[static_cast<std::size_t>(i) + 1] - sums[static_cast<std::size_t>(i)] -
                       boundary_coefficient(nu, i, fault) * f[0];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

inline double right_commutation_residual(std::span<const double> f, double nu, double fault) {
  const int k = static_cast<int>(f.size()) - 1;
  std::vector<double> df(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) df[static_cast<std::size_t>(i)] = forward_diff(f, i);
  const std::vector<double> sums = right_frac_sums(f, nu);
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    const double lhs = right_frac_sum(std::span<const double>(df), nu, i);
    const double rhs = boundary_coefficient(nu, k - i - 1, fault) * f[static_cast<std::size_t>(k)] +
                       sums[static_cast<std::size_t>(i) + 1] - sums[static_cast<std::size_t>(i)];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// Error relative to the size of the weights being differenced; the
// increment itself vanishes as nu -> 1.
inline double weight_increment_residual(double nu, int n, double fault) {
  const double outer = boundary_coefficient(nu, n - 1, fault);
  const double inner = boundary_coefficient(nu, n - 2, fault);
  const double closed = weight_increment(nu, n);
  return std::abs((outer - inner) - closed) / std::max({std::abs(closed), std::abs(inner), 1e-300});
}

}  // namespace detail

/// Runs `cases` random instances of each suite. Grid lengths are uniform in
/// {2, ..., max_length}; sample values uniform in [-1, 1].
inline IdentityReport run_identity_checks(std::uint64_t seed, int cases, const IdentityCheckOptions& opts = {}) {
  if (cases < 1) throw ValidationError("number of cases must be >= 1");
  if (opts.max_length < 2) throw ValidationError("max_length must be >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length(2, opts.max_length);
  std::uniform_int_distribution<int> gap(2, 20);
  std::uniform_real_distribution<double> sample(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Orders: the integer endpoints get explicit coverage on top of uniform draws.
  auto draw_order = [&](int c) {
    switch (c % 8) {
      case 0: return 0.0;
      case 1: return 1.0;
      default: return unit(rng);
    }
  };
  auto draw = [&](int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = sample(rng);
    return v;
  };

  IdentityReport report;
  IdentitySuiteResult left{"left_commutation"}, right{"right_commutation"}, sbp{"summation_by_parts"},
      coeff{"weight_increment"};
  auto record = [&](IdentitySuiteResult& suite, int c, int k, double order, double residual) {
    ++suite.instances;
    suite.max_residual = std::max(suite.max_residual, residual);
    if (!(residual <= opts.tolerance)) report.violations.push_back({suite.name, c, k, order, residual});
  };

  for (int c = 0; c < cases; ++c) {
    {
      const int k = length(rng);
      const double nu = draw_order(c);
      const std::vector<double> f = draw(k + 1);
      record(left, c, k, nu, detail::left_commutation_residual(f, nu, opts.coefficient_fault));
      record(right, c, k, nu, detail::right_commutation_residual(f, nu, opts.coefficient_fault));
    }
    {
      const int k = length(rng);
      // alpha in (0, 1]
      const double alpha = (c % 8 == 1) ? 1.0 : 1.0 - 0.999999 * unit(rng);
      const std::vector<double> f = draw(k);
      const std::vector<double> g = draw(k + 1);
      double fmax = 0.0, gmax = 0.0;
      for (double x : f) fmax = std::max(fmax, std::abs(x));
      for (double x : g) gmax = std::max(gmax, std::abs(x));
      const double scale = std::max(1e-300, fmax * gmax);
      record(sbp, c, k, alpha, std::abs(summation_by_parts_residual(f, g, alpha)) / scale);
    }
    {
      const double nu = 1e-6 + (1.0 - 2e-6) * unit(rng);
      const int n = gap(rng);
      record(coeff, c, n, nu, detail::weight_increment_residual(nu, n, opts.coefficient_fault));
    }
  }
  report.suites = {left, right, sbp, coeff};
  return report;
}

}  // namespace dfcv
