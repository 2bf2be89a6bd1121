#pragma once

// Extremals of discrete fractional variational problems.
//
// solve_el runs a damped Newton iteration on the Euler-Lagrange system (plus
// natural boundary equations at free endpoints). brute_force_minimize is an
// independent oracle that only ever calls functional_value. The Legendre
// report attached to each Solution is a necessary condition only: a
// stationary point of a non-convex L can pass it without being a minimizer.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dfcv/dual.hpp"
#include "dfcv/errors.hpp"
#include "dfcv/golden_section.hpp"
#include "dfcv/linalg.hpp"
#include "dfcv/nelder_mead.hpp"
#include "dfcv/variational.hpp"

namespace dfcv {

enum class JacobianMode { forward_ad, finite_difference };

struct SolverOptions {
  double residual_tolerance = 1e-12;
  int max_iterations = 100;
  JacobianMode jacobian_mode = JacobianMode::forward_ad;
  double backtrack_factor = 0.5;
  double armijo = 1e-4;
  /// Full grid function; fixed endpoints are replaced by the boundary data.
  std::optional<std::vector<double>> initial_guess;
  double legendre_tolerance = 1e-9;
  /// Seed of the oracle's random starts.
  std::uint64_t seed = 42;
  int random_starts = 20;

  void validate() const {
    if (!(residual_tolerance > 0.0)) throw ValidationError("residual tolerance must be > 0");
    if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) throw ValidationError("backtrack factor must lie in (0, 1)");
    if (!(armijo > 0.0 && armijo < 0.5)) throw ValidationError("Armijo constant must lie in (0, 1/2)");
    if (random_starts < 0) throw ValidationError("random_starts must be >= 0");
  }
};

struct Solution {
  GridFunction<double> y;
  double objective = 0.0;
  double residual_inf_norm = 0.0;
  int iterations = 0;
  LegendreReport legendre;
  /// Newton: residual_inf_norm <= tolerance. Oracle: the simplex search
  /// reached function-value stationarity.
  bool converged = false;
};

namespace detail {

inline double inf_norm(const std::vector<double>& r) {
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

inline std::vector<double> linear_guess(const ProblemSpec& p) {
  const int k = p.length();
  const double A = p.initial().is_fixed() ? p.initial().value() : 0.0;
  const double B = p.terminal().is_fixed() ? p.terminal().value() : 0.0;
  std::vector<double> y(static_cast<std::size_t>(k + 1));
  for (int i = 0; i <= k; ++i) y[static_cast<std::size_t>(i)] = A + (B - A) * i / k;
  y.front() = A;
  y.back() = B;
  return y;
}

inline std::vector<double> starting_point(const ProblemSpec& p, const SolverOptions& opts) {
  std::vector<double> y = linear_guess(p);
  if (opts.initial_guess) {
    if (static_cast<int>(opts.initial_guess->size()) != p.grid().size())
      throw GridMismatchError("initial guess needs " + std::to_string(p.grid().size()) + " values");
    const double A = y.front(), B = y.back();
    y = *opts.initial_guess;
    if (p.initial().is_fixed()) y.front() = A;
    if (p.terminal().is_fixed()) y.back() = B;
  }
  return y;
}

inline std::vector<double> residual(const ProblemSpec& p, const std::vector<double>& y) {
  return assemble_residual(p, std::span<const double>(y));
}

inline DenseMatrix jacobian(const ProblemSpec& p, const std::vector<double>& y, JacobianMode mode) {
  const int n = p.unknown_count();
  const int first = p.first_unknown();
  DenseMatrix J(n);
  if (mode == JacobianMode::forward_ad) {
    std::vector<Dual> yd;
    yd.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      const int slot = static_cast<int>(i) - first;
      if (slot >= 0 && slot < n)
        yd.push_back(Dual::variable(y[i], static_cast<std::size_t>(slot), static_cast<std::size_t>(n)));
      else
        yd.emplace_back(y[i]);
    }
    const std::vector<Dual> r = assemble_residual(p, std::span<const Dual>(yd));
    for (int row = 0; row < n; ++row)
      for (int col = 0; col < n; ++col) J(row, col) = r[static_cast<std::size_t>(row)].derivative(static_cast<std::size_t>(col));
    return J;
  }
  std::vector<double> yp = y, ym = y;
  for (int col = 0; col < n; ++col) {
    const auto idx = static_cast<std::size_t>(first + col);
    const double h = 1e-7 * std::max(1.0, std::abs(y[idx]));
    yp[idx] = y[idx] + h;
    ym[idx] = y[idx] - h;
    const std::vector<double> rp = residual(p, yp), rm = residual(p, ym);
    for (int row = 0; row < n; ++row)
      J(row, col) = (rp[static_cast<std::size_t>(row)] - rm[static_cast<std::size_t>(row)]) / (yp[idx] - ym[idx]);
    yp[idx] = ym[idx] = y[idx];
  }
  return J;
}

inline Solution finish(const ProblemSpec& p, std::vector<double> y, int iterations, bool converged,
                       const SolverOptions& opts) {
  const double objective = functional_value(p, std::span<const double>(y));
  const double norm = inf_norm(residual(p, y));
  LegendreReport leg = legendre_check(p, std::span<const double>(y), opts.legendre_tolerance);
  return Solution{GridFunction<double>(p.grid(), std::move(y)), objective, norm, iterations, std::move(leg), converged};
}

}  // namespace detail

/// Damped Newton on the first-order system.
///
/// The step solves J dx = -r; the length is halved until the merit
/// 0.5 |r|^2 satisfies the Armijo condition. Returns the best iterate with
/// converged = false when the tolerance is not reached. Throws
/// SingularJacobianError if the Jacobian cannot be factored.
inline Solution solve_el(const ProblemSpec& p, const SolverOptions& opts = {}) {
  opts.validate();
  const int n = p.unknown_count();
  if (n < 1) throw ValidationError("problem has no unknowns");
  const int first = p.first_unknown();
  // Forward AD only through parsed expressions.
  const JacobianMode mode = p.lagrangian().has_expression() ? opts.jacobian_mode : JacobianMode::finite_difference;

  std::vector<double> y = detail::starting_point(p, opts);
  std::vector<double> r = detail::residual(p, y);
  double norm = detail::inf_norm(r);
  std::vector<double> best = y;
  double best_norm = norm;
  int iterations = 0;

  while (norm > opts.residual_tolerance && iterations < opts.max_iterations) {
    const DenseMatrix J = detail::jacobian(p, y, mode);
    std::vector<double> rhs(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
    const std::vector<double> dx = lu_solve(J, rhs);

    double merit = 0.0;
    for (double x : r) merit += 0.5 * x * x;
    double step = 1.0;
    std::vector<double> trial = y;
    std::vector<double> rt;
    bool accepted = false;
    while (step > 1e-12) {
      for (int i = 0; i < n; ++i)
        trial[static_cast<std::size_t>(first + i)] = y[static_cast<std::size_t>(first + i)] + step * dx[static_cast<std::size_t>(i)];
      rt = detail::residual(p, trial);
      double mt = 0.0;
      for (double x : rt) mt += 0.5 * x * x;
      if (std::isfinite(mt) && mt <= (1.0 - 2.0 * opts.armijo * step) * merit) {
        accepted = true;
        break;
      }
      step *= opts.backtrack_factor;
    }
    ++iterations;
    if (!accepted) break;
    y = trial;
    r = rt;
    norm = detail::inf_norm(r);
    if (norm < best_norm) {
      best = y;
      best_norm = norm;
    }
  }
  const bool converged = best_norm <= opts.residual_tolerance;
  return detail::finish(p, std::move(best), iterations, converged, opts);
}

/// Derivative-free oracle: minimizes functional_value directly over the
/// unknowns. Nelder-Mead from the linear-interpolation start and from
/// `random_starts` seeded uniform starts in [min(A,B)-2, max(A,B)+2]^n,
/// restarted until the value stops improving, followed by a central-difference
/// Newton polish of the functional itself. Limited to 8 unknowns.
inline Solution brute_force_minimize(const ProblemSpec& p, const SolverOptions& opts = {}) {
  opts.validate();
  const int n = p.unknown_count();
  if (n > 8) throw DimensionTooLargeError("brute-force oracle supports at most 8 unknowns, problem has " + std::to_string(n));
  if (n < 1) throw ValidationError("problem has no unknowns");
  const int first = p.first_unknown();
  const std::vector<double> base = detail::linear_guess(p);

  auto embed = [&](const std::vector<double>& x) {
    std::vector<double> y = base;
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(first + i)] = x[static_cast<std::size_t>(i)];
    return y;
  };
  auto objective = [&](const std::vector<double>& x) {
    try {
      const double v = functional_value(p, embed(x));
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const double lo = std::min(base.front(), base.back()) - 2.0;
  const double hi = std::max(base.front(), base.back()) + 2.0;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uniform(lo, hi);

  std::vector<std::vector<double>> starts;
  starts.emplace_back(base.begin() + first, base.begin() + first + n);
  for (int s = 0; s < opts.random_starts; ++s) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& xi : x) xi = uniform(rng);
    starts.push_back(std::move(x));
  }

  NelderMeadResult best{{}, std::numeric_limits<double>::infinity(), 0, false};
  int evaluations = 0;
  for (const auto& start : starts) {
    NelderMeadOptions nm;
    NelderMeadResult run = nelder_mead(objective, start, nm);
    evaluations += run.evaluations;
    for (int restart = 0; restart < 20; ++restart) {
      nm.initial_step = std::max(1e-6, 0.25 * nm.initial_step);
      NelderMeadResult again = nelder_mead(objective, run.x, nm);
      evaluations += again.evaluations;
      const bool improved = again.f < run.f - 1e-14 * std::max(1.0, std::abs(run.f));
      if (again.f <= run.f) run = again;
      if (!improved) break;
    }
    if (run.f < best.f) best = run;
  }

  // Polish with Newton steps on central differences of the functional.
  std::vector<double> x = best.x;
  double fx = best.f;
  for (int iter = 0; iter < 8; ++iter) {
    std::vector<double> g(static_cast<std::size_t>(n));
    DenseMatrix H(n);
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const double hg = 1e-6 * std::max(1.0, std::abs(x[ii]));
      std::vector<double> xp = x, xm = x;
      xp[ii] += hg;
      xm[ii] -= hg;
      g[ii] = (objective(xp) - objective(xm)) / (2.0 * hg);
      for (int j = 0; j < n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double hi_ = 1e-4 * std::max(1.0, std::abs(x[ii]));
        const double hj = 1e-4 * std::max(1.0, std::abs(x[jj]));
        auto at = [&](double si, double sj) {
          std::vector<double> z = x;
          z[ii] += si * hi_;
          z[jj] += sj * hj;
          return objective(z);
        };
        H(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi_ * hj);
      }
    }
    std::vector<double> step;
    try {
      for (double& gi : g) gi = -gi;
      step = lu_solve(H, g);
    } catch (const SingularJacobianError&) {
      break;
    }
    std::vector<double> xn = x;
    for (int i = 0; i < n; ++i) xn[static_cast<std::size_t>(i)] += step[static_cast<std::size_t>(i)];
    const double fn = objective(xn);
    if (!(fn <= fx)) break;
    const bool moved = std::any_of(step.begin(), step.end(), [](double s) { return std::abs(s) > 1e-15; });
    x = std::move(xn);
    fx = fn;
    if (!moved) break;
  }

  return detail::finish(p, embed(x), evaluations, best.stationary, opts);
}

struct SweepEntry {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<Solution> solution;
  std::string error;
};

/// Solves p at every alpha (beta = alpha when link_beta). Failures are
/// recorded per entry and the sweep continues.
inline std::vector<SweepEntry> alpha_sweep(const ProblemSpec& p, const std::vector<double>& alphas, bool link_beta,
                                           const SolverOptions& opts = {}) {
  std::vector<SweepEntry> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    SweepEntry e;
    e.alpha = alpha;
    e.beta = link_beta ? alpha : p.beta();
    try {
      e.solution = solve_el(p.with_orders(e.alpha, e.beta), opts);
    } catch (const Error& ex) {
      e.error = ex.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

struct AlphaMinimum {
  double alpha;
  Solution solution;
};

/// Golden-section search of alpha -> objective of the extremal on [lo, hi].
inline AlphaMinimum minimize_objective_over_alpha(const ProblemSpec& p, double lo, double hi, bool link_beta,
                                                  const SolverOptions& opts = {}, double width = 1e-10) {
  if (!(lo > 0.0 && lo < hi && hi <= 1.0))
    throw ValidationError("alpha bracket must satisfy 0 < lo < hi <= 1, got [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
  auto solve_at = [&](double alpha) {
    Solution s = solve_el(p.with_orders(alpha, link_beta ? alpha : p.beta()), opts);
    if (!s.converged)
      throw NonConvergenceError("solve did not converge at alpha = " + std::to_string(alpha) +
                                " (residual " + std::to_string(s.residual_inf_norm) + ")");
    return s;
  };
  const ScalarMinimum m = golden_section_minimize([&](double a) { return solve_at(a).objective; }, lo, hi, width);
  return {m.x, solve_at(m.x)};
}

}  // namespace dfcv
