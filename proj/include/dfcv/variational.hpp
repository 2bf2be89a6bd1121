#pragma once

// Discrete fractional variational problems
//
//   minimize  sum_{t=a}^{b-1} L(t, y(t+1), aDt^alpha y(t), tDb^beta y(t))
//
// with each endpoint either fixed or free. This header provides the
// functional, the Euler-Lagrange residuals, the natural boundary residuals,
// the fractional summation-by-parts identity and the fractional Legendre
// quantity. The residual routines are templates over the sample type so the
// solver can differentiate them with Dual.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfcv/dual.hpp"
#include "dfcv/errors.hpp"
#include "dfcv/fraccalc.hpp"
#include "dfcv/grid.hpp"
#include "dfcv/lagrangian.hpp"
#include "dfcv/special.hpp"

namespace dfcv {

/// Fixed value or free endpoint.
class Boundary {
 public:
  static Boundary fixed(double value) {
    if (!std::isfinite(value)) throw ValidationError("boundary value must be finite");
    return Boundary(value);
  }
  static Boundary free() { return Boundary(std::nullopt); }

  bool is_free() const noexcept { return !value_.has_value(); }
  bool is_fixed() const noexcept { return value_.has_value(); }
  double value() const {
    if (!value_) throw ConstraintError("boundary is free and has no value");
    return *value_;
  }

 private:
  explicit Boundary(std::optional<double> v) : value_(v) {}
  std::optional<double> value_;
};

class ProblemSpec {
 public:
  ProblemSpec(Grid grid, double alpha, double beta, Boundary initial, Boundary terminal, Lagrangian lagrangian)
      : grid_(grid),
        alpha_(alpha),
        beta_(beta),
        initial_(initial),
        terminal_(terminal),
        lagrangian_(std::move(lagrangian)) {
    check_order("alpha", alpha_);
    check_order("beta", beta_);
  }

  const Grid& grid() const noexcept { return grid_; }
  int length() const noexcept { return grid_.length(); }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double mu() const noexcept { return 1.0 - alpha_; }
  double nu() const noexcept { return 1.0 - beta_; }
  const Boundary& initial() const noexcept { return initial_; }
  const Boundary& terminal() const noexcept { return terminal_; }
  const Lagrangian& lagrangian() const noexcept { return lagrangian_; }

  ProblemSpec with_orders(double alpha, double beta) const {
    return ProblemSpec(grid_, alpha, beta, initial_, terminal_, lagrangian_);
  }

  /// Grid indices of the unknowns: y(a) when free, the interior points, y(b)
  /// when free. Residual component r pairs with unknown r.
  int first_unknown() const noexcept { return initial_.is_free() ? 0 : 1; }
  int last_unknown() const noexcept { return terminal_.is_free() ? grid_.length() : grid_.length() - 1; }
  int unknown_count() const noexcept { return last_unknown() - first_unknown() + 1; }

 private:
  static void check_order(const char* name, double x) {
    if (!(x > 0.0 && x <= 1.0))
      throw ValidationError(std::string(name) + " must lie in (0, 1], got " + std::to_string(x));
  }

  Grid grid_;
  double alpha_;
  double beta_;
  Boundary initial_;
  Boundary terminal_;
  Lagrangian lagrangian_;
};

/// [y](t) = (t, y(t+1), aDt^alpha y(t), tDb^beta y(t)) at a kappa-point.
template <class T>
struct EvaluationPoint {
  int index;
  double t;
  T u;
  T v;
  T w;
};

struct LegendreReport {
  std::vector<double> values;  // one per point of {a, ..., b-2}
  double min = 0.0;
  bool satisfied = false;
};

namespace detail {

template <class T>
void check_samples(const ProblemSpec& p, std::span<const T> y) {
  if (static_cast<int>(y.size()) != p.grid().size())
    throw GridMismatchError("expected " + std::to_string(p.grid().size()) + " samples, got " + std::to_string(y.size()));
}

template <class T>
void check_boundaries(const ProblemSpec& p, std::span<const T> y) {
  if (p.initial().is_fixed() && value_of(y.front()) != p.initial().value())
    throw BoundaryMismatchError("y(a) = " + std::to_string(value_of(y.front())) + " but the initial condition is " +
                                std::to_string(p.initial().value()));
  if (p.terminal().is_fixed() && value_of(y.back()) != p.terminal().value())
    throw BoundaryMismatchError("y(b) = " + std::to_string(value_of(y.back())) + " but the terminal condition is " +
                                std::to_string(p.terminal().value()));
}

inline void check_kappa2_index(const ProblemSpec& p, int i) {
  if (i < 0 || i > p.length() - 2)
    throw IndexError("index " + std::to_string(i) + " outside [0, " + std::to_string(p.length() - 2) + "]");
}

// First partials of L along y. For Dual samples the tangents are propagated
// through the exact Hessian of L, giving forward-mode derivatives of the
// residuals with respect to y.
struct FirstPartials {
  template <class T>
  struct Triple {
    T u, v, w;
  };

  static Triple<double> at(const Lagrangian& l, const EvaluationPoint<double>& e) {
    const SecondOrderValue s = l.partials(e.t, e.u, e.v, e.w);
    return {s.grad[0], s.grad[1], s.grad[2]};
  }

  static Triple<Dual> at(const Lagrangian& l, const EvaluationPoint<Dual>& e) {
    const SecondOrderValue s = l.partials(e.t, e.u.value(), e.v.value(), e.w.value());
    auto lift = [&](std::size_t a) {
      const Dual along = s.hess[a][0] * e.u + s.hess[a][1] * e.v + s.hess[a][2] * e.w;
      return Dual(s.grad[a], along.tangent());
    };
    return {lift(0), lift(1), lift(2)};
  }
};

}  // namespace detail

/// Evaluation points for every kappa-point i = 0..k-1.
template <class T>
std::vector<EvaluationPoint<T>> evaluation_points(const ProblemSpec& p, std::span<const T> y) {
  detail::check_samples(p, y);
  const std::vector<T> v = left_frac_diffs(y, p.alpha());
  const std::vector<T> w = right_frac_diffs(y, p.beta());
  std::vector<EvaluationPoint<T>> pts;
  pts.reserve(static_cast<std::size_t>(p.length()));
  for (int i = 0; i < p.length(); ++i) {
    const auto s = static_cast<std::size_t>(i);
    pts.push_back({i, p.grid().point(i), y[s + 1], v[s], w[s]});
  }
  return pts;
}

template <class T>
EvaluationPoint<T> evaluation_point(const ProblemSpec& p, std::span<const T> y, int i) {
  detail::check_samples(p, y);
  if (i < 0 || i >= p.length()) throw IndexError("evaluation index " + std::to_string(i) + " outside the kappa-domain");
  return {i, p.grid().point(i), y[static_cast<std::size_t>(i) + 1], left_frac_diff(y, p.alpha(), i),
          right_frac_diff(y, p.beta(), i)};
}

/// The functional sum_{i=0}^{k-1} L([y](i)). Fixed boundary values must match
/// y exactly.
inline double functional_value(const ProblemSpec& p, std::span<const double> y) {
  detail::check_samples(p, y);
  detail::check_boundaries(p, y);
  double total = 0.0;
  for (const auto& e : evaluation_points(p, y)) total += p.lagrangian().value(e.t, e.u, e.v, e.w);
  return total;
}

/// Partials L_u, L_v, L_w along y, one entry per kappa-point.
template <class T>
struct PartialsAlong {
  std::vector<T> lu, lv, lw;
};

template <class T>
PartialsAlong<T> partials_along(const ProblemSpec& p, std::span<const T> y) {
  PartialsAlong<T> out;
  for (const auto& e : evaluation_points(p, y)) {
    const auto d = detail::FirstPartials::at(p.lagrangian(), e);
    out.lu.push_back(d.u);
    out.lv.push_back(d.v);
    out.lw.push_back(d.w);
  }
  return out;
}

/// Euler-Lagrange residuals
///   L_u[y](t) + tD_{rho(b)}^alpha L_v[y](t) + aDt^beta L_w[y](t)
/// for every t in {a, ..., b-2}. L_v and L_w live on {a, ..., b-1}, so the
/// right difference is taken on that truncated grid.
template <class T>
std::vector<T> el_residuals(const ProblemSpec& p, std::span<const T> y) {
  const PartialsAlong<T> d = partials_along(p, y);
  const std::vector<T> right = right_frac_diffs(d.lv, p.alpha());
  const std::vector<T> left = left_frac_diffs(d.lw, p.beta());
  std::vector<T> r;
  r.reserve(static_cast<std::size_t>(p.length() - 1));
  for (std::size_t i = 0; i + 1 < d.lu.size(); ++i) r.push_back(d.lu[i] + right[i] + left[i]);
  return r;
}

template <class T>
T el_residual(const ProblemSpec& p, std::span<const T> y, int i) {
  detail::check_kappa2_index(p, i);
  return el_residuals(p, y)[static_cast<std::size_t>(i)];
}

namespace detail {

template <class T>
T natural_initial(const ProblemSpec& p, const PartialsAlong<T>& d) {
  // -L_v(a) + L_w(a) + sum_t w(t-a) L_v(t) - sum_{t>a} w(t-a-1) L_v(t)
  const int k = p.length();
  const std::vector<double> wt = sum_weights(p.mu(), k);
  T acc = d.lw[0] - d.lv[0];
  if (p.mu() != 0.0) {
    acc = acc + wt[0] * d.lv[0];
    for (int t = 1; t < k; ++t) {
      const auto s = static_cast<std::size_t>(t);
      acc = acc + (wt[s] - wt[s - 1]) * d.lv[s];
    }
  }
  return acc;
}

template <class T>
T natural_terminal(const ProblemSpec& p, const PartialsAlong<T>& d) {
  // L_u(b-1) + L_v(b-1) - L_w(b-1) + sum_t w(b-t-1) L_w(t) - sum_{t<b-1} w(b-t-2) L_w(t)
  const int k = p.length();
  const auto last = static_cast<std::size_t>(k - 1);
  const std::vector<double> wt = sum_weights(p.nu(), k);
  T acc = d.lu[last] + d.lv[last] - d.lw[last];
  if (p.nu() != 0.0) {
    acc = acc + wt[0] * d.lw[last];
    for (int t = 0; t < k - 1; ++t) {
      const auto s = static_cast<std::size_t>(t);
      const auto gap = static_cast<std::size_t>(k - t - 1);
      acc = acc + (wt[gap] - wt[gap - 1]) * d.lw[s];
    }
  }
  return acc;
}

}  // namespace detail

/// Natural boundary residual at a free initial point.
template <class T>
T natural_bc_initial(const ProblemSpec& p, std::span<const T> y) {
  if (p.initial().is_fixed()) throw ConstraintError("natural boundary condition at a requires a free y(a)");
  return detail::natural_initial(p, partials_along(p, y));
}

/// Natural boundary residual at a free terminal point.
template <class T>
T natural_bc_terminal(const ProblemSpec& p, std::span<const T> y) {
  if (p.terminal().is_fixed()) throw ConstraintError("natural boundary condition at b requires a free y(b)");
  return detail::natural_terminal(p, partials_along(p, y));
}

/// Full first-order system: [initial natural BC] + EL residuals + [terminal
/// natural BC]. Component r is the derivative of the functional with respect
/// to unknown r.
template <class T>
std::vector<T> assemble_residual(const ProblemSpec& p, std::span<const T> y) {
  const PartialsAlong<T> d = partials_along(p, y);
  const std::vector<T> right = right_frac_diffs(d.lv, p.alpha());
  const std::vector<T> left = left_frac_diffs(d.lw, p.beta());
  std::vector<T> r;
  r.reserve(static_cast<std::size_t>(p.unknown_count()));
  if (p.initial().is_free()) r.push_back(detail::natural_initial(p, d));
  for (std::size_t i = 0; i + 1 < d.lu.size(); ++i) r.push_back(d.lu[i] + right[i] + left[i]);
  if (p.terminal().is_free()) r.push_back(detail::natural_terminal(p, d));
  return r;
}

/// LHS - RHS of the fractional summation-by-parts formula
///
///   sum_{t=a}^{b-1} f(t) aDt^alpha g(t)
///     = f(b-1) g(b) - f(a) g(a) + sum_{t=a}^{b-2} (tD_{rho(b)}^alpha f)(t) g(t+1)
///       + (mu / Gamma(mu+1)) g(a) ( sum_{t=a}^{b-1} (t+mu-a)^(mu-1) f(t)
///                                   - sum_{t=a+1}^{b-1} (t+mu-a-1)^(mu-1) f(t) )
///
/// with f on {a, ..., b-1} and g on {a, ..., b}.
inline double summation_by_parts_residual(std::span<const double> f, std::span<const double> g, double alpha) {
  if (f.size() < 2 || g.size() != f.size() + 1)
    throw GridMismatchError("summation by parts needs f on {a..b-1} and g on {a..b}; got " + std::to_string(f.size()) +
                            " and " + std::to_string(g.size()) + " samples");
  const std::size_t k = f.size();
  const double mu = 1.0 - alpha;

  const std::vector<double> dg = left_frac_diffs(g, alpha);
  double lhs = 0.0;
  for (std::size_t t = 0; t < k; ++t) lhs += f[t] * dg[t];

  const std::vector<double> df = right_frac_diffs(f, alpha);
  double rhs = f[k - 1] * g[k] - f[0] * g[0];
  for (std::size_t t = 0; t + 1 < k; ++t) rhs += df[t] * g[t + 1];
  if (mu != 0.0) {
    const std::vector<double> w = sum_weights(mu, static_cast<int>(k));
    double first = 0.0, second = 0.0;
    for (std::size_t t = 0; t < k; ++t) first += w[t] * f[t];
    for (std::size_t t = 1; t < k; ++t) second += w[t - 1] * f[t];
    rhs += g[0] * (first - second);
  }
  return lhs - rhs;
}

/// Left-hand side of the fractional Legendre condition at t = a + i, i in
/// {0, ..., k-2}. Equals the second derivative of the functional with
/// respect to y(t+1).
inline double legendre_lhs(const ProblemSpec& p, std::span<const double> y, int i) {
  detail::check_kappa2_index(p, i);
  const std::vector<EvaluationPoint<double>> pts = evaluation_points(p, y);
  using A = SecondOrderValue::Axis;
  auto H = [&](int s) {
    const auto& e = pts[static_cast<std::size_t>(s)];
    return p.lagrangian().partials(e.t, e.u, e.v, e.w);
  };
  const double mu = p.mu();
  const double nu = p.nu();
  const int k = p.length();
  const SecondOrderValue at = H(i);
  const SecondOrderValue next = H(i + 1);

  double total = at.dd(A::U, A::U) + 2.0 * at.dd(A::U, A::V) + at.dd(A::V, A::V) +
                 next.dd(A::V, A::V) * (mu - 1.0) * (mu - 1.0);
  for (int s = i + 2; s <= k - 1; ++s) {
    const double c = weight_increment(mu, s - i);
    total += H(s).dd(A::V, A::V) * c * c;
  }
  total += 2.0 * at.dd(A::U, A::W) * (nu - 1.0) + 2.0 * (nu - 1.0) * at.dd(A::V, A::W) +
           2.0 * (mu - 1.0) * next.dd(A::V, A::W) + at.dd(A::W, A::W) * (1.0 - nu) * (1.0 - nu) +
           next.dd(A::W, A::W);
  for (int s = 0; s <= i - 1; ++s) {
    const double c = weight_increment(nu, i + 1 - s);
    total += H(s).dd(A::W, A::W) * c * c;
  }
  return total;
}

inline LegendreReport legendre_check(const ProblemSpec& p, std::span<const double> y, double tolerance = 1e-9) {
  if (!(tolerance >= 0.0)) throw ValidationError("Legendre tolerance must be >= 0");
  LegendreReport r;
  r.min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= p.length() - 2; ++i) {
    r.values.push_back(legendre_lhs(p, y, i));
    r.min = std::min(r.min, r.values.back());
  }
  r.satisfied = r.min >= -tolerance;
  return r;
}

// std::vector conveniences

inline double functional_value(const ProblemSpec& p, const std::vector<double>& y) {
  return functional_value(p, std::span<const double>(y));
}
template <class T>
std::vector<T> assemble_residual(const ProblemSpec& p, const std::vector<T>& y) {
  return assemble_residual(p, std::span<const T>(y));
}
template <class T>
T el_residual(const ProblemSpec& p, const std::vector<T>& y, int i) {
  return el_residual(p, std::span<const T>(y), i);
}
template <class T>
T natural_bc_initial(const ProblemSpec& p, const std::vector<T>& y) {
  return natural_bc_initial(p, std::span<const T>(y));
}
template <class T>
T natural_bc_terminal(const ProblemSpec& p, const std::vector<T>& y) {
  return natural_bc_terminal(p, std::span<const T>(y));
}
inline double legendre_lhs(const ProblemSpec& p, const std::vector<double>& y, int i) {
  return legendre_lhs(p, std::span<const double>(y), i);
}
inline LegendreReport legendre_check(const ProblemSpec& p, const std::vector<double>& y, double tolerance = 1e-9) {
  return legendre_check(p, std::span<const double>(y), tolerance);
}
inline double summation_by_parts_residual(const std::vector<double>& f, const std::vector<double>& g, double alpha) {
  return summation_by_parts_residual(std::span<const double>(f), std::span<const double>(g), alpha);
}

}  // namespace dfcv
