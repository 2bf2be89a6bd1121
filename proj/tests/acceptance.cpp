// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dfcv/dfcv.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "reference.hpp"

using namespace dfcv;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < time_limit_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s [%s] %s: %s; %.3f s (limit %g s)%s\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), elapsed,
              time_limit_s, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// Worst deviation tracker.
struct Worst {
  double value = 0.0;
  void add(double got, double want) { value = std::max(value, std::abs(got - want)); }
};

std::vector<Solution> minimizers;  // converged minimizers from criteria 1-3 and 8

}  // namespace

int main() {
  criterion("1", "Example 1 (b=4) extremals and objectives", 1.0, [] {
    Worst w;
    bool converged = true;
    for (const auto& row : reference::kExample1) {
      const Solution s = solve_el(fixtures::example1(4, row.alpha));
      converged = converged && s.converged;
      w.add(s.y[1], row.y1);
      w.add(s.y[2], row.y2);
      w.add(s.y[3], row.y3);
      w.add(s.objective, row.objective);
      if (s.converged) minimizers.push_back(s);
    }
    return Outcome{converged && w.value <= 1e-8, "max abs error " + sci(w.value) + " (tol 1e-8)"};
  });

  criterion("2", "Example 2 extremals and objectives", 1.0, [] {
    Worst w;
    bool converged = true;
    for (const auto& row : reference::kExample2) {
      const Solution s = solve_el(fixtures::example2(row.alpha, row.alpha));
      converged = converged && s.converged;
      w.add(s.y[1], row.y1);
      w.add(s.objective, row.objective);
      if (s.converged) minimizers.push_back(s);
    }
    return Outcome{converged && w.value <= 1e-10, "max abs error " + sci(w.value) + " (tol 1e-10)"};
  });

  criterion("3", "Example 3 extremals and objectives", 1.0, [] {
    Worst w;
    bool converged = true;
    for (const auto& row : reference::kExample3) {
      const Solution s = solve_el(fixtures::example3(row.alpha));
      converged = converged && s.converged;
      w.add(s.y[1], row.y1);
      w.add(s.objective, row.objective);
      if (s.converged) minimizers.push_back(s);
    }
    return Outcome{converged && w.value <= 1e-10, "max abs error " + sci(w.value) + " (tol 1e-10)"};
  });

  criterion("4", "Example 1 (b=2) closed form at 50 random alpha", 2.0, [] {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Worst w;
    for (int i = 0; i < 50; ++i) {
      const double alpha = 1.0 - u(rng);  // (0, 1]
      const Solution s = solve_el(fixtures::example1(2, alpha));
      w.add(s.y[1], reference::example1_b2(alpha, 0.0, 1.0));
    }
    return Outcome{w.value <= 1e-10, "max abs error " + sci(w.value) + " (tol 1e-10)"};
  });

  criterion("5", "Example 2 minimizing alpha", 5.0, [] {
    const AlphaMinimum m = minimize_objective_over_alpha(fixtures::example2(0.5, 0.5), 0.01, 1.0, true);
    const double err = std::abs(m.alpha - reference::kExample2MinimizingAlpha);
    char buf[96];
    std::snprintf(buf, sizeof buf, "alpha* = %.14g, error %s (tol 1e-6)", m.alpha, sci(err).c_str());
    return Outcome{err <= 1e-6, buf};
  });

  criterion("6", "classical reductions at alpha = beta = 1", 1.0, [] {
    Worst w;
    for (double A : {0.0, -1.3, 2.0})
      for (double B : {1.0, 0.4, -5.0}) w.add(solve_el(fixtures::example1(2, 1.0, A, B)).y[1], (A + B) / 2);
    const Solution s = solve_el(fixtures::example3(1.0));
    w.add(s.y[1], 0.5);
    w.add(s.objective, -0.25);
    return Outcome{w.value <= 1e-12, "max abs error " + sci(w.value) + " (tol 1e-12)"};
  });

  criterion("7", "identity suites, 200 instances each, k <= 12", 10.0, [] {
    IdentityCheckOptions opts;
    opts.max_length = 12;
    const IdentityReport r = run_identity_checks(42, 200, opts);
    std::string detail;
    bool ok = r.ok();
    for (const auto& s : r.suites) {
      ok = ok && s.instances == 200 && s.max_residual <= 1e-10;
      detail += s.name + " " + sci(s.max_residual) + "; ";
    }
    return Outcome{ok, detail + "tol 1e-10"};
  });

  criterion("8", "Newton vs brute-force oracle on 50 convex quadratics", 60.0, [] {
    std::mt19937_64 rng(8);
    Worst w;
    bool converged = true;
    for (int i = 0; i < 50; ++i) {
      const ProblemSpec p = fixtures::random_quadratic(rng);
      const Solution a = solve_el(p);
      const Solution b = brute_force_minimize(p);
      converged = converged && a.converged;
      for (int j = p.first_unknown(); j <= p.last_unknown(); ++j) w.add(a.y[j], b.y[j]);
      if (a.converged) minimizers.push_back(a);
      if (b.converged) minimizers.push_back(b);
    }
    return Outcome{converged && w.value <= 1e-6, "max per-unknown difference " + sci(w.value) + " (tol 1e-6)"};
  });

  criterion("9", "Legendre condition at minimizers; negative control", 1.0, [] {
    int satisfied = 0;
    double worst = INFINITY;
    for (const Solution& s : minimizers) {
      satisfied += s.legendre.satisfied ? 1 : 0;
      worst = std::min(worst, s.legendre.min);
    }
    const ProblemSpec neg(Grid(0, 4), 0.5, 0.5, Boundary::fixed(0), Boundary::fixed(1), Lagrangian::parse("-v^2"));
    const Solution n = solve_el(neg);
    const bool control = !n.legendre.satisfied;
    const bool ok = !minimizers.empty() && satisfied == static_cast<int>(minimizers.size()) && control;
    return Outcome{ok, std::to_string(satisfied) + "/" + std::to_string(minimizers.size()) +
                           " satisfied (smallest lhs " + sci(worst) + "); -v^2 control " +
                           (control ? "rejected" : "NOT rejected")};
  });

  criterion("10", "AD partials vs central differences, 500 pairs", 5.0, [] {
    oracle::ExpressionGenerator gen(10);
    double first = 0.0, second = 0.0;
    for (int i = 0; i < 500; ++i) {
      const Expression e = Expression::parse(gen.next());
      const double t = gen.uniform(-1, 1);
      const std::vector<double> x{gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)};
      const oracle::Field f = [&](const std::vector<double>& z) { return e.eval(t, z[0], z[1], z[2]); };
      const SecondOrderValue s = e.eval_with_partials(t, x[0], x[1], x[2]);
      const auto g = oracle::gradient(f, x);
      for (std::size_t a = 0; a < 3; ++a) {
        first = std::max(first, std::abs(s.grad[a] - g[a]) / std::max(1.0, std::abs(g[a])));
        for (std::size_t b = 0; b < 3; ++b) {
          const double h = oracle::second_partial(f, x, a, b);
          second = std::max(second, std::abs(s.hess[a][b] - h) / std::max(1.0, std::abs(h)));
        }
      }
    }
    return Outcome{first <= 1e-6 && second <= 1e-4,
                   "first order " + sci(first) + " (tol 1e-6), second order " + sci(second) + " (tol 1e-4)"};
  });

  criterion("b3/b4", "Example 1 polynomial formulas vs solver and reference values", 1.0, [] {
    Worst formula_vs_solver, formula_vs_table;
    for (std::size_t r = 0; r < reference::kAlphas.size(); ++r) {
      const double alpha = reference::kAlphas[r];
      const auto b3 = reference::example1_b3(alpha, 0.0, 1.0);
      const Solution s3 = solve_el(fixtures::example1(3, alpha));
      formula_vs_solver.add(s3.y[1], b3[0]);
      formula_vs_solver.add(s3.y[2], b3[1]);
      const auto b4 = reference::example1_b4(alpha, 0.0, 1.0);
      const Solution s4 = solve_el(fixtures::example1(4, alpha));
      for (int i = 0; i < 3; ++i) formula_vs_solver.add(s4.y[i + 1], b4[static_cast<std::size_t>(i)]);
      const auto& row = reference::kExample1[r];
      formula_vs_table.add(b4[0], row.y1);
      formula_vs_table.add(b4[1], row.y2);
      formula_vs_table.add(b4[2], row.y3);
    }
    const bool ok = formula_vs_solver.value <= 1e-8 && formula_vs_table.value <= 1e-8;
    return Outcome{ok, "formula vs solver " + sci(formula_vs_solver.value) + ", formula vs table " +
                           sci(formula_vs_table.value) + " (tol 1e-8)"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
