#pragma once

// dfcv command line. run() is the whole program; main() only forwards argv so
// the tests can drive it in-process.
//
// Exit codes: 0 success, 1 input error, 2 non-convergence, 3 identity violation.

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfcv/dfcv.hpp"
#include "problem_file.hpp"

namespace dfcv::cli {

enum ExitCode : int { ok = 0, input_error = 1, not_converged = 2, identity_violation = 3 };

inline std::string fmt(double x, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

inline std::string csv_header(int length) {
  std::string h = "alpha,beta";
  for (int i = 0; i <= length; ++i) h += ",y" + std::to_string(i);
  return h + ",objective,residual,legendre_min,converged";
}

/// One ResultRow: k + 7 columns. A failed solve prints nan for every number.
inline std::vector<std::string> result_row(double alpha, double beta, int length, const Solution* s, int digits) {
  const std::string nan = "nan";
  std::vector<std::string> row{fmt(alpha, digits), fmt(beta, digits)};
  for (int i = 0; i <= length; ++i) row.push_back(s ? fmt(s->y[i], digits) : nan);
  row.push_back(s ? fmt(s->objective, digits) : nan);
  row.push_back(s ? fmt(s->residual_inf_norm, digits) : nan);
  row.push_back(s ? fmt(s->legendre.min, digits) : nan);
  row.push_back(s && s->converged ? "1" : "0");
  return row;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print_csv(std::ostream& out) const {
    for (const auto& r : rows_) {
      for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
      out << '\n';
    }
  }

  void print_aligned(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_)
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (width.size() <= c) width.push_back(0);
        width[c] = std::max(width[c], r[c].size());
      }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t c = 0; c < r.size(); ++c) {
        line += r[c];
        if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
      }
      out << line << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline Table result_table(int length, bool csv) {
  if (csv) {
    std::vector<std::string> h;
    std::stringstream ss(csv_header(length));
    for (std::string col; std::getline(ss, col, ',');) h.push_back(col);
    return Table(std::move(h));
  }
  std::vector<std::string> h{"alpha", "beta"};
  for (int i = 0; i <= length; ++i) h.push_back("y(" + std::to_string(i) + ")");
  for (const char* c : {"objective", "residual", "legendre_min", "converged"}) h.emplace_back(c);
  return Table(std::move(h));
}

inline void print(const Table& t, bool csv, std::ostream& out) {
  if (csv)
    t.print_csv(out);
  else
    t.print_aligned(out);
}

inline int digits(bool csv) { return csv ? 17 : 14; }

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ValidationError("not a number: '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) throw ValidationError("empty alpha list");
  return out;
}

/// lo:hi:step, inclusive of hi up to rounding.
inline std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(parse_list(item).at(0));
  if (parts.size() != 3) throw ValidationError("range must be lo:hi:step");
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0) || !(lo <= hi)) throw ValidationError("range needs lo <= hi and step > 0");
  const double count = std::floor((hi - lo) / step + 1e-9);
  if (count > 1e6) throw ValidationError("range has too many points");
  std::vector<double> out;
  for (int i = 0; i <= static_cast<int>(count); ++i) out.push_back(std::min(hi, lo + i * step));
  return out;
}

struct Settings {
  std::string file;
  std::optional<double> alpha, beta;
  std::string alphas, range;
  bool csv = false;
  double tol = 1e-12;
  int max_iter = 100;
  double lo = 0.01, hi = 1.0;
  std::uint64_t seed = 42;
  int cases = 100;
  double fault = 0.0;
  int table = 0;

  SolverOptions solver() const {
    SolverOptions o;
    o.residual_tolerance = tol;
    o.max_iterations = max_iter;
    o.seed = seed;
    o.validate();
    return o;
  }
};

inline int cmd_solve(const Settings& s, std::ostream& out) {
  const ProblemFile pf = load_problem(s.file);
  const ProblemSpec p = pf.spec(s.alpha.value_or(pf.alpha), s.beta);
  const Solution sol = solve_el(p, s.solver());
  Table t = result_table(p.length(), s.csv);
  t.add(result_row(p.alpha(), p.beta(), p.length(), &sol, digits(s.csv)));
  print(t, s.csv, out);
  return sol.converged ? ok : not_converged;
}

inline int cmd_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
  const ProblemFile pf = load_problem(s.file);
  if (s.alphas.empty() == s.range.empty()) throw ValidationError("give exactly one of --alphas and --range");
  const std::vector<double> alphas = s.alphas.empty() ? parse_range(s.range) : parse_list(s.alphas);
  for (double a : alphas)
    if (!(a > 0.0 && a <= 1.0)) throw ValidationError("alpha " + fmt(a, 17) + " outside (0, 1]");
  const bool link = !s.beta && !pf.beta;
  const ProblemSpec p = pf.spec(alphas.front(), s.beta);
  const auto entries = alpha_sweep(p, alphas, link, s.solver());
  Table t = result_table(p.length(), s.csv);
  bool all = true;
  for (const auto& e : entries) {
    const Solution* sol = e.solution ? &*e.solution : nullptr;
    if (!sol) err << "alpha = " << fmt(e.alpha, 17) << ": " << e.error << '\n';
    all = all && sol && sol->converged;
    t.add(result_row(e.alpha, e.beta, p.length(), sol, digits(s.csv)));
  }
  print(t, s.csv, out);
  return all ? ok : not_converged;
}

inline int cmd_min_alpha(const Settings& s, std::ostream& out) {
  const ProblemFile pf = load_problem(s.file);
  if (!(s.lo > 0.0 && s.lo < s.hi && s.hi <= 1.0))
    throw ValidationError("alpha range must satisfy 0 < lo < hi <= 1, got lo = " + fmt(s.lo, 17) + ", hi = " + fmt(s.hi, 17));
  const bool link = !s.beta && !pf.beta;
  const ProblemSpec p = pf.spec(s.hi, s.beta);
  const AlphaMinimum m = minimize_objective_over_alpha(p, s.lo, s.hi, link, s.solver());
  out << "alpha* = " << fmt(m.alpha, digits(s.csv)) << '\n';
  Table t = result_table(p.length(), s.csv);
  t.add(result_row(m.alpha, link ? m.alpha : p.beta(), p.length(), &m.solution, digits(s.csv)));
  print(t, s.csv, out);
  return m.solution.converged ? ok : not_converged;
}

inline int cmd_check(const Settings& s, std::ostream& out) {
  if (s.cases < 1) throw ValidationError("--cases must be >= 1");
  IdentityCheckOptions opts;
  opts.coefficient_fault = s.fault;
  const IdentityReport r = run_identity_checks(s.seed, s.cases, opts);
  Table t({"suite", "instances", "max_residual"});
  for (const auto& suite : r.suites) t.add({suite.name, std::to_string(suite.instances), fmt(suite.max_residual, 3)});
  t.print_aligned(out);
  out << "tolerance " << fmt(opts.tolerance, 3) << '\n';
  for (const auto& v : r.violations)
    out << "VIOLATION " << v.suite << " case " << v.case_index << " length " << v.length << " order "
        << fmt(v.order, 17) << " residual " << fmt(v.residual, 3) << '\n';
  return r.ok() ? ok : identity_violation;
}

/// The worked examples at alpha = 0.25, 0.5, 0.75, 1.
inline int cmd_table(const Settings& s, std::ostream& out) {
  const std::vector<double> alphas{0.25, 0.5, 0.75, 1.0};
  std::optional<ProblemSpec> p;
  switch (s.table) {
    case 1:
      p.emplace(Grid(0, 4), 1.0, 1.0, Boundary::fixed(0), Boundary::fixed(1), Lagrangian::parse("v^2"));
      break;
    case 2:
      p.emplace(Grid(0, 2), 1.0, 1.0, Boundary::fixed(0), Boundary::fixed(1),
                Lagrangian::parse("gamma1*v^2 + gamma2*w^2", {{"gamma1", 1.0}, {"gamma2", 1.0}}));
      break;
    case 3:
      p.emplace(Grid(0, 2), 1.0, 1.0, Boundary::fixed(0), Boundary::fixed(0), Lagrangian::parse("v^2/2 - u"));
      break;
    default:
      throw ValidationError("table must be 1, 2 or 3");
  }
  const int k = p->length();
  const auto entries = alpha_sweep(*p, alphas, true, s.solver());
  bool all = true;
  if (s.csv) {
    Table t = result_table(k, true);
    for (const auto& e : entries) {
      all = all && e.solution && e.solution->converged;
      t.add(result_row(e.alpha, e.beta, k, e.solution ? &*e.solution : nullptr, 17));
    }
    t.print_csv(out);
  } else {
    std::vector<std::string> h{"alpha"};
    for (int i = 1; i < k; ++i) h.push_back("y(" + std::to_string(i) + ")");
    h.emplace_back("objective");
    Table t(std::move(h));
    for (const auto& e : entries) {
      all = all && e.solution && e.solution->converged;
      std::vector<std::string> row{fmt(e.alpha, 14)};
      for (int i = 1; i < k; ++i) row.push_back(e.solution ? fmt(e.solution->y[i], 14) : "nan");
      row.push_back(e.solution ? fmt(e.solution->objective, 14) : "nan");
      t.add(std::move(row));
    }
    t.print_aligned(out);
    if (s.table == 2) {
      const AlphaMinimum m = minimize_objective_over_alpha(*p, 0.01, 1.0, true, s.solver());
      out << "minimizing alpha = " << fmt(m.alpha, 14) << ", objective = " << fmt(m.solution.objective, 14) << '\n';
    }
  }
  return all ? ok : not_converged;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete fractional calculus of variations", "dfcv"};
  app.require_subcommand(1);
  Settings s;

  auto add_solver_flags = [&](CLI::App* c) {
    c->add_option("--tol", s.tol, "Newton residual tolerance (infinity norm)")->capture_default_str();
    c->add_option("--max-iter", s.max_iter, "Newton iteration limit")->capture_default_str();
    c->add_flag("--csv", s.csv, "CSV output");
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve the Euler-Lagrange system of a problem file");
  solve->add_option("file", s.file, "Problem file (JSON)")->required();
  solve->add_option("--alpha", s.alpha, "Override alpha");
  solve->add_option("--beta", s.beta, "Override beta");
  add_solver_flags(solve);

  CLI::App* sweep = app.add_subcommand("sweep", "Solve at several values of alpha");
  sweep->add_option("file", s.file, "Problem file (JSON)")->required();
  sweep->add_option("--alphas", s.alphas, "Comma-separated alphas");
  sweep->add_option("--range", s.range, "lo:hi:step");
  sweep->add_option("--beta", s.beta, "Fixed beta (default: beta = alpha unless the file sets beta)");
  add_solver_flags(sweep);

  CLI::App* min_alpha = app.add_subcommand("min-alpha", "Golden-section search for the alpha minimizing the objective");
  min_alpha->add_option("file", s.file, "Problem file (JSON)")->required();
  min_alpha->add_option("--lo", s.lo, "Lower end of the alpha bracket")->capture_default_str();
  min_alpha->add_option("--hi", s.hi, "Upper end of the alpha bracket")->capture_default_str();
  min_alpha->add_option("--beta", s.beta, "Fixed beta (default: beta = alpha unless the file sets beta)");
  add_solver_flags(min_alpha);

  CLI::App* check = app.add_subcommand("check", "Randomized self-test of the operator identities");
  check->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  check->add_option("--cases", s.cases, "Instances per suite")->capture_default_str();
  check->add_option("--inject-fault", s.fault, "Relative error added to reference coefficients")->group("");

  CLI::App* table = app.add_subcommand("table", "Reproduce a worked-example table (1, 2 or 3)");
  table->add_option("number", s.table, "Table number")->required();
  add_solver_flags(table);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : input_error;
  }

  try {
    if (*solve) return cmd_solve(s, out);
    if (*sweep) return cmd_sweep(s, out, err);
    if (*min_alpha) return cmd_min_alpha(s, out);
    if (*check) return cmd_check(s, out);
    return cmd_table(s, out);
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return not_converged;
  } catch (const SingularJacobianError& e) {
    err << "error: " << e.what() << '\n';
    return not_converged;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  }
}

}  // namespace dfcv::cli
