#pragma once

// JSON problem files:
//
//   {
//     "a": 0, "b": 4,
//     "alpha": 0.5, "beta": 0.5,                  (beta optional)
//     "boundary": {"initial": 0, "terminal": "free"},
//     "lagrangian": "gamma1*v^2 + gamma2*w^2",
//     "params": {"gamma1": 1, "gamma2": 1}         (optional)
//   }
//
// docs/problem.schema.json has the formal schema.

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dfcv/dfcv.hpp"

namespace dfcv::cli {

/// Malformed or invalid problem file. Always an input error.
class ProblemFileError : public Error {
 public:
  using Error::Error;
};

struct ProblemFile {
  double a = 0.0;
  int length = 0;
  double alpha = 1.0;
  std::optional<double> beta;
  Boundary initial = Boundary::free();
  Boundary terminal = Boundary::free();
  std::string lagrangian;
  ParameterMap params;

  /// beta = alpha unless the file fixed beta.
  ProblemSpec spec(double alpha_, std::optional<double> beta_ = std::nullopt) const {
    const double b = beta_ ? *beta_ : (beta ? *beta : alpha_);
    Lagrangian L = [&] {
      try {
        return Lagrangian::parse(lagrangian, params);
      } catch (const SyntaxError& e) {
        throw ProblemFileError("lagrangian: " + std::string(e.what()));
      }
    }();
    return ProblemSpec(Grid(a, length), alpha_, b, initial, terminal, std::move(L));
  }
  ProblemSpec spec() const { return spec(alpha); }
};

namespace detail {

// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline double number(const nlohmann::json& j, const char* field) {
  if (!j.is_number()) throw ProblemFileError(std::string("field '") + field + "' must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ProblemFileError(std::string("field '") + field + "' must be finite");
  return x;
}

inline Boundary boundary(const nlohmann::json& j, const char* field) {
  if (j.is_string()) {
    if (j.get<std::string>() == "free") return Boundary::free();
    throw ProblemFileError(std::string("boundary.") + field + " must be a number or \"free\"");
  }
  return Boundary::fixed(number(j, field));
}

inline double order(const nlohmann::json& j, const char* field) {
  const double x = number(j, field);
  if (!(x > 0.0 && x <= 1.0)) throw ProblemFileError(std::string("field '") + field + "' must lie in (0, 1]");
  return x;
}

}  // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is one past the offending character.
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ProblemFileError("JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
  if (!j.is_object()) throw ProblemFileError("problem file must contain a JSON object");
  for (const char* field : {"a", "b", "alpha", "boundary", "lagrangian"})
    if (!j.contains(field)) throw ProblemFileError(std::string("missing field '") + field + "'");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "a" && key != "b" && key != "alpha" && key != "beta" && key != "boundary" && key != "lagrangian" &&
        key != "params")
      throw ProblemFileError("unknown field '" + key + "'");
  }

  ProblemFile p;
  p.a = detail::number(j["a"], "a");
  const double b = detail::number(j["b"], "b");
  const double span = b - p.a;
  const double k = std::round(span);
  if (std::abs(span - k) > 1e-9 * std::max(1.0, std::abs(span)) || k < 2.0)
    throw ProblemFileError("b - a must be an integer >= 2");
  if (k > 1e6) throw ProblemFileError("b - a is too large");
  p.length = static_cast<int>(k);
  p.alpha = detail::order(j["alpha"], "alpha");
  if (j.contains("beta")) p.beta = detail::order(j["beta"], "beta");

  const auto& bc = j["boundary"];
  if (!bc.is_object() || !bc.contains("initial") || !bc.contains("terminal"))
    throw ProblemFileError("boundary must be an object with 'initial' and 'terminal'");
  p.initial = detail::boundary(bc["initial"], "initial");
  p.terminal = detail::boundary(bc["terminal"], "terminal");

  if (!j["lagrangian"].is_string()) throw ProblemFileError("field 'lagrangian' must be a string");
  p.lagrangian = j["lagrangian"].get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ProblemFileError("field 'params' must be an object");
    for (const auto& [name, value] : j["params"].items()) p.params[name] = detail::number(value, name.c_str());
  }
  // Surfaces syntax and binding errors at load time.
  (void)p.spec();
  return p;
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemFileError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problem(ss.str());
  } catch (const Error& e) {
    throw ProblemFileError(path + ": " + e.what());
  }
}

}  // namespace dfcv::cli
