#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "dfcv/errors.hpp"
#include "dfcv/expr.hpp"

namespace dfcv {

/// L(t, u, v, w) together with its first and second partials in (u, v, w).
///
/// Either a parsed expression with a parameter binding (partials by forward
/// AD) or a user callable that returns the partials itself.
class Lagrangian {
 public:
  using Callback = std::function<SecondOrderValue(double t, double u, double v, double w)>;

  explicit Lagrangian(Expression e, ParameterMap params = {}) : expression_(std::move(e)), params_(std::move(params)) {
    for (const std::string& name : expression_->parameters())
      if (params_.find(name) == params_.end()) throw UnboundParameterError("parameter '" + name + "' is not bound");
    description_ = expression_->to_string();
  }

  static Lagrangian parse(std::string_view source, ParameterMap params = {}) {
    Lagrangian l(Expression::parse(source), std::move(params));
    l.description_ = std::string(source);
    return l;
  }

  Lagrangian(Callback cb, std::string description) : callback_(std::move(cb)), description_(std::move(description)) {}

  double value(double t, double u, double v, double w) const {
    if (expression_) return expression_->eval(t, u, v, w, params_);
    return callback_(t, u, v, w).value;
  }

  SecondOrderValue partials(double t, double u, double v, double w) const {
    if (expression_) return expression_->eval_with_partials(t, u, v, w, params_);
    return callback_(t, u, v, w);
  }

  bool has_expression() const noexcept { return expression_.has_value(); }
  const std::string& description() const noexcept { return description_; }
  const ParameterMap& parameters() const noexcept { return params_; }

 private:
  std::optional<Expression> expression_;
  ParameterMap params_;
  Callback callback_;
  std::string description_;
};

}  // namespace dfcv
