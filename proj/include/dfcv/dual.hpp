#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace dfcv {

/// First-order forward-mode dual number with a dynamic number of tangent
/// directions. An empty tangent vector stands for a constant, so
/// default-constructed values act as an additive zero of any width.
class Dual {
 public:
  Dual() = default;
  Dual(double value) : value_(value) {}  // NOLINT: implicit lift of constants
  Dual(double value, std::vector<double> tangent) : value_(value), tangent_(std::move(tangent)) {}

  /// Independent variable number `index` out of `width` directions.
  static Dual variable(double value, std::size_t index, std::size_t width) {
    std::vector<double> t(width, 0.0);
    t[index] = 1.0;
    return Dual(value, std::move(t));
  }

  double value() const noexcept { return value_; }
  const std::vector<double>& tangent() const noexcept { return tangent_; }
  double derivative(std::size_t i) const noexcept { return i < tangent_.size() ? tangent_[i] : 0.0; }

  friend Dual operator+(const Dual& a, const Dual& b) { return combine(a, 1.0, b, 1.0, a.value_ + b.value_); }
  friend Dual operator-(const Dual& a, const Dual& b) { return combine(a, 1.0, b, -1.0, a.value_ - b.value_); }
  friend Dual operator-(const Dual& a) {
    Dual r(-a.value_, a.tangent_);
    for (double& x : r.tangent_) x = -x;
    return r;
  }
  friend Dual operator*(double s, const Dual& a) {
    Dual r(s * a.value_, a.tangent_);
    for (double& x : r.tangent_) x *= s;
    return r;
  }
  friend Dual operator*(const Dual& a, double s) { return s * a; }
  friend Dual operator*(const Dual& a, const Dual& b) { return combine(a, b.value_, b, a.value_, a.value_ * b.value_); }

 private:
  static Dual combine(const Dual& a, double sa, const Dual& b, double sb, double value) {
    std::vector<double> t(std::max(a.tangent_.size(), b.tangent_.size()), 0.0);
    for (std::size_t i = 0; i < a.tangent_.size(); ++i) t[i] += sa * a.tangent_[i];
    for (std::size_t i = 0; i < b.tangent_.size(); ++i) t[i] += sb * b.tangent_[i];
    return Dual(value, std::move(t));
  }

  double value_ = 0.0;
  std::vector<double> tangent_;
};

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.value(); }

}  // namespace dfcv
