#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dfcv/errors.hpp"

namespace dfcv {

/// Uniform unit-step time scale {a, a+1, ..., a+k}.
///
/// Only index arithmetic matters to the operators; the origin is carried
/// along so that the Lagrangian can be evaluated at the true time t = a + i.
/// The kappa-truncations drop the last one or two points: indices 0..k-1
/// and 0..k-2 respectively.
class Grid {
 public:
  Grid(double origin, int length) : origin_(origin), length_(length) {
    if (length < 2) throw ValidationError("grid length k must be >= 2, got " + std::to_string(length));
    if (!std::isfinite(origin)) throw ValidationError("grid origin must be finite");
  }

  double origin() const noexcept { return origin_; }
  double end() const noexcept { return origin_ + length_; }
  /// Number of unit steps k; the grid has k + 1 points.
  int length() const noexcept { return length_; }
  int size() const noexcept { return length_ + 1; }
  double point(int i) const noexcept { return origin_ + i; }

  bool operator==(const Grid&) const = default;

 private:
  double origin_;
  int length_;
};

/// Real (or dual-valued) samples at every point of a grid.
template <class T = double>
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.size())
      throw ValidationError("grid function needs " + std::to_string(grid_.size()) + " values, got " +
                            std::to_string(values_.size()));
    if constexpr (std::is_floating_point_v<T>) {
      for (const T& x : values_)
        if (!std::isfinite(x)) throw ValidationError("grid function values must be finite");
    }
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const T> values() const noexcept { return values_; }
  const T& operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  const T& at(int i) const {
    if (i < 0 || i >= grid_.size()) throw IndexError("grid index " + std::to_string(i) + " out of range");
    return values_[static_cast<std::size_t>(i)];
  }

 private:
  Grid grid_;
  std::vector<T> values_;
};

}  // namespace dfcv
