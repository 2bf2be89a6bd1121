#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "dfcv/errors.hpp"

namespace dfcv {

/// Row-major dense square matrix.
struct DenseMatrix {
  int n = 0;
  std::vector<double> data;

  explicit DenseMatrix(int size) : n(size), data(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0.0) {}
  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r * n + c)]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r * n + c)]; }
};

/// Solves A x = b by LU factorization with partial pivoting.
/// Throws SingularJacobianError when a pivot falls below n * eps * max|A|.
inline std::vector<double> lu_solve(DenseMatrix a, std::vector<double> b) {
  const int n = a.n;
  double scale = 0.0;
  for (double x : a.data) scale = std::max(scale, std::abs(x));
  const double tiny = std::max(1, n) * std::numeric_limits<double>::epsilon() * scale;
  if (scale == 0.0 || !std::isfinite(scale)) throw SingularJacobianError("matrix is zero or not finite");

  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= tiny) throw SingularJacobianError("singular matrix at column " + std::to_string(col));
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double s = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = s / a(r, r);
  }
  return x;
}

}  // namespace dfcv
