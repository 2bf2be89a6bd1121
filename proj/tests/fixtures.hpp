#pragma once

// Problem builders shared by the unit tests and the acceptance binary.

#include <random>
#include <string>

#include "dfcv/dfcv.hpp"

namespace fixtures {

inline dfcv::ProblemSpec example1(int b, double alpha, double A = 0.0, double B = 1.0) {
  return dfcv::ProblemSpec(dfcv::Grid(0, b), alpha, alpha, dfcv::Boundary::fixed(A), dfcv::Boundary::fixed(B),
                           dfcv::Lagrangian::parse("v^2"));
}

inline dfcv::ProblemSpec example2(double alpha, double beta, double g1 = 1.0, double g2 = 1.0, double A = 0.0,
                                  double B = 1.0) {
  return dfcv::ProblemSpec(dfcv::Grid(0, 2), alpha, beta, dfcv::Boundary::fixed(A), dfcv::Boundary::fixed(B),
                           dfcv::Lagrangian::parse("gamma1*v^2 + gamma2*w^2", {{"gamma1", g1}, {"gamma2", g2}}));
}

inline dfcv::ProblemSpec example3(double alpha) {
  return dfcv::ProblemSpec(dfcv::Grid(0, 2), alpha, alpha, dfcv::Boundary::fixed(0), dfcv::Boundary::fixed(0),
                           dfcv::Lagrangian::parse("v^2/2 - u"));
}

/// Convex quadratic Lagrangian c1 v^2 + c2 w^2 + c3 u^2 + c4 u + c5 v + t w with
/// c1, c2, c3 > 0, k in {2, 3, 4}, random orders and boundary data. One
/// endpoint in four is free.
inline dfcv::ProblemSpec random_quadratic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto order = [&] { return 1.0 - 0.95 * unit(rng); };  // (0.05, 1]
  auto coeff = [&] { return 0.1 + 1.9 * unit(rng); };
  auto data = [&] { return -2.0 + 4.0 * unit(rng); };
  const int k = 2 + std::uniform_int_distribution<int>(0, 2)(rng);
  const double alpha = order(), beta = order();
  dfcv::ParameterMap params{{"c1", coeff()}, {"c2", coeff()}, {"c3", coeff()}, {"c4", data()}, {"c5", data()}};
  const dfcv::Boundary A = unit(rng) < 0.25 ? dfcv::Boundary::free() : dfcv::Boundary::fixed(data());
  const dfcv::Boundary B = unit(rng) < 0.25 ? dfcv::Boundary::free() : dfcv::Boundary::fixed(data());
  return dfcv::ProblemSpec(dfcv::Grid(0, k), alpha, beta, A, B,
                           dfcv::Lagrangian::parse("c1*v^2 + c2*w^2 + c3*u^2 + c4*u + c5*v + t*w", params));
}

}  // namespace fixtures
