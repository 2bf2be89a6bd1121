#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dfcv/dfcv.hpp"
#include "oracle.hpp"

using namespace dfcv;

namespace {

ProblemSpec make(int k, double alpha, double beta, Boundary A, Boundary B, const char* L, ParameterMap params = {}) {
  return ProblemSpec(Grid(0, k), alpha, beta, A, B, Lagrangian::parse(L, std::move(params)));
}

// Derivative of the functional with respect to every grid value; fixed ends
// are released by solving the same problem with both ends free.
std::vector<double> functional_gradient(const ProblemSpec& p, const std::vector<double>& y) {
  const ProblemSpec open = ProblemSpec(p.grid(), p.alpha(), p.beta(), Boundary::free(), Boundary::free(), p.lagrangian());
  return oracle::gradient([&](const std::vector<double>& z) { return functional_value(open, z); }, y);
}

std::vector<double> random_values(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (double& x : y) x = d(rng);
  return y;
}

const char* kSmooth = "v^2 + sin(u)*w + u^2*w^2/4 + t*v + cos(v + w)";

}  // namespace

TEST(ProblemSpec, Validation) {
  EXPECT_THROW(make(2, 0.0, 0.5, Boundary::fixed(0), Boundary::fixed(1), "v^2"), ValidationError);
  EXPECT_THROW(make(2, 0.5, 1.5, Boundary::fixed(0), Boundary::fixed(1), "v^2"), ValidationError);
  EXPECT_THROW(Boundary::fixed(NAN), ValidationError);
  EXPECT_THROW((void)Boundary::free().value(), ConstraintError);
  const auto p = make(4, 0.5, 0.5, Boundary::free(), Boundary::fixed(1), "v^2");
  EXPECT_EQ(p.first_unknown(), 0);
  EXPECT_EQ(p.last_unknown(), 3);
  EXPECT_EQ(p.unknown_count(), 4);
}

TEST(Functional, EvaluationPointsUseTheFractionalDifferences) {
  std::mt19937_64 rng(5);
  const auto p = make(5, 0.3, 0.8, Boundary::free(), Boundary::free(), "v^2");
  const auto y = random_values(rng, 6);
  const auto pts = evaluation_points(p, std::span<const double>(y));
  ASSERT_EQ(pts.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    const auto& e = pts[static_cast<std::size_t>(i)];
    EXPECT_EQ(e.t, static_cast<double>(i));
    EXPECT_EQ(e.u, y[static_cast<std::size_t>(i) + 1]);
    EXPECT_NEAR(e.v, oracle::left_diff(y, 0.3, i), 1e-13);
    EXPECT_NEAR(e.w, oracle::right_diff(y, 0.8, i), 1e-13);
  }
}

TEST(Functional, ClassicalCase) {
  // alpha = 1: sum of squared forward differences.
  const auto p = make(4, 1.0, 1.0, Boundary::fixed(0), Boundary::fixed(1), "v^2");
  EXPECT_DOUBLE_EQ(functional_value(p, std::vector<double>{0, 0.25, 0.5, 0.75, 1}), 0.25);
}

TEST(Functional, Errors) {
  const auto p = make(2, 0.5, 0.5, Boundary::fixed(0), Boundary::fixed(1), "v^2");
  EXPECT_THROW(functional_value(p, std::vector<double>{0, 1}), GridMismatchError);
  EXPECT_THROW(functional_value(p, std::vector<double>{0, 0.5, 0.9}), BoundaryMismatchError);
  EXPECT_THROW(natural_bc_initial(p, std::vector<double>{0, 0.5, 1}), ConstraintError);
  EXPECT_THROW(natural_bc_terminal(p, std::vector<double>{0, 0.5, 1}), ConstraintError);
  EXPECT_THROW(el_residual(p, std::vector<double>{0, 0.5, 1}, 1), IndexError);
}

TEST(EulerLagrange, ResidualIsTheGradientOfTheFunctional) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> order(0.05, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int k = 2 + rep % 6;
    const double alpha = order(rng), beta = order(rng);
    const auto p = make(k, alpha, beta, Boundary::free(), Boundary::free(), kSmooth);
    const auto y = random_values(rng, k + 1);
    const auto g = functional_gradient(p, y);
    const auto r = assemble_residual(p, y);
    ASSERT_EQ(r.size(), static_cast<std::size_t>(k + 1));
    for (std::size_t j = 0; j < r.size(); ++j) EXPECT_NEAR(r[j], g[j], 1e-7 * std::max(1.0, std::abs(g[j])));
    for (int i = 0; i + 1 < k; ++i)
      EXPECT_EQ(el_residual(p, y, i), r[static_cast<std::size_t>(i) + 1]);
    EXPECT_EQ(natural_bc_initial(p, y), r.front());
    EXPECT_EQ(natural_bc_terminal(p, y), r.back());
  }
}

TEST(EulerLagrange, ClassicalResidual) {
  // alpha = beta = 1, L = v^2: residual -2 Delta^2 y(t).
  const auto p = make(3, 1.0, 1.0, Boundary::fixed(0), Boundary::fixed(9), "v^2");
  const std::vector<double> y{0, 1, 4, 9};
  EXPECT_DOUBLE_EQ(el_residual(p, y, 0), -2.0 * (4 - 2 * 1 + 0));
  EXPECT_DOUBLE_EQ(el_residual(p, y, 1), -2.0 * (9 - 2 * 4 + 1));
}

TEST(SummationByParts, HoldsOnRandomData) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> order(1e-6, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const int k = 2 + rep % 11;
    const auto f = random_values(rng, k);
    const auto g = random_values(rng, k + 1);
    EXPECT_LE(std::abs(summation_by_parts_residual(f, g, order(rng))), 1e-12);
  }
  EXPECT_THROW(summation_by_parts_residual(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 0.5), GridMismatchError);
}

TEST(Legendre, EqualsSecondDerivativeOfTheFunctional) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> order(0.05, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int k = 2 + rep % 7;
    const auto p = make(k, order(rng), order(rng), Boundary::free(), Boundary::free(), kSmooth);
    const auto y = random_values(rng, k + 1);
    const oracle::Field F = [&](const std::vector<double>& z) { return functional_value(p, z); };
    for (int i = 0; i + 1 < k; ++i) {
      const auto j = static_cast<std::size_t>(i) + 1;
      const double fd = oracle::second_partial(F, y, j, j);
      EXPECT_NEAR(legendre_lhs(p, y, i), fd, 1e-5 * std::max(1.0, std::abs(fd))) << "k=" << k << " i=" << i;
    }
  }
}

TEST(Legendre, Example1AtAlphaOne) {
  // L = v^2, alpha = 1: 2 + 2 at every interior point.
  const auto p = make(4, 1.0, 1.0, Boundary::fixed(0), Boundary::fixed(1), "v^2");
  const auto r = legendre_check(p, std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  ASSERT_EQ(r.values.size(), 3u);
  for (double v : r.values) EXPECT_DOUBLE_EQ(v, 4.0);
  EXPECT_TRUE(r.satisfied);
}

TEST(Legendre, NegativeControl) {
  const auto p = make(4, 0.5, 0.5, Boundary::fixed(0), Boundary::fixed(1), "-v^2");
  const auto r = legendre_check(p, std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  EXPECT_FALSE(r.satisfied);
  EXPECT_LT(r.min, 0.0);
}

TEST(Legendre, WeightsForEachIndex) {
  // Quadratic L: the lhs does not depend on y.
  const auto p = make(6, 0.4, 0.7, Boundary::fixed(0), Boundary::fixed(0), "v^2 + 2*w^2 + u*v");
  const auto a = legendre_check(p, std::vector<double>(7, 0.0));
  std::vector<double> y{0, 1, -2, 3, 0.5, 7, 0};
  const auto b = legendre_check(p, y);
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-12);
}
