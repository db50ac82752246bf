#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "thinplate/lbfgs.hpp"

using namespace thinplate;

namespace {

double rosenbrock(std::span<const double> x, std::span<double> g) {
  const double a = 1.0 - x[0];
  const double b = x[1] - x[0] * x[0];
  if (!g.empty()) {
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
  }
  return a * a + 100.0 * b * b;
}

}  // namespace

TEST(Lbfgs, Rosenbrock) {
  const LbfgsResult r = lbfgs_minimize(rosenbrock, {-1.2, 1.0});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-7);
  EXPECT_NEAR(r.x[1], 1.0, 1e-7);
}

TEST(Lbfgs, HistoryNonincreasing) {
  const LbfgsResult r = lbfgs_minimize(rosenbrock, {-1.2, 1.0});
  // Rises are allowed only at the roundoff level of the fallback acceptance.
  const double allowance = LbfgsOptions{}.roundoff;
  for (std::size_t k = 1; k < r.history.size(); ++k)
    EXPECT_LE(r.history[k], r.history[k - 1] + allowance * std::abs(r.history[k - 1]));
}

TEST(Lbfgs, RejectsInfiniteSteps) {
  // f = x - log x is +∞ for x ≤ 0; the first full step overshoots into it.
  auto f = [](std::span<const double> x, std::span<double> g) {
    if (x[0] <= 0.0) return std::numeric_limits<double>::infinity();
    if (!g.empty()) g[0] = 1.0 - 1.0 / x[0];
    return x[0] - std::log(x[0]);
  };
  const LbfgsResult r = lbfgs_minimize(f, {0.01});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-7);
}

TEST(Lbfgs, NonFiniteStartThrows) {
  auto f = [](std::span<const double>, std::span<double>) { return std::numeric_limits<double>::infinity(); };
  EXPECT_THROW(lbfgs_minimize(f, {0.0}), std::invalid_argument);
}

TEST(Lbfgs, InconsistentGradientStarves) {
  // The reported gradient points uphill, so no step can decrease f.
  auto f = [](std::span<const double> x, std::span<double> g) {
    if (!g.empty()) g[0] = -2.0 * x[0];
    return x[0] * x[0];
  };
  EXPECT_THROW(lbfgs_minimize(f, {1.0}), NumericalFailure);
}

TEST(Lbfgs, ProjectorKeepsGauge) {
  // f depends on x0 - x1 only; the projector pins the mean.
  auto f = [](std::span<const double> x, std::span<double> g) {
    const double d = x[0] - x[1] - 2.0;
    if (!g.empty()) {
      g[0] = 2.0 * d;
      g[1] = -2.0 * d;
    }
    return d * d;
  };
  auto project = [](std::span<double> x) {
    const double m = 0.5 * (x[0] + x[1]);
    x[0] -= m;
    x[1] -= m;
  };
  const LbfgsResult r = lbfgs_minimize(f, {5.0, 1.0}, {}, project);
  EXPECT_NEAR(r.x[0], 1.0, 1e-8);
  EXPECT_NEAR(r.x[1], -1.0, 1e-8);
}
