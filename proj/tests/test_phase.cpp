#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace oscilab;

namespace {
std::vector<double> v(std::initializer_list<double> x) { return x; }

std::vector<Point> shell_samples(int n, double lo, double hi, int count) {
  std::vector<Point> out;
  const CounterRng rng(5, "phase_samples");
  for (int i = 0; i < count; ++i) {
    Point p{};
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) {
      p[d] = rng.normal(static_cast<std::uint64_t>(i * 4 + d));
      r2 += p[d] * p[d];
    }
    const double r = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.uniform(static_cast<std::uint64_t>(i * 4 + 3)));
    for (int d = 0; d < n; ++d) p[d] *= r / std::sqrt(r2);
    out.push_back(p);
  }
  return out;
}
}  // namespace

TEST(Phase, WaveIsEuclideanNorm) {
  const auto xi = v({3.0, 4.0});
  EXPECT_DOUBLE_EQ(eval_phase(phase_from_name("wave"), xi), 5.0);
}

TEST(Phase, KleinGordonAtOrigin) {
  const auto xi = v({0.0});
  EXPECT_DOUBLE_EQ(eval_phase(klein_gordon_phase(), xi), 1.0);
  EXPECT_DOUBLE_EQ(grad_phase(klein_gordon_phase(), xi)[0], 0.0);
}

TEST(Phase, WaterWave) {
  const auto xi = v({4.0});
  EXPECT_DOUBLE_EQ(eval_phase(phase_from_name("water_wave"), xi), 2.0);
}

TEST(Phase, SchrodingerGradient) {
  const auto xi = v({1.0, 2.0});
  const Point g = grad_phase(phase_from_name("schrodinger"), xi);
  EXPECT_NEAR(g[0], 2.0, 1e-14);
  EXPECT_NEAR(g[1], 4.0, 1e-14);
}

TEST(Phase, CustomGradientMatchesSign) {
  const Phase p = custom_phase("r", 1.0, 1);
  for (double x : {3.0, -3.0}) {
    const auto xi = v({x});
    EXPECT_NEAR(grad_phase(p, xi)[0], x > 0 ? 1.0 : -1.0, 1e-6);
  }
}

TEST(Phase, CustomExpressionAgreesWithBuiltin) {
  const Phase c = custom_phase("xi1^2 + xi2^2", 2.0, 2, true);
  const Phase s = phase_from_name("schrodinger");
  for (const auto& p : shell_samples(2, 0.1, 50.0, 32)) {
    const std::span<const double> xi(p.data(), 2);
    EXPECT_NEAR(c(xi), s(xi), 1e-12 * s(xi));
    const Point a = c.grad(xi), b = s.grad(xi);
    EXPECT_NEAR(a[0], b[0], 1e-5 * (1.0 + std::abs(b[0])));
  }
}

TEST(Phase, UnknownNameIsConfigError) { EXPECT_THROW(phase_from_name("schrodinger_typo"), config_error); }

TEST(Phase, ScaledPhase) {
  const Phase p = phase_from_name("schrodinger").scaled(-1.0);
  const auto xi = v({3.0});
  EXPECT_DOUBLE_EQ(p(xi), -9.0);
}

TEST(OrderBounds, SchrodingerZerothOrderConstantIsOne) {
  const auto rep = verify_order_bounds(phase_from_name("schrodinger"), 2.0, 2, shell_samples(2, 0.5, 100.0, 64), 2);
  const int a0[2] = {0, 0};
  EXPECT_NEAR(rep.constant(a0), 1.0, 1e-12);
  const int a11[2] = {1, 1};
  EXPECT_NEAR(rep.constant(a11), 0.0, 1e-4);
  const int a20[2] = {2, 0};
  EXPECT_NEAR(rep.constant(a20), 2.0, 1e-4);
}

TEST(OrderBounds, WaveFirstOrderConstantIsOne) {
  const auto rep = verify_order_bounds(phase_from_name("wave"), 1.0, 1, shell_samples(1, 0.5, 100.0, 32), 1);
  const int a1[1] = {1};
  EXPECT_NEAR(rep.constant(a1), 1.0, 1e-12);
}

TEST(OrderBounds, KleinGordonFinite) {
  const auto rep = verify_order_bounds(klein_gordon_phase(), 1.0, 2, shell_samples(2, 1.0, 64.0, 200), 2);
  EXPECT_EQ(rep.bounds.size(), 6u);
  for (const auto& b : rep.bounds) {
    EXPECT_TRUE(std::isfinite(b.constant));
    EXPECT_LE(b.constant, 2.0);
  }
}

TEST(OrderBounds, RejectsOriginAndTooFewSamples) {
  auto s = shell_samples(1, 1.0, 2.0, 8);
  s[0] = Point{};
  EXPECT_THROW(verify_order_bounds(phase_from_name("wave"), 1.0, 1, s, 1), error);
  EXPECT_THROW(verify_order_bounds(phase_from_name("wave"), 1.0, 1, shell_samples(1, 1.0, 2.0, 4), 1), error);
}
