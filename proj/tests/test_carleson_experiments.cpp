#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>
#include <numbers>

#include "test_util.hpp"

using namespace oscilab;

namespace {
BandMeasureSpec builtin_spec(const Field& f) { return {homogeneous_phase(2.0), prop43_amplitude(1, 2.0), Point{}, 2, 0, f}; }
}  // namespace

TEST(BandMeasure, ZeroDataGivesZeroMeasure) {
  const Grid g = make_grid(1, 128, std::numbers::pi);
  const auto mu = build_prop43_measure(builtin_spec(Field::zeros(g)));
  EXPECT_FALSE(mu.empty());
  EXPECT_EQ(carleson_norm(mu), 0.0);
}

TEST(BandMeasure, SingleModeHitsOnlyItsBands) {
  const Grid g = make_grid(1, 256, std::numbers::pi);
  const double xi0 = 24.0;  // psi_j = 1 on [2^{j-1}, 2^{j+1}], zero outside (2^{j-2}, 2^{j+2})
  const Field f = Field::from_function(g, [&](std::span<const double> x) { return std::polar(1.0, xi0 * x[0]); });
  const auto mu = build_prop43_measure(builtin_spec(f));
  std::map<int, double> mass;
  double top = 0.0;
  for (const auto& [l, d] : mu.levels()) {
    for (double v : d) mass[l] += v;
    top = std::max(top, mass[l]);
  }
  // bands missing xi0 only carry FFT roundoff
  for (const auto& [l, m] : mass) {
    const int j = 2 + l;
    const bool inside = xi0 > std::ldexp(1.0, j - 2) && xi0 < std::ldexp(1.0, j + 2);
    if (inside) EXPECT_GT(m, 1e-6 * top) << j;
    else EXPECT_LT(m, 1e-20 * top) << j;
  }
}

TEST(BandMeasure, IsolatedBandGivesOneLevel) {
  // xi0 = 3 lies only in psi_1..psi_3; starting at k = 3 with a shift leaves exactly one level
  const Grid g = make_grid(1, 128, std::numbers::pi);
  const Field f = Field::from_function(g, [](std::span<const double> x) { return std::polar(1.0, 3.0 * x[0]); });
  BandMeasureSpec spec = builtin_spec(f);
  spec.base_level = 3;
  Point u{};
  u[0] = 0.5;
  spec.shift = u;
  const auto mu = build_prop43_measure(spec);
  std::vector<double> mass;
  for (const auto& [l, d] : mu.levels()) {
    mass.push_back(0.0);
    for (double v : d) mass.back() += v;
  }
  const double top = *std::max_element(mass.begin(), mass.end());
  int nonzero = 0;
  for (double m : mass) nonzero += m > 1e-20 * top;
  EXPECT_EQ(nonzero, 1);
}

TEST(BandMeasure, DensitiesNonnegativeAndQuadratic) {
  const Grid g = make_grid(1, 256, std::numbers::pi);
  const Field f = random_sign_field(g, CounterRng(1, "signs"));
  const auto mu = build_prop43_measure(builtin_spec(f));
  const auto mu2 = build_prop43_measure(builtin_spec(scaled(f, 2.0)));
  for (const auto& [l, d] : mu.levels()) {
    const auto& d2 = mu2.levels().at(l);
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_GE(d[i], 0.0);
      EXPECT_NEAR(d2[i], 4.0 * d[i], 1e-12 * (1.0 + d[i]));
    }
  }
  EXPECT_NEAR(carleson_norm(mu2), 4.0 * carleson_norm(mu), 1e-12 * carleson_norm(mu2));
}

TEST(BandMeasure, SpecChecks) {
  const Grid g = make_grid(1, 64, std::numbers::pi);
  BandMeasureSpec spec = builtin_spec(Field::zeros(g));
  spec.amplitude = prop43_amplitude(1, 1.0);  // order -1/2, but -n s / 2 = -1
  EXPECT_THROW(build_prop43_measure(spec), error);
  spec = builtin_spec(Field::zeros(g));
  spec.level_count = 40;
  EXPECT_THROW(build_prop43_measure(spec), error);
  spec = builtin_spec(Field::zeros(g));
  spec.amplitude = japanese_bracket_amplitude(-1.0, 2, 1);
  EXPECT_THROW(build_prop43_measure(spec), error);
}

TEST(DecayExperiment, ZeroAmplitudeIsDegenerate) {
  const Grid g = make_grid(1, 256, std::numbers::pi);
  BandMeasureSpec spec = builtin_spec(random_sign_field(g, CounterRng(2, "signs")));
  spec.amplitude = constant_amplitude(0.0, 1, 1).with_order(-1.0);
  const auto rep = decay_experiment(spec, {2, 3, 4, 5});
  EXPECT_TRUE(rep.degenerate);
  EXPECT_TRUE(std::isnan(rep.slope));
  for (double v : rep.norms) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(decay_experiment(spec, {2, 3, 4}), error);
}

TEST(DecayExperiment, BuiltinFamilyDecays) {
  const auto fam = carleson_builtin_family(42, 5);
  ASSERT_EQ(fam.draws.size(), 5u);
  EXPECT_LE(fam.mean_slope, -0.2);
  for (const auto& d : fam.draws) {
    EXPECT_DOUBLE_EQ(d.predicted_max, 1.0);
    for (std::size_t i = 1; i < d.norms.size(); ++i) EXPECT_LE(d.norms[i], 1.1 * d.norms[i - 1]);
  }
}

TEST(DecayExperiment, FrozenBuiltinSlopeForSeed42) { EXPECT_NEAR(carleson_builtin_family(42, 5).mean_slope, -1.10676117972, 1e-9); }
