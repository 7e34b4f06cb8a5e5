#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace oscilab;

TEST(Bump, DefiningValues) {
  EXPECT_EQ(bump(0.5), 1.0);
  EXPECT_EQ(bump(1.0), 1.0);
  EXPECT_EQ(bump(3.0), 0.0);
  EXPECT_EQ(bump(2.0), 0.0);
  EXPECT_GE(bump(1.2), bump(1.5));
  EXPECT_NEAR(bump(1.5), 0.5, 1e-15);
  for (double r = 1.0; r < 2.0; r += 0.01) EXPECT_GE(bump(r), bump(r + 0.01));
}

TEST(LittlewoodPaley, ComponentsAtTrivialPoints) {
  EXPECT_EQ(lp_component(1, 0.5), 0.0);
  EXPECT_EQ(lp_component(1, 4.0), 0.0);
  EXPECT_THROW(lp_component(-1, 1.0), error);
}

TEST(LittlewoodPaley, PartitionOfUnityOnLattice) {
  for (int n : {1, 2}) {
    const Grid g = make_grid(n, 64, 0.37);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.total(); ++i) {
      const double r = euclid(testutil::view(g.frequency(i), n));
      double s = 0.0;
      for (int j = 0; j <= lp_last_index(r); ++j) s += lp_component(j, r);
      worst = std::max(worst, std::abs(s - 1.0));
      EXPECT_EQ(lp_component(lp_last_index(r) + 1, r), 0.0);
    }
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(Cutoffs, PsiPlateauAndSupport) {
  for (int k = 1; k <= 6; ++k) {
    const double lo = std::ldexp(1.0, k - 1), hi = std::ldexp(1.0, k + 1);
    for (double t : {0.0, 0.3, 0.7, 1.0}) EXPECT_NEAR(cutoff(CutoffKind::psi, k, lo + t * (hi - lo)), 1.0, 1e-15);
    EXPECT_EQ(cutoff(CutoffKind::psi, k, std::ldexp(1.0, k - 2)), 0.0);
    EXPECT_EQ(cutoff(CutoffKind::psi, k, 0.5 * std::ldexp(1.0, k - 2)), 0.0);
    EXPECT_EQ(cutoff(CutoffKind::psi, k, std::ldexp(1.0, k + 2)), 0.0);
  }
}

TEST(Cutoffs, ThetaAndOmega) {
  for (int k = 0; k <= 5; ++k) {
    EXPECT_EQ(cutoff(CutoffKind::theta, k, std::ldexp(1.0, k - 3)), 1.0);
    for (double r = 0.0; r < std::ldexp(1.0, k - 1); r += std::ldexp(1.0, k - 8)) {
      if (cutoff(CutoffKind::theta, k, r) > 0.0) {
        EXPECT_EQ(cutoff(CutoffKind::omega, k, r), 1.0) << k << " " << r;
      }
    }
  }
}

TEST(Cutoffs, SquaresOfPsiFormPartialPartition) {
  // psi_k^2 telescopes: sum_{k=a..b} psi_k^2 is 1 on the middle of the range
  for (double r = 16.0; r <= 256.0; r *= 1.37) {
    double s = 0.0;
    for (int k = 1; k <= 12; ++k) s += std::pow(cutoff(CutoffKind::psi, k, r), 2.0);
    EXPECT_GT(s, 0.99);
  }
}

TEST(Cutoffs, Names) {
  EXPECT_EQ(cutoff_kind_from_name("chi0"), CutoffKind::chi0);
  EXPECT_THROW(cutoff_kind_from_name("nope"), error);
}

namespace {
std::vector<AmplitudeSample> amplitude_samples(int N, int n, int count) {
  std::vector<AmplitudeSample> out;
  const auto Xis = decomposition_samples(N, n, static_cast<std::size_t>(count), CounterRng(2, "seminorm"), 1e3);
  for (const auto& Xi : Xis) out.push_back({Point{}, Xi});
  return out;
}
}  // namespace

TEST(Seminorm, JapaneseBracketRatioIsOne) {
  const auto s = amplitude_samples(2, 1, 200);
  EXPECT_NEAR(seminorm_estimate(japanese_bracket_amplitude(-0.7, 2, 1), -0.7, {0, 0}, {0}, s), 1.0, 1e-12);
}

TEST(Seminorm, ConstantHasZeroDerivative) {
  const auto s = amplitude_samples(2, 1, 100);
  EXPECT_EQ(seminorm_estimate(constant_amplitude(1.0, 2, 1), 0.0, {1, 0}, {0}, s), 0.0);
  EXPECT_EQ(seminorm_estimate(constant_amplitude(1.0, 2, 1), 0.0, {0, 0}, {1}, s), 0.0);
}

TEST(Seminorm, FirstDerivativeOfJapaneseBracket) {
  // d/dxi1 <Xi>^m = m xi1 <Xi>^{m-2}, so |.| <Xi>^{1-m} <= |m|
  const auto s = amplitude_samples(2, 1, 400);
  const double c = seminorm_estimate(japanese_bracket_amplitude(-1.0, 2, 1), -1.0, {1, 0}, {0}, s);
  EXPECT_GT(c, 0.1);
  EXPECT_LE(c, 1.0 + 1e-6);
}

TEST(Seminorm, RejectsBadIndices) {
  const auto s = amplitude_samples(2, 1, 4);
  EXPECT_THROW(seminorm_estimate(constant_amplitude(1.0, 2, 1), 0.0, {1}, {0}, s), error);
  EXPECT_THROW(seminorm_estimate(constant_amplitude(1.0, 2, 1), 0.0, {2, 1}, {0}, s), error);
}

TEST(Decomposition, FrozenConstants) {
  const auto d2 = decompose_amplitude(constant_amplitude(1.0, 2, 1));
  EXPECT_DOUBLE_EQ(d2.constants.c1, 1024.0 / 1025.0);
  EXPECT_DOUBLE_EQ(d2.constants.c2, 4096.0 / 4097.0);
  EXPECT_DOUBLE_EQ(d2.constants.domination, 1025.0 / 1024.0);
  EXPECT_NEAR(d2.constants.pair_threshold, 1.0 / 4097.0, 1e-18);
  EXPECT_NEAR(d2.constants.comparability, std::sqrt(2.0 * 4097.0), 1e-9);
  const auto d3 = decompose_amplitude(constant_amplitude(1.0, 3, 1));
  EXPECT_DOUBLE_EQ(d3.constants.c1, 2048.0 / 2049.0);
  EXPECT_EQ(d3.sigma_j.size(), 3u);
  EXPECT_EQ(d3.sigma_jk.size(), 6u);
  EXPECT_THROW(decompose_amplitude(constant_amplitude(1.0, 1, 1)), error);
}

TEST(Decomposition, ReconstructsOnRandomSamples) {
  for (int N : {2, 3}) {
    for (int n : {1, 2}) {
      const auto sigma = japanese_bracket_amplitude(-0.5, N, n);
      const auto dec = decompose_amplitude(sigma);
      const auto audit = audit_decomposition(sigma, dec, decomposition_samples(N, n, 2000, CounterRng(9, "dec")));
      EXPECT_LE(audit.max_reconstruction_error, 1e-10) << N << " " << n;
      EXPECT_EQ(audit.violations(), 0u) << N << " " << n;
    }
  }
}

TEST(Decomposition, SmallFrequenciesOnlyInSigma0) {
  const auto sigma = japanese_bracket_amplitude(1.0, 2, 1);
  const auto dec = decompose_amplitude(sigma);
  const Point x{};
  const std::vector<double> Xi = {0.03, -0.04};
  EXPECT_EQ(dec.sigma0(testutil::view(x, 1), Xi), sigma(testutil::view(x, 1), Xi));
  for (const auto& p : dec.sigma_j) EXPECT_EQ(p(testutil::view(x, 1), Xi), Complex(0.0));
  for (const auto& p : dec.sigma_jk) EXPECT_EQ(p.sigma(testutil::view(x, 1), Xi), Complex(0.0));
}

TEST(Decomposition, DominantSlotTakesEverything) {
  const auto sigma = japanese_bracket_amplitude(-1.0, 2, 1);
  const auto dec = decompose_amplitude(sigma);
  const Point x{};
  const auto xs = testutil::view(x, 1);
  // brute-force thresholds: t_1 = |xi_1|^2 / |Xi|^2 exceeds c2, so nu_1 = 1
  const std::vector<double> Xi = {100.0, 0.5};
  const double t1 = 1e4 / (1e4 + 0.25);
  ASSERT_GT(t1, dec.constants.c2);
  EXPECT_EQ(dec.sigma_j[0](xs, Xi), sigma(xs, Xi));
  EXPECT_EQ(dec.sigma_j[1](xs, Xi), Complex(0.0));
  for (const auto& p : dec.sigma_jk) EXPECT_EQ(p.sigma(xs, Xi), Complex(0.0));
  EXPECT_EQ(dec.sigma0(xs, Xi), Complex(0.0));
}

TEST(Decomposition, ComparableSlotsUsePairs) {
  const auto sigma = constant_amplitude(1.0, 2, 1);
  const auto dec = decompose_amplitude(sigma);
  const Point x{};
  const std::vector<double> Xi = {10.0, -9.0};
  double pairs = 0.0;
  for (const auto& p : dec.sigma_jk) pairs += p.sigma(testutil::view(x, 1), Xi).real();
  EXPECT_NEAR(pairs, 1.0, 1e-14);
  EXPECT_NEAR(dec.sigma_jk[0].sigma(testutil::view(x, 1), Xi).real(), 0.5, 1e-14);
}

TEST(Amplitude, CustomMatchesBuiltin) {
  const auto c = custom_amplitude("(1 + xi1^2 + xi2^2)^(-0.25)", -0.5, 2, 1);
  const auto b = japanese_bracket_amplitude(-0.5, 2, 1);
  const Point x{};
  for (const auto& s : amplitude_samples(2, 1, 50)) EXPECT_NEAR(std::abs(c(testutil::view(x, 1), s.Xi) - b(testutil::view(x, 1), s.Xi)), 0.0, 1e-14);
}
