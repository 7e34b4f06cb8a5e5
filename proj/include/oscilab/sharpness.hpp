#pragma once

// Counterexample data for bilinear operators above the critical order.
//
//   B(f, g)(x) = sum_{xi, eta} a(xi, eta) f^(xi) g^(eta) e^{ix(xi + eta)} e^{i|xi|^s - i|eta|^s}
//   a(xi, eta) = sum_k th_k(xi) b_1(xi) th_k(eta) b_2(eta),   b_j = (1 - th_0) |.|^{m_j}
//
// With b_1 f^ e^{i phi} = b_2 g^ e^{i phi} = F^ one gets B(f, conj g) = sum_k |th_k(D) F|^2.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <string>
#include <vector>

#include "oscilab/amplitude.hpp"
#include "oscilab/cutoff.hpp"
#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/norms.hpp"
#include "oscilab/oio.hpp"
#include "oscilab/phase.hpp"
#include "oscilab/ratio_table.hpp"

namespace oscilab {

enum class SharpnessCase { fio_large, fio_small, oio_large, oio_small };  // p,q >= 2 or p,q <= 2

inline const char* to_string(SharpnessCase c) {
  switch (c) {
    case SharpnessCase::fio_large: return "fio_pq_ge_2";
    case SharpnessCase::fio_small: return "fio_pq_le_2";
    case SharpnessCase::oio_large: return "oio_pq_ge_2";
    case SharpnessCase::oio_small: return "oio_pq_le_2";
  }
  return "?";
}

struct SharpnessParameters {
  SharpnessCase family = SharpnessCase::fio_large;
  int dim = 1;
  double s = 1.0, p = 4.0, q = 4.0, r = 2.0, epsilon = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0, m1 = 0.0, m2 = 0.0;
  double critical = 0.0;  // m without epsilon
  bool chirp = true;      // data carry e^{-i|xi|^s}
};

/// Exponents of the counterexample for L^p x L^q -> L^r, 1/p + 1/q = 1/r.
inline SharpnessParameters sharpness_parameters(int n, double s, double p, double q, double r, double eps) {
  if (n < 1) throw error("sharpness_parameters: dimension must be positive");
  if (!(s > 0.0)) throw error("sharpness_parameters: phase order must be positive");
  if (!(eps >= 0.0)) throw error("sharpness_parameters: epsilon must be nonnegative");
  if (!(p > 0.0) || !(q > 0.0) || !(r > 0.0)) throw error("sharpness_parameters: exponents must be positive");
  if (std::abs(1.0 / p + 1.0 / q - 1.0 / r) > 1e-12)
    throw error("sharpness_parameters: exponents violate 1/p + 1/q = 1/r");
  const bool large = p >= 2.0 && q >= 2.0, small = p <= 2.0 && q <= 2.0;
  if (!large && !small)
    throw error("sharpness_parameters: mixed exponents (one below 2, one above) are not covered by the construction");
  SharpnessParameters c;
  c.dim = n;
  c.s = s;
  c.p = p;
  c.q = q;
  c.r = r;
  c.epsilon = eps;
  const double N = n;
  const double dev = std::abs(1.0 / p - 0.5) + std::abs(1.0 / q - 0.5);
  if (s == 1.0) {
    c.critical = -(N - 1.0) * dev;
    if (large) {
      c.family = SharpnessCase::fio_large;
      c.lambda1 = (N + 1.0) / 2.0 - 1.0 / p + eps / 4.0;
      c.lambda2 = (N + 1.0) / 2.0 - 1.0 / q + eps / 4.0;
      c.m1 = -(N - 1.0) / 2.0 + N / (2.0 * r) - 1.0 / p + eps / 2.0;
      c.m2 = -(N - 1.0) / 2.0 + N / (2.0 * r) - 1.0 / q + eps / 2.0;
    } else {
      c.family = SharpnessCase::fio_small;
      c.lambda1 = N * (1.0 - 1.0 / p) + eps / 4.0;
      c.lambda2 = N * (1.0 - 1.0 / q) + eps / 4.0;
      c.m1 = (N - 1.0) / 2.0 - N / p + 1.0 / (2.0 * r) + eps / 2.0;
      c.m2 = (N - 1.0) / 2.0 - N / q + 1.0 / (2.0 * r) + eps / 2.0;
    }
  } else {
    c.critical = -s * N * dev;
    if (large) {
      c.family = SharpnessCase::oio_large;
      c.lambda1 = N * (1.0 - s / 2.0) - N * (1.0 - s) / p + eps / 4.0;
      c.lambda2 = N * (1.0 - s / 2.0) - N * (1.0 - s) / q + eps / 4.0;
      c.m1 = -s * N * (0.5 - 1.0 / p) - N * (1.0 / p - 1.0 / (2.0 * r)) + eps / 2.0;
      c.m2 = -s * N * (0.5 - 1.0 / q) - N * (1.0 / q - 1.0 / (2.0 * r)) + eps / 2.0;
    } else {
      c.family = SharpnessCase::oio_small;
      c.lambda1 = N * (1.0 - 1.0 / p) + eps / 4.0;
      c.lambda2 = N * (1.0 - 1.0 / q) + eps / 4.0;
      c.m1 = -s * N * (1.0 / (2.0 * r) - 0.5) - N * (1.0 / p - 1.0 / (2.0 * r)) + eps / 2.0;
      c.m2 = -s * N * (1.0 / (2.0 * r) - 0.5) - N * (1.0 / q - 1.0 / (2.0 * r)) + eps / 2.0;
    }
  }
  c.chirp = large;
  return c;
}

/// Spectral samples (1 - th_0(xi)) |xi|^{-lambda} e^{-i|xi|^s chirp}.
inline Field build_miyachi_function(double lambda, double s, bool chirp, const Grid& g) {
  if (g.nyquist() < 4.0) throw error("build_miyachi_function: grid bandwidth must be at least 4");
  return Field::from_spectrum(g, [&](std::span<const double> xi) {
    const double r = euclid(xi);
    const double cut = 1.0 - bump(r);
    if (cut == 0.0) return Complex(0.0);
    const double mag = cut * std::pow(r, -lambda);
    return chirp ? std::polar(mag, -std::pow(r, s)) : Complex(mag);
  });
}

inline FrequencyFunction sharpness_weight(double m) {
  return [m](std::span<const double> xi) {
    const double r = euclid(xi);
    const double cut = 1.0 - bump(r);
    return Complex(cut == 0.0 ? 0.0 : cut * std::pow(r, m));
  };
}

/// a(xi, eta) truncated to the bands k = 0..K that meet |.| <= radius.
inline MultilinearAmplitude build_sharpness_amplitude(int n, double m1, double m2, double radius) {
  const int K = lp_last_index(radius);
  std::vector<SeparableTerm> terms;
  const FrequencyFunction b1 = sharpness_weight(m1), b2 = sharpness_weight(m2);
  for (int k = 0; k <= K; ++k) {
    SeparableTerm t;
    t.factors.push_back([k, b1](std::span<const double> xi) { return lp_component(k, xi) * b1(xi); });
    t.factors.push_back([k, b2](std::span<const double> xi) { return lp_component(k, xi) * b2(xi); });
    terms.push_back(std::move(t));
  }
  return MultilinearAmplitude::separable(n, m1 + m2, std::move(terms), "sharpness_bilinear");
}

inline OperatorSpec sharpness_spec(int n, double m1, double m2, double s, double radius) {
  const Phase phi = homogeneous_phase(s);
  return {build_sharpness_amplitude(n, m1, m2, radius), {zero_phase(), phi, phi.scaled(-1.0)}, {}};
}

struct SquareFunctionReport {
  double discrepancy = 0.0;  // relative L^1
  double min_real = 0.0;     // of B(f, conj g)
  double max_imag = 0.0;
  double bilinear_l1 = 0.0;
};

/// B(f, conj g) through the operator engine against sum_k |th_k(D) F|^2.
inline SquareFunctionReport square_function_check(const Field& f, const Field& g, double m1, double m2, double s,
                                                  Route route = Route::direct) {
  if (!(f.grid() == g.grid())) throw error("square_function_check: f and g live on different grids");
  const Grid& grid = f.grid();
  const double radius = lattice_radius(grid);
  const Phase phi = homogeneous_phase(s);
  auto profile = [&](const Field& h, double m) {
    const FrequencyFunction b = sharpness_weight(m);
    return apply_multiplier([&](std::span<const double> xi) { return b(xi) * std::polar(1.0, phi.eval(xi)); },
                            to_spectral(h));
  };
  const Field F1 = profile(f, m1), F2 = profile(g, m2);
  double peak = 0.0;
  for (const auto& v : F1.samples()) peak = std::max(peak, std::abs(v));
  if (max_abs_difference(F1, F2) > 1e-9 * peak)
    throw error("square_function_check: b_1 f^ e^{i phi} and b_2 g^ e^{i phi} differ; inputs do not match m_1, m_2");

  const OperatorSpec spec = sharpness_spec(grid.dim(), m1, m2, s, radius);
  const std::vector<Field> in = {to_physical(f), conjugate(to_physical(g))};
  const Field B = eval_multilinear_oio(spec, in, route);

  std::vector<double> sq(grid.total(), 0.0);
  for (int k = 0; k <= lp_last_index(radius); ++k) {
    const Field band = to_physical(apply_multiplier([k](std::span<const double> xi) { return Complex(lp_component(k, xi)); }, F1));
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += std::norm(band[i]);
  }
  SquareFunctionReport rep;
  double diff = 0.0, ref = 0.0;
  rep.min_real = infinity;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    diff += std::abs(B[i] - sq[i]);
    ref += sq[i];
    rep.bilinear_l1 += std::abs(B[i]);
    rep.min_real = std::min(rep.min_real, B[i].real());
    rep.max_imag = std::max(rep.max_imag, std::abs(B[i].imag()));
  }
  rep.discrepancy = ref == 0.0 ? (diff == 0.0 ? 0.0 : infinity) : diff / ref;
  return rep;
}

/// The counterexample pair on a grid: f^ = profile(lambda_1), g^ = profile(lambda_2).
inline std::pair<Field, Field> sharpness_data(const SharpnessParameters& c, const Grid& g) {
  return {build_miyachi_function(c.lambda1, c.s, c.chirp, g), build_miyachi_function(c.lambda2, c.s, c.chirp, g)};
}

inline SquareFunctionReport square_function_check(const SharpnessParameters& c, const Grid& g, Route route = Route::direct) {
  const auto [f, h] = sharpness_data(c, g);
  return square_function_check(f, h, c.m1, c.m2, c.s, route);
}

/// Grid whose Nyquist radius is R and whose period keeps the chirped profile from wrapping:
/// L >= 2 s R^{s-1} + 2 pi.
inline Grid blowup_grid(int n, double s, int R) {
  if (R < 4) throw error("blowup_grid: bandwidth must be at least 4");
  const double L0 = 2.0 * s * std::pow(static_cast<double>(R), s - 1.0) + 2.0 * std::numbers::pi;
  const double need = 2.0 * R * L0 / std::numbers::pi;
  int G = 4;
  while (G < need) G *= 2;
  if (std::pow(static_cast<double>(G), n) > static_cast<double>(std::size_t{1} << 24))
    throw budget_error("blowup_grid: " + std::to_string(G) + " points per axis exceed the desk budget at n = " + std::to_string(n));
  return make_grid(n, G, G * std::numbers::pi / (2.0 * R));
}

struct BlowupResult {
  SharpnessParameters parameters;
  RatioTable table;  // R, ratio, lambda1, lambda2, m1, m2
  double slope = 0.0;
  bool increasing = false;
  bool blowup_detected = false;  // slope > 0.1
};

inline BlowupResult blowup_experiment(double p, double q, double r, double eps, double s, const std::vector<int>& bandwidths,
                                      int n = 1) {
  if (bandwidths.size() < 2) throw error("blowup_experiment: need at least two bandwidths");
  BlowupResult res;
  res.parameters = sharpness_parameters(n, s, p, q, r, eps);
  const auto& c = res.parameters;
  res.table.columns = {"R", "ratio", "lambda1", "lambda2", "m1", "m2"};
  std::vector<double> Rs, ratios;
  for (int R : bandwidths) {
    const Grid g = blowup_grid(n, s, R);
    const auto [f, h] = sharpness_data(c, g);
    const OperatorSpec spec = sharpness_spec(n, c.m1, c.m2, s, lattice_radius(g));
    const std::vector<Field> in = {to_physical(f), conjugate(to_physical(h))};
    const Field B = eval_multilinear_oio(spec, in, Route::separable);
    const double ratio = lebesgue_norm(B, r) / (lebesgue_norm(in[0], p) * lebesgue_norm(in[1], q));
    res.table.add_row({static_cast<double>(R), ratio, c.lambda1, c.lambda2, c.m1, c.m2});
    Rs.push_back(R);
    ratios.push_back(ratio);
  }
  res.slope = loglog_slope(Rs, ratios);
  res.increasing = true;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (!(ratios[i] > ratios[i - 1])) res.increasing = false;
  res.blowup_detected = res.slope > 0.1;
  return res;
}

}  // namespace oscilab
