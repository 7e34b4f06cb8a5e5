#pragma once

// Dyadic measures built from band outputs of a linear oscillatory integral operator:
//
//   dmu_k(x, t) = sum_l |Q^u_{k+l} T^phi_d f(x)|^2 delta_{2^-l}(t) dx,
//   Q^u_j = psi_j(D) with the shift e^{i 2^-j xi.u}.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "oscilab/amplitude.hpp"
#include "oscilab/carleson.hpp"
#include "oscilab/cutoff.hpp"
#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/oio.hpp"
#include "oscilab/phase.hpp"
#include "oscilab/random.hpp"
#include "oscilab/ratio_table.hpp"

namespace oscilab {

struct BandMeasureSpec {
  Phase phase;
  MultilinearAmplitude amplitude;  // arity 1, order -n s / 2
  Point shift{};
  int base_level = 2;
  int level_count = 0;  // 0: every level whose band starts below the Nyquist radius
  Field data;
};

/// Levels l = 0, 1, ... with 2^{k+l-2} below the Nyquist radius.
inline int band_level_count(const Grid& g, int k) {
  int count = 0;
  while (std::ldexp(1.0, k + count - 2) < g.nyquist()) ++count;
  return count;
}

inline void check_band_spec(const BandMeasureSpec& spec) {
  const Grid& g = spec.data.grid();
  if (spec.amplitude.arity() != 1) throw error("band measure: amplitude must be linear (arity 1)");
  if (spec.amplitude.dim() != g.dim()) throw error("band measure: amplitude dimension does not match the grid");
  if (!spec.amplitude.x_independent()) throw error("band measure: amplitude must not depend on x");
  const double want = -g.dim() * spec.phase.order() / 2.0;
  if (std::abs(spec.amplitude.order() - want) > 1e-12)
    throw error("band measure: amplitude order " + format_number(spec.amplitude.order()) + " differs from -n s / 2 = " +
                format_number(want));
}

inline DyadicMeasure build_prop43_measure(const BandMeasureSpec& spec) {
  check_band_spec(spec);
  const Grid& g = spec.data.grid();
  const int avail = band_level_count(g, spec.base_level);
  int levels = spec.level_count;
  if (levels < 0) throw error("band measure: negative level count");
  if (levels == 0) levels = avail;
  if (levels > avail || levels == 0)
    throw error("band measure: band psi_" + std::to_string(spec.base_level + levels - 1) + " starts beyond the Nyquist radius " +
                format_number(g.nyquist()));
  const auto n = static_cast<std::size_t>(g.dim());
  const Field Tf = eval_linear_oio(spec.amplitude, spec.phase, spec.data);
  const Field Tf_hat = to_spectral(Tf);
  DyadicMeasure mu(g);
  for (int l = 0; l < levels; ++l) {
    const int j = spec.base_level + l;
    const Point u = projection_shift(spec.shift, j);
    const Field band = to_physical(apply_multiplier(
        [&](std::span<const double> xi) {
          double arg = 0.0;
          for (std::size_t d = 0; d < n; ++d) arg += xi[d] * u[d];
          return cutoff(CutoffKind::psi, j, xi) * std::polar(1.0, arg);
        },
        Tf_hat));
    std::vector<double> dens(g.total());
    for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(band[i]);
    mu.add_level(l, std::move(dens));
  }
  return mu;
}

struct DecayReport {
  std::vector<int> ks;
  std::vector<double> norms;
  double slope = 0.0;           // of log2 ||mu_k||_C against k
  bool degenerate = false;      // some norm vanished, slope undefined
  double predicted_max = 0.0;   // min(n s / 2, n): upper end of eps = min(n s / 2, n delta), delta in (0, 1)
  RatioTable table;             // k, carleson_norm, fitted_slope
};

inline DecayReport decay_experiment(BandMeasureSpec spec, const std::vector<int>& ks) {
  if (ks.size() < 4) throw error("decay_experiment: need at least 4 values of k");
  DecayReport rep;
  const Grid& g = spec.data.grid();
  rep.predicted_max = std::min(g.dim() * spec.phase.order() / 2.0, static_cast<double>(g.dim()));
  for (int k : ks) {
    spec.base_level = k;
    rep.ks.push_back(k);
    rep.norms.push_back(carleson_norm(build_prop43_measure(spec)));
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(rep.norms[i] > 0.0)) rep.degenerate = true;
    x.push_back(ks[i]);
    y.push_back(rep.norms[i] > 0.0 ? std::log2(rep.norms[i]) : 0.0);
  }
  rep.slope = rep.degenerate ? std::nan("") : fitted_slope(x, y);
  rep.table.columns = {"k", "carleson_norm", "fitted_slope"};
  for (std::size_t i = 0; i < ks.size(); ++i) rep.table.add_row({static_cast<double>(ks[i]), rep.norms[i], rep.slope});
  return rep;
}

/// d = chi_0(xi) <xi>^{-n s / 2}.
inline MultilinearAmplitude prop43_amplitude(int n, double s, int k0 = 0) {
  const double m = -n * s / 2.0;
  return MultilinearAmplitude(
      1, n, m,
      [m, k0](std::span<const double>, std::span<const double> xi) {
        return Complex(cutoff(CutoffKind::chi0, k0, xi) * std::pow(japanese(xi), m));
      },
      true, "chi0_bessel");
}

/// Random signs, sup norm 1.
inline Field random_sign_field(const Grid& g, const CounterRng& rng) {
  std::uint64_t c = 0;
  return Field::from_function(g, [&](std::span<const double>) { return Complex((rng.bits(c++) & 1u) ? 1.0 : -1.0); });
}

struct CarlesonFamilyReport {
  std::vector<DecayReport> draws;
  double mean_slope = 0.0;
};

/// s = 2, n = 1, G = 512, L = pi, d = chi_0 <xi>^{-1}, k = 2..7, random sign data.
inline CarlesonFamilyReport carleson_builtin_family(std::uint64_t seed, int draws = 5, int G = 512) {
  if (draws < 1) throw error("carleson_builtin_family: need at least one draw");
  const Grid g = make_grid(1, G, std::numbers::pi);
  const CounterRng root(seed, "carleson");
  CarlesonFamilyReport out;
  for (int d = 0; d < draws; ++d) {
    BandMeasureSpec spec{homogeneous_phase(2.0), prop43_amplitude(1, 2.0), Point{}, 2, 0,
                         random_sign_field(g, root.substream(static_cast<std::uint64_t>(d)))};
    out.draws.push_back(decay_experiment(spec, {2, 3, 4, 5, 6, 7}));
    out.mean_slope += out.draws.back().slope / draws;
  }
  return out;
}

}  // namespace oscilab
