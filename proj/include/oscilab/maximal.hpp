#pragma once

// Maximal operators on the torus lattice. Distances are periodic (minimal image).
//
//   M_r f(x)            = max over centered balls B(x, h 2^i), h 2^i <= L, of (avg_B |f|^r)^{1/r}
//   Peetre  M_{a,b} f(x) = max_y |f(x - y)| / (1 + b|y|)^a
//   Park    M^p_{s,2^j} f(x) = 2^{jn/p} (sum_y |f(x - y)|^p / (1 + 2^j |y|)^{sp} h^n)^{1/p}

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/norms.hpp"
#include "oscilab/parallel.hpp"

namespace oscilab {

namespace detail {

struct Offsets {
  std::vector<std::vector<int>> steps;  // per offset, per axis, in [-G/2, G/2)
  std::vector<double> length;           // periodic Euclidean length
};

inline Offsets lattice_offsets(const Grid& g) {
  Offsets o;
  const std::size_t P = g.total();
  const auto n = static_cast<std::size_t>(g.dim());
  o.steps.resize(P);
  o.length.resize(P);
  for (std::size_t i = 0; i < P; ++i) {
    std::vector<int> s(n);
    double r2 = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      s[d] = g.wavenumber(g.axis_index(i, static_cast<int>(d)));
      r2 += (s[d] * g.spacing()) * (s[d] * g.spacing());
    }
    o.steps[i] = std::move(s);
    o.length[i] = std::sqrt(r2);
  }
  return o;
}

// Flat index of x - y for x at flat index `x` and offset steps `s`.
inline std::size_t shifted(const Grid& g, std::size_t x, const std::vector<int>& s) {
  const int G = g.points();
  std::size_t flat = 0;
  for (std::size_t d = 0; d < s.size(); ++d) {
    const int a = g.axis_index(x, static_cast<int>(d));
    flat = flat * static_cast<std::size_t>(G) + static_cast<std::size_t>(((a - s[d]) % G + G) % G);
  }
  return flat;
}

inline Field real_field(const Grid& g, const std::vector<double>& v) {
  std::vector<Complex> s(v.begin(), v.end());
  return Field(g, Representation::physical, std::move(s));
}

}  // namespace detail

/// Radius 0 (the point itself, the limit of shrinking balls) and h 2^i (i >= 0) not exceeding L.
inline std::vector<double> hl_radii(const Grid& g) {
  std::vector<double> r{0.0};
  for (double rho = g.spacing(); rho <= g.half_width() * (1.0 + 1e-12); rho *= 2.0) r.push_back(rho);
  return r;
}

inline Field hl_maximal(const Field& f, double r = 1.0) {
  if (!(r > 0.0)) throw error("hl_maximal: r must be positive");
  const Grid& g = f.grid();
  const auto mag = magnitudes(f);
  const auto off = detail::lattice_offsets(g);
  std::vector<std::size_t> order(off.length.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return off.length[a] < off.length[b]; });
  const auto radii = hl_radii(g);
  std::vector<double> out(mag.size());
  parallel_for(mag.size(), [&](std::size_t x) {
    double sum = 0.0, best = 0.0;
    std::size_t count = 0, k = 0;
    for (double rho : radii) {
      const double lim = rho * (1.0 + 1e-12);
      while (k < order.size() && off.length[order[k]] <= lim) {
        const double v = mag[detail::shifted(g, x, off.steps[order[k]])];
        sum += (r == 1.0) ? v : std::pow(v, r);
        ++count;
        ++k;
      }
      best = std::max(best, sum / static_cast<double>(count));
    }
    out[x] = (r == 1.0) ? best : std::pow(best, 1.0 / r);
  });
  return detail::real_field(g, out);
}

inline Field peetre_maximal(const Field& f, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw error("peetre_maximal: a and b must be positive");
  const Grid& g = f.grid();
  const auto mag = magnitudes(f);
  const auto off = detail::lattice_offsets(g);
  std::vector<double> weight(off.length.size());
  for (std::size_t k = 0; k < weight.size(); ++k) weight[k] = std::pow(1.0 + b * off.length[k], -a);
  std::vector<double> out(mag.size());
  parallel_for(mag.size(), [&](std::size_t x) {
    double best = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) best = std::max(best, mag[detail::shifted(g, x, off.steps[k])] * weight[k]);
    out[x] = best;
  });
  return detail::real_field(g, out);
}

inline Field park_maximal(const Field& f, double s, int j, double p) {
  if (!(s > 0.0) || !(p > 0.0)) throw error("park_maximal: s and p must be positive");
  const Grid& g = f.grid();
  const auto mag = magnitudes(f);
  const auto off = detail::lattice_offsets(g);
  const double scale = std::ldexp(1.0, j);
  std::vector<double> weight(off.length.size());
  for (std::size_t k = 0; k < weight.size(); ++k) weight[k] = std::pow(1.0 + scale * off.length[k], -s * p);
  const double pre = std::pow(scale, g.dim() / p);
  const double cell = g.cell_volume();
  std::vector<double> out(mag.size());
  parallel_for(mag.size(), [&](std::size_t x) {
    double sum = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) sum += std::pow(mag[detail::shifted(g, x, off.steps[k])], p) * weight[k];
    out[x] = pre * std::pow(sum * cell, 1.0 / p);
  });
  return detail::real_field(g, out);
}

/// max over lattice points of |num| / |den| where |den| > 0.
inline double empirical_constant(const Field& num, const Field& den) {
  const auto a = magnitudes(num), b = magnitudes(den);
  if (a.size() != b.size()) throw error("empirical_constant: fields live on different grids");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] > 0.0) best = std::max(best, a[i] / b[i]);
  return best;
}

/// Smallest-level dyadic blocks (points per side) whose side 2L/2^i is <= 2^{-j}, at least one point.
inline int park_block_points(const Grid& g, int j) {
  int m = g.points();
  while (m > 1 && m % 2 == 0 && m * g.spacing() > std::ldexp(1.0, -j) * (1.0 + 1e-12)) m /= 2;
  return m;
}

/// max over dyadic cubes J (side <= 2^{-j}) of sup_J / inf_J of the Park maximal function.
inline double park_dyadic_comparability(const Field& f, double s, int j, double p) {
  const Field park = park_maximal(f, s, j, p);
  const Grid& g = f.grid();
  const int m = park_block_points(g, j);
  const int blocks = g.points() / m;
  const auto n = static_cast<std::size_t>(g.dim());
  std::size_t cubes = 1;
  for (std::size_t d = 0; d < n; ++d) cubes *= static_cast<std::size_t>(blocks);
  std::vector<double> hi(cubes, 0.0), lo(cubes, infinity);
  for (std::size_t i = 0; i < park.size(); ++i) {
    std::size_t c = 0;
    for (std::size_t d = 0; d < n; ++d) c = c * static_cast<std::size_t>(blocks) + static_cast<std::size_t>(g.axis_index(i, static_cast<int>(d)) / m);
    const double v = park[i].real();
    hi[c] = std::max(hi[c], v);
    lo[c] = std::min(lo[c], v);
  }
  double worst = 1.0;
  for (std::size_t c = 0; c < cubes; ++c) {
    if (lo[c] <= 0.0) {
      if (hi[c] > 0.0) return infinity;
      continue;
    }
    worst = std::max(worst, hi[c] / lo[c]);
  }
  return worst;
}

/// || (sum_j |g_j|^q)^{1/q} ||_p for a finite family.
inline double mixed_norm(const std::vector<Field>& family, double p, double q) {
  if (family.empty()) throw error("mixed_norm: empty family");
  std::vector<double> acc(family.front().size(), 0.0);
  for (const auto& f : family) {
    const auto m = magnitudes(f);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (std::isinf(q)) acc[i] = std::max(acc[i], m[i]);
      else acc[i] += std::pow(m[i], q);
    }
  }
  if (!std::isinf(q))
    for (auto& v : acc) v = std::pow(v, 1.0 / q);
  return lebesgue_of_magnitudes(acc, family.front().grid().cell_volume(), p);
}

/// || {M_r f_j} ||_{L^p(l^q)} / || {f_j} ||_{L^p(l^q)}.
inline double fefferman_stein_ratio(const std::vector<Field>& family, double r, double p, double q) {
  std::vector<Field> maxed;
  for (const auto& f : family) maxed.push_back(hl_maximal(f, r));
  const double den = mixed_norm(family, p, q);
  if (den == 0.0) throw error("fefferman_stein_ratio: zero family");
  return mixed_norm(maxed, p, q) / den;
}

}  // namespace oscilab
