#pragma once

// Discrete Carleson measures: dmu(x, t) = sum_l density_l(x) dx delta_{2^-l}(t).
//
//   ||dmu||_C = sup_Q (1/|Q|) sum_{l : 2^-l <= side(Q)} sum_{x in Q} density_l(x) h^n
//
// over dyadic subcubes Q of the period cell with side in {2h, ..., 2L}.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/norms.hpp"

namespace oscilab {

class DyadicMeasure {
public:
  explicit DyadicMeasure(Grid g) : grid_(g) {}

  const Grid& grid() const { return grid_; }
  const std::map<int, std::vector<double>>& levels() const { return levels_; }
  bool empty() const { return levels_.empty(); }

  void add_level(int level, std::vector<double> density) {
    if (density.size() != grid_.total()) throw error("DyadicMeasure: density size does not match the grid");
    for (double v : density)
      if (!(v >= 0.0)) throw error("DyadicMeasure: negative or non-finite density at level " + std::to_string(level));
    auto [it, fresh] = levels_.emplace(level, std::move(density));
    if (!fresh) throw error("DyadicMeasure: level " + std::to_string(level) + " given twice");
  }

  DyadicMeasure scaled(double c) const {
    if (!(c >= 0.0)) throw error("DyadicMeasure: scale must be nonnegative");
    DyadicMeasure m(grid_);
    for (const auto& [l, d] : levels_) {
      std::vector<double> s(d);
      for (auto& v : s) v *= c;
      m.levels_.emplace(l, std::move(s));
    }
    return m;
  }

private:
  Grid grid_;
  std::map<int, std::vector<double>> levels_;
};

/// Points per side of the admissible dyadic cubes, largest first.
inline std::vector<int> carleson_cube_sizes(const Grid& g) {
  std::vector<int> sizes;
  for (int blocks = 1; g.points() % blocks == 0 && g.points() / blocks >= 2; blocks *= 2) sizes.push_back(g.points() / blocks);
  return sizes;
}

inline double carleson_norm(const DyadicMeasure& mu) {
  const Grid& g = mu.grid();
  const auto n = static_cast<std::size_t>(g.dim());
  const double h = g.spacing();
  for (const auto& [l, d] : mu.levels())
    for (double v : d)
      if (v < 0.0) throw error("carleson_norm: negative density at level " + std::to_string(l));
  double best = 0.0;
  for (int m : carleson_cube_sizes(g)) {
    const double side = m * h;
    std::vector<double> dens(g.total(), 0.0);
    bool any = false;
    for (const auto& [l, d] : mu.levels()) {
      if (std::ldexp(1.0, -l) <= side * (1.0 + 1e-12)) {
        any = true;
        for (std::size_t i = 0; i < dens.size(); ++i) dens[i] += d[i];
      }
    }
    if (!any) continue;
    const int blocks = g.points() / m;
    std::size_t cubes = 1;
    for (std::size_t d = 0; d < n; ++d) cubes *= static_cast<std::size_t>(blocks);
    std::vector<double> mass(cubes, 0.0);
    for (std::size_t i = 0; i < dens.size(); ++i) {
      std::size_t c = 0;
      for (std::size_t d = 0; d < n; ++d)
        c = c * static_cast<std::size_t>(blocks) + static_cast<std::size_t>(g.axis_index(i, static_cast<int>(d)) / m);
      mass[c] += dens[i];
    }
    const double vol = std::pow(side, static_cast<double>(n));
    for (double v : mass) best = std::max(best, v * g.cell_volume() / vol);
  }
  return best;
}

struct EmbeddingReport {
  double lhs = 0.0;
  double carleson = 0.0;
  double data_norm = 0.0;
  double ratio = 0.0;  // lhs / (carleson * data_norm^power); 0 when the measure vanishes
};

using RadialProfile = std::function<double(double)>;

namespace detail {
inline Field profile_at_scale(const RadialProfile& phi, int level, const Field& f) {
  return apply_multiplier([&](std::span<const double> xi) { return Complex(phi(std::ldexp(euclid(xi), -level))); }, f);
}
}  // namespace detail

/// sum_l sum_x |phi(2^-l D) f|^power density_l h^n against ||mu||_C ||f||^power, where the data
/// norm is L^2 for power 2 and h^1 for power 1.
inline EmbeddingReport carleson_embedding_check(const RadialProfile& phi, const Field& f, const DyadicMeasure& mu,
                                                int power = 2) {
  if (power != 1 && power != 2) throw error("carleson_embedding_check: power must be 1 or 2");
  EmbeddingReport rep;
  rep.data_norm = power == 2 ? lebesgue_norm(f, 2.0) : norm(f, NormKind::local_hardy(1.0));
  if (rep.data_norm == 0.0) throw error("carleson_embedding_check: zero-norm input field");
  rep.carleson = carleson_norm(mu);
  const double cell = f.grid().cell_volume();
  for (const auto& [l, d] : mu.levels()) {
    const Field u = to_physical(detail::profile_at_scale(phi, l, f));
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double a = std::abs(u[i]);
      rep.lhs += (power == 2 ? a * a : a) * d[i] * cell;
    }
  }
  rep.ratio = rep.carleson > 0.0 ? rep.lhs / (rep.carleson * std::pow(rep.data_norm, power)) : 0.0;
  return rep;
}

/// sum_{k = k_lo..k_hi} ||phi(2^-k D) f||_2^2 / ||f||_2^2.
inline double quadratic_estimate_ratio(const RadialProfile& phi, const Field& f, int k_lo, int k_hi) {
  const double den = lebesgue_norm(f, 2.0);
  if (den == 0.0) throw error("quadratic_estimate_ratio: zero-norm input field");
  double sum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double v = lebesgue_norm(detail::profile_at_scale(phi, k, f), 2.0);
    sum += v * v;
  }
  return sum / (den * den);
}

/// The Lebesgue measure placed on a single level: density 1 at level l.
inline DyadicMeasure single_level_measure(const Grid& g, int level, double density = 1.0) {
  DyadicMeasure mu(g);
  mu.add_level(level, std::vector<double>(g.total(), density));
  return mu;
}

}  // namespace oscilab
