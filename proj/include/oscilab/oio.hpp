#pragma once

// Linear and multilinear oscillatory integral operators on the lattice:
//
//   T(x) = sum_Xi sigma(x, Xi) prod_j f^_j(xi_j) e^{i Phi(x, Xi)} (dxi / 2pi)^{nN}
//   Phi  = phi_0(xi_1 + ... + xi_N) + sum_j (x . xi_j + phi_j(xi_j) + xi_j . u_j)
//
// Three routes:
//   direct     per-x sum over the full product lattice; any sigma. The reference.
//   spectral   x-independent sigma: bin each Xi at its exact sum frequency, apply phi_0
//              there, fold aliases back onto the lattice, one inverse FFT.
//   separable  sigma a sum of products of per-slot factors: FFT products.
// phi_0 is always evaluated at the exact (unfolded) sum in the first two routes; the
// separable route applies it after the pointwise product, i.e. at the folded sum, so it
// agrees with the others when the product spectrum does not alias.

#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscilab/amplitude.hpp"
#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/parallel.hpp"
#include "oscilab/phase.hpp"

namespace oscilab {

enum class Route { automatic, direct, spectral, separable };

inline const char* to_string(Route r) {
  switch (r) {
    case Route::automatic: return "automatic";
    case Route::direct: return "direct";
    case Route::spectral: return "spectral";
    case Route::separable: return "separable";
  }
  return "?";
}

inline Route route_from_name(const std::string& s) {
  if (s == "automatic" || s == "auto") return Route::automatic;
  if (s == "direct") return Route::direct;
  if (s == "spectral") return Route::spectral;
  if (s == "separable" || s == "fast") return Route::separable;
  throw config_error("unknown evaluation route '" + s + "'");
}

struct OperatorSpec {
  MultilinearAmplitude amplitude;
  std::vector<Phase> phases;   // phi_0, ..., phi_N
  std::vector<Point> shifts;   // empty, or one vector per slot multiplying xi_j in the phase
};

/// Shift vector 2^{-k} u of the shifted projections.
inline Point projection_shift(const Point& u, int k) {
  Point s{};
  for (int d = 0; d < max_dim; ++d) s[static_cast<std::size_t>(d)] = std::ldexp(u[static_cast<std::size_t>(d)], -k);
  return s;
}

/// Cost ceiling (number of complex multiply-adds) for the quadrature routes.
inline constexpr double quadrature_budget = 1073741824.0;  // 2^30
inline constexpr std::size_t amplitude_table_limit = std::size_t{1} << 22;

class PreparedOperator {
public:
  PreparedOperator(const OperatorSpec& spec, const Grid& grid, Route route = Route::automatic)
      : spec_(spec), grid_(grid) {
    const int N = spec.amplitude.arity();
    if (static_cast<int>(spec.phases.size()) != N + 1)
      throw error("OperatorSpec: expected " + std::to_string(N + 1) + " phases, got " + std::to_string(spec.phases.size()));
    if (spec.amplitude.dim() != grid.dim()) throw error("OperatorSpec: amplitude dimension does not match the grid");
    if (!spec.shifts.empty() && static_cast<int>(spec.shifts.size()) != N)
      throw error("OperatorSpec: shift vectors must be given for every slot");
    N_ = static_cast<std::size_t>(N);
    n_ = static_cast<std::size_t>(grid.dim());
    P_ = grid.total();

    const bool sep = spec.amplitude.has_separable_terms() && spec.amplitude.x_independent();
    if (route == Route::automatic) {
      if (sep) route = Route::separable;
      else if (spec.amplitude.x_independent()) route = Route::spectral;
      else route = Route::direct;
    }
    if (route == Route::separable && !sep)
      throw error("separable route requested for an amplitude '" + spec.amplitude.name() +
                  "' that is not an x-independent sum of separable terms");
    if (route == Route::spectral && !spec.amplitude.x_independent())
      throw error("spectral route requires an x-independent amplitude");
    route_ = route;

    const double cost = std::pow(static_cast<double>(P_), static_cast<double>(N_) + (route == Route::direct ? 1.0 : 0.0));
    if (route != Route::separable && cost > quadrature_budget) {
      throw budget_error(std::string("multilinear ") + to_string(route) + " quadrature needs " + std::to_string(cost) +
                         " operations, above the budget of 2^30; use the separable route");
    }
    prepare_slots();
    if (route == Route::separable) prepare_separable();
    else prepare_quadrature();
  }

  Route route() const { return route_; }
  const Grid& grid() const { return grid_; }

  Field apply(std::span<const Field> inputs) const {
    const Field out = apply_spectral_or_physical(inputs);
    return to_physical(out);
  }

  Field apply(const std::vector<Field>& inputs) const { return apply(std::span<const Field>(inputs)); }

  /// Same result in spectral representation (saves a transform on the spectral route).
  Field apply_spectral(std::span<const Field> inputs) const { return to_spectral(apply_spectral_or_physical(inputs)); }

  /// Spectral route only: sum over Xi of sigma(Xi) prod_j g_j(xi_j) kernel(idx, e) e^{i phi_0(eta)},
  /// binned at the exact sum eta (extended index e) and folded onto the lattice.
  template <class Kernel>
  Field spectral_sum(std::span<const Field> inputs, Kernel&& kernel) const {
    check_inputs(inputs);
    if (route_ != Route::spectral) throw error("spectral_sum requires the spectral route");
    const auto g = weighted_slots(inputs);
    std::vector<const Complex*> slot;
    for (const auto& v : g) slot.push_back(v.data());
    std::vector<Complex> spec(P_, Complex(0.0));
    std::vector<double> Xi(N_ * n_);
    const Point zero{};
    const double inv_w = 1.0 / grid_.freq_weight();
    for_each_tuple(slot, [&](const std::vector<std::size_t>& idx, std::size_t flat, Complex prod, std::size_t e) {
      if (prod == Complex(0.0)) return;
      spec[fold_[e]] += sigma_at({zero.data(), n_}, idx, flat, Xi) * prod * kernel(idx, e) * out_ext_phase_[e] * inv_w;
    });
    return Field(grid_, Representation::spectral, std::move(spec));
  }

  /// Number of exact sum frequencies and the coordinates of one of them.
  std::size_t sum_lattice_size() const { return ext_total_; }
  Point sum_frequency(std::size_t e) const {
    Point eta{};
    const long offset = static_cast<long>(N_) * (grid_.points() / 2);
    for (std::size_t d = n_; d-- > 0;) {
      eta[d] = (static_cast<long>(e % ext_side_) - offset) * grid_.freq_step();
      e /= ext_side_;
    }
    return eta;
  }

private:
  void check_inputs(std::span<const Field> inputs) const {
    if (inputs.size() != N_)
      throw error("multilinear operator expects " + std::to_string(N_) + " inputs, got " + std::to_string(inputs.size()));
    for (const auto& f : inputs)
      if (!(f.grid() == grid_)) throw error("multilinear operator: inputs must share the operator's grid");
  }

  void prepare_slots() {
    slot_phase_.assign(N_, std::vector<Complex>(P_));
    for (std::size_t j = 0; j < N_; ++j) {
      const Phase& phi = spec_.phases[j + 1];
      for (std::size_t i = 0; i < P_; ++i) {
        const Point xi = grid_.frequency(i);
        double arg = phi.eval({xi.data(), n_});
        if (!spec_.shifts.empty())
          for (std::size_t d = 0; d < n_; ++d) arg += xi[d] * spec_.shifts[j][d];
        slot_phase_[j][i] = std::polar(1.0, arg);
      }
    }
  }

  void prepare_separable() {
    for (const auto& term : spec_.amplitude.terms()) {
      std::vector<std::vector<Complex>> tables(N_);
      for (std::size_t j = 0; j < N_; ++j) {
        tables[j] = multiplier_table(grid_, term.factors[j]);
        for (std::size_t i = 0; i < P_; ++i) tables[j][i] *= slot_phase_[j][i];
      }
      sep_tables_.push_back(std::move(tables));
      sep_coeff_.push_back(term.coefficient);
    }
    if (!spec_.phases[0].is_zero()) {
      const Phase phi0 = spec_.phases[0];
      out_phase_ = multiplier_table(grid_, [&](std::span<const double> xi) { return std::polar(1.0, phi0.eval(xi)); });
    }
  }

  void prepare_quadrature() {
    const int G = grid_.points();
    const auto uG = static_cast<std::size_t>(G);
    ext_side_ = N_ * (uG - 1) + 1;
    ext_total_ = 1;
    for (std::size_t d = 0; d < n_; ++d) ext_total_ *= ext_side_;
    const long offset = static_cast<long>(N_) * (G / 2);

    // per lattice point: contribution to the flat extended index, and its coordinates
    ext_step_.assign(P_, 0);
    freq_.assign(P_ * n_, 0.0);
    for (std::size_t i = 0; i < P_; ++i) {
      long flat = 0;
      for (std::size_t d = 0; d < n_; ++d) {
        const int k = grid_.wavenumber(grid_.axis_index(i, static_cast<int>(d)));
        flat = flat * static_cast<long>(ext_side_) + k;
        freq_[i * n_ + d] = k * grid_.freq_step();
      }
      ext_step_[i] = flat;
    }
    long base = 0;
    for (std::size_t d = 0; d < n_; ++d) base = base * static_cast<long>(ext_side_) + offset;
    ext_base_ = base;

    // phi_0 at the exact sum, and the alias fold back onto the lattice
    out_ext_phase_.assign(ext_total_, Complex(1.0));
    fold_.assign(ext_total_, 0);
    for (std::size_t e = 0; e < ext_total_; ++e) {
      std::size_t rest = e;
      Point eta{};
      std::vector<int> k(n_);
      for (std::size_t d = n_; d-- > 0;) {
        const long digit = static_cast<long>(rest % ext_side_);
        rest /= ext_side_;
        k[d] = static_cast<int>(digit - offset);
        eta[d] = k[d] * grid_.freq_step();
      }
      if (!spec_.phases[0].is_zero()) out_ext_phase_[e] = std::polar(1.0, spec_.phases[0].eval({eta.data(), n_}));
      fold_[e] = grid_.spectral_index(k);
    }

    // amplitude table for x-independent sigma
    const double table_size = std::pow(static_cast<double>(P_), static_cast<double>(N_));
    if (spec_.amplitude.x_independent() && table_size <= static_cast<double>(amplitude_table_limit)) {
      sigma_table_.resize(static_cast<std::size_t>(table_size));
      std::vector<std::size_t> idx(N_, 0);
      std::vector<double> Xi(N_ * n_);
      const Point zero{};
      for (std::size_t t = 0; t < sigma_table_.size(); ++t) {
        std::size_t rest = t;
        for (std::size_t j = N_; j-- > 0;) {
          idx[j] = rest % P_;
          rest /= P_;
        }
        for (std::size_t j = 0; j < N_; ++j)
          for (std::size_t d = 0; d < n_; ++d) Xi[j * n_ + d] = freq_[idx[j] * n_ + d];
        const Complex v = spec_.amplitude.eval({zero.data(), n_}, Xi);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw error("amplitude '" + spec_.amplitude.name() + "' is not finite at Xi = " + format_point(Xi));
        sigma_table_[t] = v;
      }
    }

    if (route_ == Route::direct) {
      // e^{i x_a xi_b} per axis
      axis_exp_.resize(uG * uG);
      for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b)
          axis_exp_[static_cast<std::size_t>(a) * uG + static_cast<std::size_t>(b)] =
              std::polar(1.0, grid_.coordinate(a) * grid_.wavenumber(b) * grid_.freq_step());
    }
  }

  std::vector<std::vector<Complex>> weighted_slots(std::span<const Field> inputs) const {
    const double w = grid_.freq_weight();
    std::vector<std::vector<Complex>> g(N_, std::vector<Complex>(P_));
    for (std::size_t j = 0; j < N_; ++j) {
      const Field spec = to_spectral(inputs[j]);
      for (std::size_t i = 0; i < P_; ++i) g[j][i] = w * spec[i] * slot_phase_[j][i];
    }
    return g;
  }

  Complex sigma_at(std::span<const double> x, const std::vector<std::size_t>& idx, std::size_t flat,
                   std::vector<double>& Xi) const {
    if (!sigma_table_.empty()) return sigma_table_[flat];
    for (std::size_t j = 0; j < N_; ++j)
      for (std::size_t d = 0; d < n_; ++d) Xi[j * n_ + d] = freq_[idx[j] * n_ + d];
    return spec_.amplitude.eval(x, Xi);
  }

  // Visits every Xi in lexicographic order with the running product of slot values.
  template <class Visit>
  void for_each_tuple(const std::vector<const Complex*>& slot, Visit&& visit) const {
    std::vector<std::size_t> idx(N_, 0);
    std::vector<Complex> prod(N_ + 1);
    std::vector<long> ext(N_ + 1);
    prod[0] = 1.0;
    ext[0] = ext_base_;
    std::size_t level = 0;
    std::size_t flat = 0;
    for (;;) {
      for (std::size_t j = level; j < N_; ++j) {
        prod[j + 1] = prod[j] * slot[j][idx[j]];
        ext[j + 1] = ext[j] + ext_step_[idx[j]];
      }
      visit(idx, flat, prod[N_], static_cast<std::size_t>(ext[N_]));
      ++flat;
      std::size_t j = N_;
      while (j > 0) {
        --j;
        if (++idx[j] < P_) break;
        idx[j] = 0;
        if (j == 0) return;
      }
      level = j;
    }
  }

  Field apply_spectral_or_physical(std::span<const Field> inputs) const {
    check_inputs(inputs);
    switch (route_) {
      case Route::separable: return run_separable(inputs);
      case Route::spectral: return run_spectral(inputs);
      case Route::direct: return run_direct(inputs);
      case Route::automatic: break;
    }
    throw error("unresolved route");
  }

  Field run_separable(std::span<const Field> inputs) const {
    std::vector<Field> spec;
    for (const auto& f : inputs) spec.push_back(to_spectral(f));
    std::vector<Complex> acc(P_, Complex(0.0));
    for (std::size_t t = 0; t < sep_tables_.size(); ++t) {
      std::vector<Complex> prod(P_, sep_coeff_[t]);
      for (std::size_t j = 0; j < N_; ++j) {
        const Field pj = to_physical(apply_table(sep_tables_[t][j], spec[j]));
        for (std::size_t i = 0; i < P_; ++i) prod[i] *= pj[i];
      }
      for (std::size_t i = 0; i < P_; ++i) acc[i] += prod[i];
    }
    Field out(grid_, Representation::physical, std::move(acc));
    if (!out_phase_.empty()) out = to_physical(apply_table(out_phase_, out));
    return out;
  }

  Field run_spectral(std::span<const Field> inputs) const {
    const auto g = weighted_slots(inputs);
    std::vector<const Complex*> slot;
    for (const auto& v : g) slot.push_back(v.data());
    std::vector<Complex> W(ext_total_, Complex(0.0));
    std::vector<double> Xi(N_ * n_);
    const Point zero{};
    for_each_tuple(slot, [&](const std::vector<std::size_t>& idx, std::size_t flat, Complex prod, std::size_t e) {
      if (prod == Complex(0.0)) return;
      W[e] += sigma_at({zero.data(), n_}, idx, flat, Xi) * prod;
    });
    std::vector<Complex> spec(P_, Complex(0.0));
    const double inv_w = 1.0 / grid_.freq_weight();
    for (std::size_t e = 0; e < ext_total_; ++e)
      if (W[e] != Complex(0.0)) spec[fold_[e]] += W[e] * out_ext_phase_[e] * inv_w;
    return Field(grid_, Representation::spectral, std::move(spec));
  }

  Field run_direct(std::span<const Field> inputs) const {
    const auto g = weighted_slots(inputs);
    const auto uG = static_cast<std::size_t>(grid_.points());
    std::vector<Complex> out(P_);
    parallel_for(P_, [&](std::size_t xflat) {
      const Point x = grid_.position(xflat);
      std::vector<std::size_t> xa(n_);
      for (std::size_t d = 0; d < n_; ++d) xa[d] = static_cast<std::size_t>(grid_.axis_index(xflat, static_cast<int>(d)));
      std::vector<Complex> ex(P_);
      for (std::size_t i = 0; i < P_; ++i) {
        Complex e = 1.0;
        for (std::size_t d = 0; d < n_; ++d)
          e *= axis_exp_[xa[d] * uG + static_cast<std::size_t>(grid_.axis_index(i, static_cast<int>(d)))];
        ex[i] = e;
      }
      std::vector<std::vector<Complex>> local(N_, std::vector<Complex>(P_));
      std::vector<const Complex*> slot;
      for (std::size_t j = 0; j < N_; ++j) {
        for (std::size_t i = 0; i < P_; ++i) local[j][i] = g[j][i] * ex[i];
        slot.push_back(local[j].data());
      }
      std::vector<double> Xi(N_ * n_);
      Complex sum = 0.0;
      for_each_tuple(slot, [&](const std::vector<std::size_t>& idx, std::size_t flat, Complex prod, std::size_t e) {
        if (prod == Complex(0.0)) return;
        sum += sigma_at({x.data(), n_}, idx, flat, Xi) * prod * out_ext_phase_[e];
      });
      out[xflat] = sum;
    });
    return Field(grid_, Representation::physical, std::move(out));
  }

  OperatorSpec spec_;
  Grid grid_;
  Route route_ = Route::automatic;
  std::size_t N_ = 0, n_ = 0, P_ = 0;
  std::vector<std::vector<Complex>> slot_phase_;
  // separable
  std::vector<std::vector<std::vector<Complex>>> sep_tables_;
  std::vector<Complex> sep_coeff_;
  std::vector<Complex> out_phase_;
  // quadrature
  std::size_t ext_side_ = 0, ext_total_ = 0;
  long ext_base_ = 0;
  std::vector<long> ext_step_;
  std::vector<double> freq_;
  std::vector<Complex> out_ext_phase_;
  std::vector<std::size_t> fold_;
  std::vector<Complex> sigma_table_;
  std::vector<Complex> axis_exp_;
};

inline Field eval_multilinear_oio(const OperatorSpec& spec, std::span<const Field> inputs,
                                  Route route = Route::automatic) {
  if (inputs.empty()) throw error("eval_multilinear_oio: no inputs");
  return PreparedOperator(spec, inputs.front().grid(), route).apply(inputs);
}

inline Field eval_multilinear_oio(const OperatorSpec& spec, const std::vector<Field>& inputs,
                                  Route route = Route::automatic) {
  return eval_multilinear_oio(spec, std::span<const Field>(inputs), route);
}

/// T f(x) = sum_xi a(x, xi) f^(xi) e^{i x.xi + i phi(xi)} (dxi/2pi)^n.
inline Field eval_linear_oio(const MultilinearAmplitude& a, const Phase& phi, const Field& f) {
  if (a.arity() != 1) throw error("eval_linear_oio: amplitude must have arity 1");
  if (a.dim() != f.grid().dim()) throw error("eval_linear_oio: amplitude dimension does not match the grid");
  if (a.x_independent()) {
    const Point zero{};
    const auto n = static_cast<std::size_t>(a.dim());
    return apply_multiplier(
        [&](std::span<const double> xi) { return a.eval({zero.data(), n}, xi) * std::polar(1.0, phi.eval(xi)); }, f);
  }
  OperatorSpec spec{a, {zero_phase(), phi}, {}};
  const std::vector<Field> in{f};
  return PreparedOperator(spec, f.grid(), Route::direct).apply(in);
}

/// Paraproduct: all phases zero.
inline OperatorSpec paraproduct_spec(const MultilinearAmplitude& zeta) {
  return OperatorSpec{zeta, std::vector<Phase>(static_cast<std::size_t>(zeta.arity()) + 1, zero_phase()), {}};
}

inline Field eval_paraproduct(const MultilinearAmplitude& zeta, std::span<const Field> inputs,
                              Route route = Route::automatic) {
  return eval_multilinear_oio(paraproduct_spec(zeta), inputs, route);
}

inline Field eval_paraproduct(const MultilinearAmplitude& zeta, const std::vector<Field>& inputs,
                              Route route = Route::automatic) {
  return eval_paraproduct(zeta, std::span<const Field>(inputs), route);
}

/// e^{i t phi(D)} f.
inline Field free_propagator(double t, const Phase& phi, const Field& f) {
  if (!std::isfinite(t)) throw error("free_propagator: time must be finite");
  if (t == 0.0 || phi.is_zero()) return f;
  return apply_multiplier([&](std::span<const double> xi) { return std::polar(1.0, t * phi.eval(xi)); }, f);
}

}  // namespace oscilab
