#pragma once

// Coupled system driven by free waves:
//
//   i d_t v_j + phi_j(D) v_j = 0,   v_j(0) = f_j,        j = 1..N
//   u(t) = int_0^t e^{i(t-r) phi_0(D)} T_zeta(v_1(r), ..., v_N(r)) dr,   u(0) = 0
//
// so that i d_t u + phi_0(D) u = i T_zeta(v). The v_j are exact (unimodular multipliers);
// only the r-integral is discretized.
//
// Time quadratures:
//   trapezoid       composite, on the node grid t_i = i T / M
//   gauss_legendre  4 nodes per panel [t_{i-1}, t_i]
//   resonance       x-independent zeta only: each Xi term integrates in closed form,
//                   int_0^t e^{i(t-r) phi_0(eta)} e^{i r (phi_1(xi_1) + ...)} dr, eta = sum xi_j.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "oscilab/amplitude.hpp"
#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/norms.hpp"
#include "oscilab/oio.hpp"
#include "oscilab/phase.hpp"
#include "oscilab/random.hpp"
#include "oscilab/ratio_table.hpp"

namespace oscilab {

enum class TimeQuadrature { trapezoid, gauss_legendre, resonance };

inline TimeQuadrature time_quadrature_from_name(const std::string& s) {
  if (s == "trapezoid") return TimeQuadrature::trapezoid;
  if (s == "gauss_legendre") return TimeQuadrature::gauss_legendre;
  if (s == "resonance") return TimeQuadrature::resonance;
  throw config_error("unknown time quadrature '" + s + "'");
}

inline const char* to_string(TimeQuadrature q) {
  switch (q) {
    case TimeQuadrature::trapezoid: return "trapezoid";
    case TimeQuadrature::gauss_legendre: return "gauss_legendre";
    case TimeQuadrature::resonance: return "resonance";
  }
  return "?";
}

/// m_c(s) = -n s sum_j |1/p_j - 1/2| (s != 1), -(n-1) sum_j |1/p_j - 1/2| (s = 1).
inline double critical_order(int n, double s, const std::vector<double>& exponents) {
  double sum = 0.0;
  for (double p : exponents) sum += std::abs(1.0 / p - 0.5);
  return s == 1.0 ? -(n - 1.0) * sum : -n * s * sum;
}

struct SystemConfig {
  std::vector<Phase> phases;     // phi_0, ..., phi_N
  MultilinearAmplitude zeta;
  std::vector<Field> data;       // f_1, ..., f_N
  std::vector<double> kappa;     // Sobolev indices of the data
  std::vector<double> exponents; // p_0, ..., p_N
  double horizon = 1.0;
  int steps = 64;
  TimeQuadrature quadrature = TimeQuadrature::trapezoid;
  Route route = Route::automatic;

  std::size_t arity() const { return data.size(); }

  void validate() const {
    const std::size_t N = data.size();
    if (N == 0) throw error("SystemConfig: no initial data");
    if (phases.size() != N + 1) throw error("SystemConfig: expected " + std::to_string(N + 1) + " phases");
    if (static_cast<std::size_t>(zeta.arity()) != N) throw error("SystemConfig: paraproduct arity does not match the data");
    if (kappa.size() != N) throw error("SystemConfig: expected one Sobolev index per input");
    if (exponents.size() != N + 1) throw error("SystemConfig: expected exponents p_0..p_N");
    for (double p : exponents)
      if (!(p > 1.0) || !std::isfinite(p)) throw error("SystemConfig: exponents must lie in (1, inf)");
    double sum = 0.0;
    for (std::size_t j = 1; j <= N; ++j) sum += 1.0 / exponents[j];
    if (std::abs(1.0 / exponents[0] - sum) > 1e-12) throw error("SystemConfig: Hoelder condition 1/p_0 = sum 1/p_j violated");
    for (double k : kappa)
      if (!(k >= 0.0)) throw error("SystemConfig: Sobolev indices must be nonnegative");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw error("SystemConfig: horizon must be positive");
    if (steps < 1) throw error("SystemConfig: need at least one time step");
    for (const auto& f : data)
      if (!(f.grid() == data.front().grid())) throw error("SystemConfig: initial data must share one grid");
    if (zeta.dim() != data.front().grid().dim()) throw error("SystemConfig: paraproduct dimension does not match the grid");
  }

  const Grid& grid() const { return data.front().grid(); }

  /// Common degree s of the nonzero phases; Klein-Gordon phases count as s = 1.
  double degree() const {
    std::optional<double> s;
    for (const auto& p : phases) {
      if (p.is_zero()) continue;
      if (s && std::abs(*s - p.order()) > 1e-12) throw error("SystemConfig: phases have different orders");
      s = p.order();
    }
    return s.value_or(2.0);
  }

  /// True when some phase is not a homogeneous power (results are outside the stated hypotheses).
  bool outside_hypotheses() const {
    for (const auto& p : phases)
      if (!p.homogeneous()) return true;
    return false;
  }

  double kappa_min() const {
    double k = kappa.front();
    for (double v : kappa) k = std::min(k, v);
    return k;
  }

  double critical() const { return critical_order(grid().dim(), degree(), exponents); }
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<Field> snapshots;     // u(t_i), physical
  std::vector<double> norm_traces;  // ||u(t_i)||_2
  std::map<double, double> space_time_norms;
  bool outside_hypotheses = false;
};

namespace detail {

inline std::vector<Complex> phase_table(const Grid& g, const Phase& phi) {
  std::vector<Complex> t(g.total());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Point xi = g.frequency(i);
    t[i] = Complex(phi.eval({xi.data(), static_cast<std::size_t>(g.dim())}), 0.0);
  }
  return t;
}

inline void check_finite(const Field& f, const char* what) {
  for (const auto& v : f.samples())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw error(std::string(what) + ": non-finite value");
}

// Free waves and the forcing T_zeta(v(r)) in spectral form.
class Forcing {
public:
  explicit Forcing(const SystemConfig& cfg)
      : cfg_(cfg), op_(paraproduct_spec(cfg.zeta), cfg.grid(), cfg.route) {
    for (std::size_t j = 0; j < cfg.arity(); ++j) {
      spectra_.push_back(to_spectral(cfg.data[j]));
      phases_.push_back(phase_table(cfg.grid(), cfg.phases[j + 1]));
    }
    phase0_ = phase_table(cfg.grid(), cfg.phases[0]);
  }

  std::vector<Field> waves(double r) const {
    std::vector<Field> v;
    for (std::size_t j = 0; j < spectra_.size(); ++j) {
      std::vector<Complex> s(spectra_[j].samples().begin(), spectra_[j].samples().end());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] *= std::polar(1.0, r * phases_[j][i].real());
      v.emplace_back(cfg_.grid(), Representation::spectral, std::move(s));
    }
    return v;
  }

  std::vector<Complex> at(double r) const {
    const auto v = waves(r);
    Field out = op_.apply_spectral(v);
    check_finite(out, "solve_coupled_system");
    return std::move(out).release();
  }

  double phi0(std::size_t i) const { return phase0_[i].real(); }
  const PreparedOperator& op() const { return op_; }
  const std::vector<Field>& spectra() const { return spectra_; }
  const std::vector<std::vector<Complex>>& slot_phases() const { return phases_; }

private:
  const SystemConfig& cfg_;
  PreparedOperator op_;
  std::vector<Field> spectra_;
  std::vector<std::vector<Complex>> phases_;
  std::vector<Complex> phase0_;
};

}  // namespace detail

inline EvolutionResult solve_coupled_system(const SystemConfig& cfg) {
  cfg.validate();
  const Grid& g = cfg.grid();
  const std::size_t P = g.total();
  const int M = cfg.steps;
  const double dt = cfg.horizon / M;

  // budget: forcing evaluations x per-evaluation cost
  const detail::Forcing forcing(cfg);
  const double per_eval = forcing.op().route() == Route::separable
                              ? static_cast<double>(P) * 64.0
                              : std::pow(static_cast<double>(P), static_cast<double>(cfg.arity()));
  const double evals = cfg.quadrature == TimeQuadrature::gauss_legendre ? 4.0 * M : M + 1.0;
  if (per_eval * evals > 16.0 * quadrature_budget)
    throw budget_error("solve_coupled_system: " + std::to_string(per_eval * evals) + " operations exceed the budget");

  EvolutionResult res;
  res.outside_hypotheses = cfg.outside_hypotheses();
  for (int i = 0; i <= M; ++i) res.times.push_back(i * dt);
  std::vector<std::vector<Complex>> uhat(static_cast<std::size_t>(M) + 1, std::vector<Complex>(P, Complex(0.0)));

  auto rotate = [&](double t, std::size_t i) { return std::polar(1.0, t * forcing.phi0(i)); };

  switch (cfg.quadrature) {
    case TimeQuadrature::trapezoid: {
      // u(t_i) = e^{i t_i phi0} [dt sum_{k<=i} e^{-i r_k phi0} F_k - dt/2 (F_0 + e^{-i t_i phi0} F_i)]
      std::vector<Complex> acc(P, Complex(0.0));
      const auto F0 = forcing.at(0.0);
      for (int k = 0; k <= M; ++k) {
        const double r = res.times[static_cast<std::size_t>(k)];
        const auto Fk = k == 0 ? F0 : forcing.at(r);
        for (std::size_t i = 0; i < P; ++i) acc[i] += dt * std::conj(rotate(r, i)) * Fk[i];
        if (k == 0) continue;
        auto& u = uhat[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < P; ++i)
          u[i] = rotate(r, i) * (acc[i] - 0.5 * dt * (F0[i] + std::conj(rotate(r, i)) * Fk[i]));
      }
      break;
    }
    case TimeQuadrature::gauss_legendre: {
      static const std::array<double, 4> node = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                                 0.8611363115940526};
      static const std::array<double, 4> weight = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                                   0.3478548451374538};
      std::vector<Complex> acc(P, Complex(0.0));
      for (int k = 1; k <= M; ++k) {
        const double a = res.times[static_cast<std::size_t>(k) - 1];
        for (int q = 0; q < 4; ++q) {
          const double r = a + 0.5 * dt * (node[static_cast<std::size_t>(q)] + 1.0);
          const auto F = forcing.at(r);
          const double w = 0.5 * dt * weight[static_cast<std::size_t>(q)];
          for (std::size_t i = 0; i < P; ++i) acc[i] += w * std::conj(rotate(r, i)) * F[i];
        }
        const double t = res.times[static_cast<std::size_t>(k)];
        auto& u = uhat[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < P; ++i) u[i] = rotate(t, i) * acc[i];
      }
      break;
    }
    case TimeQuadrature::resonance: {
      const PreparedOperator& op = forcing.op();
      if (op.route() != Route::spectral)
        throw error("resonance time quadrature needs the spectral route (x-independent, non-separable evaluation)");
      const auto n = static_cast<std::size_t>(g.dim());
      std::vector<double> phi0_ext(op.sum_lattice_size());
      for (std::size_t e = 0; e < phi0_ext.size(); ++e) {
        const Point eta = op.sum_frequency(e);
        phi0_ext[e] = cfg.phases[0].eval({eta.data(), n});
      }
      const auto& slot = forcing.slot_phases();
      for (int k = 1; k <= M; ++k) {
        const double t = res.times[static_cast<std::size_t>(k)];
        const Field u = op.spectral_sum(forcing.spectra(), [&](const std::vector<std::size_t>& idx, std::size_t e) {
          double omega = -phi0_ext[e];
          for (std::size_t j = 0; j < idx.size(); ++j) omega += slot[j][idx[j]].real();
          const double x = t * omega;
          // int_0^t e^{i(t-r) phi0} e^{i r (phi0 + omega)} dr = e^{i t phi0} (e^{i t omega} - 1) / (i omega)
          const Complex integral = std::abs(x) < 1e-6 ? Complex(t, 0.0) * Complex(1.0 - x * x / 6.0, x / 2.0)
                                                      : (std::polar(1.0, x) - 1.0) / Complex(0.0, omega);
          return std::polar(1.0, t * phi0_ext[e]) * integral;
        });
        uhat[static_cast<std::size_t>(k)] = std::move(Field(u)).release();
      }
      break;
    }
  }

  for (int k = 0; k <= M; ++k) {
    Field s(g, Representation::spectral, std::move(uhat[static_cast<std::size_t>(k)]));
    Field u = to_physical(s);
    detail::check_finite(u, "solve_coupled_system");
    res.norm_traces.push_back(lebesgue_norm(u, 2.0));
    res.snapshots.push_back(std::move(u));
  }
  return res;
}

/// max over interior t_i of || i d_t u + phi_0(D) u - i T_zeta(v(t_i)) ||_2, d_t by central differences.
inline double residual_check(const EvolutionResult& res, const SystemConfig& cfg) {
  if (res.snapshots.size() < 3) throw error("residual_check: need at least 3 snapshots");
  cfg.validate();
  const detail::Forcing forcing(cfg);
  const Grid& g = cfg.grid();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < res.snapshots.size(); ++i) {
    const double dt2 = res.times[i + 1] - res.times[i - 1];
    const Field up = to_spectral(res.snapshots[i + 1]);
    const Field um = to_spectral(res.snapshots[i - 1]);
    const Field u = to_spectral(res.snapshots[i]);
    const auto F = forcing.at(res.times[i]);
    std::vector<Complex> r(g.total());
    for (std::size_t k = 0; k < r.size(); ++k)
      r[k] = Complex(0.0, 1.0) * (up[k] - um[k]) / dt2 + forcing.phi0(k) * u[k] - Complex(0.0, 1.0) * F[k];
    worst = std::max(worst, lebesgue_norm(Field(g, Representation::spectral, std::move(r)), 2.0));
  }
  return worst;
}

/// (sum_i w_i ||u(t_i)||^q)^{1/q} with trapezoid weights; max over nodes for q = inf.
inline double space_time_norm(const EvolutionResult& res, double q, const NormKind& kind) {
  if (!(q >= 1.0)) throw error("space_time_norm: q must be at least 1");
  if (res.snapshots.empty()) throw error("space_time_norm: empty result");
  std::vector<double> v;
  for (const auto& u : res.snapshots) v.push_back(norm(u, kind));
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  if (v.size() == 1) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    sum += 0.5 * (res.times[i + 1] - res.times[i]) * (std::pow(v[i], q) + std::pow(v[i + 1], q));
  return std::pow(sum, 1.0 / q);
}

// ---------------------------------------------------------------------------------------------
// Time rescaling. With lambda = t^{1/s} and h_j = g_j(lambda .):
//
//   <D>^{-r_0} T^{(t)}_sigma(<D>^{-r_j} g_j)(x)
//     = t^{E/s} [S_0 <D>^{-r_0} T^{(1)}_{sigma_t}(<D>^{-r_j} S_j h_j)](x / lambda)
//
//   E = max(-m, 0) + sum_{j=0..N} max(r_j, 0),  S_j = t^{-max(r_j,0)/s} <D/lambda>^{-r_j} <D>^{r_j},
//   sigma_t(Xi) = t^{min(m,0)/s} sigma(Xi / lambda).
//
// T^{(t)} carries the phases t phi_j. When lambda = 2^e, h_j on the grid of half-width L / lambda
// has exactly the samples of g_j, and its output samples line up with x / lambda.

struct ScalingSetup {
  std::vector<Phase> phases;  // phi_0..phi_N, homogeneous of one degree s
  MultilinearAmplitude sigma;
  std::vector<double> r;      // r_0..r_N
  std::vector<Field> inputs;  // g_1..g_N
  Route route = Route::automatic;
};

struct ScalingReport {
  double discrepancy = 0.0;
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  double exponent = 0.0;  // E / s
};

inline ScalingReport scaling_check(const ScalingSetup& setup, double t) {
  const std::size_t N = setup.inputs.size();
  if (N == 0 || setup.phases.size() != N + 1 || setup.r.size() != N + 1 || static_cast<std::size_t>(setup.sigma.arity()) != N)
    throw error("scaling_check: inconsistent setup sizes");
  std::optional<double> deg;
  for (const auto& p : setup.phases) {
    if (!p.homogeneous()) throw error("scaling_check: phases must be homogeneous");
    if (p.is_zero()) continue;
    if (deg && std::abs(*deg - p.order()) > 1e-12) throw error("scaling_check: phases must share one degree");
    deg = p.order();
  }
  const double s = deg.value_or(1.0);
  if (!(t > 0.0)) throw error("scaling_check: t must be positive");
  const double e = std::log2(t) / s;
  if (std::abs(e - std::round(e)) > 1e-12)
    throw error("scaling_check: t^{1/s} must be a power of two for the rescaled grid to share samples");
  const double lambda = std::ldexp(1.0, static_cast<int>(std::round(e)));
  const Grid& g1 = setup.inputs.front().grid();
  const Grid g2 = make_grid(g1.dim(), g1.points(), g1.half_width() / lambda);
  const double m = setup.sigma.order();

  double E = std::max(-m, 0.0);
  for (double rj : setup.r) E += std::max(rj, 0.0);

  auto bessel = [](double rr, double scale) {
    return [rr, scale](std::span<const double> xi) { return Complex(std::pow(1.0 + norm2(xi) * scale * scale, -0.5 * rr)); };
  };

  // left side on the original grid, phases t phi_j
  std::vector<Phase> scaled_phases;
  for (const auto& p : setup.phases) scaled_phases.push_back(p.scaled(t));
  std::vector<Field> lhs_in;
  for (std::size_t j = 0; j < N; ++j) lhs_in.push_back(apply_multiplier(bessel(setup.r[j + 1], 1.0), setup.inputs[j]));
  const Field lhs = to_physical(apply_multiplier(
      bessel(setup.r[0], 1.0), PreparedOperator({setup.sigma, scaled_phases, {}}, g1, setup.route).apply(lhs_in)));

  // right side on the dilated grid, phases phi_j, amplitude sigma_t
  const MultilinearAmplitude& base = setup.sigma;
  const double amp_scale = std::pow(t, std::min(m, 0.0) / s);
  const double inv = 1.0 / lambda;
  MultilinearAmplitude sigma_t(
      base.arity(), base.dim(), m,
      [base, amp_scale, inv](std::span<const double> x, std::span<const double> Xi) {
        std::vector<double> scaled(Xi.begin(), Xi.end());
        for (auto& v : scaled) v *= inv;
        return amp_scale * base.eval(x, scaled);
      },
      base.x_independent(), base.name() + "_t");
  std::vector<Field> rhs_in;
  for (std::size_t j = 0; j < N; ++j) {
    const Field h(g2, Representation::physical, std::move(to_physical(setup.inputs[j])).release());
    const double pre = std::pow(t, -std::max(setup.r[j + 1], 0.0) / s);
    rhs_in.push_back(scaled(apply_multiplier(bessel(setup.r[j + 1], inv), h), pre));
  }
  Field inner = PreparedOperator({sigma_t, setup.phases, {}}, g2, setup.route).apply(rhs_in);
  const double pre0 = std::pow(t, -std::max(setup.r[0], 0.0) / s);
  inner = to_physical(scaled(apply_multiplier(bessel(setup.r[0], inv), inner), pre0 * std::pow(t, E / s)));
  const Field rhs(g1, Representation::physical, std::vector<Complex>(inner.samples().begin(), inner.samples().end()));

  ScalingReport rep;
  rep.exponent = E / s;
  rep.lhs_norm = lebesgue_norm(lhs, 2.0);
  rep.rhs_norm = lebesgue_norm(rhs, 2.0);
  if (rep.lhs_norm == 0.0 && rep.rhs_norm == 0.0) rep.discrepancy = 0.0;
  else rep.discrepancy = relative_l2_error(rhs, lhs);
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Space-time estimate ratio:
//   || u ||_{L^q([0,T]) H^{target, p_0}} / prod_j || f_j ||_{H^{kappa_j, p_j}},
//   target = kappa + m_c(s) - m_zeta,
// for zeta = <Xi>^{m_zeta}, phases |xi|^s, and random-phase data with |f^(xi)| =
// <xi>^{-kappa_j - n/2 - 0.01} on |xi| <= R.

struct RatioExperimentConfig {
  int dim = 1;
  double degree = 2.0;
  int arity = 2;
  std::vector<double> exponents = {2.0, 4.0, 4.0};
  std::vector<double> kappa = {0.0, 0.0};
  double m_zeta = -1.0;
  std::optional<double> target_index;  // overrides kappa + m_c - m_zeta
  double horizon = 1.0;
  double q = 2.0;
  std::vector<int> bandwidths = {8, 16, 32, 64};
  int draws = 5;
  std::uint64_t seed = 0;
  int time_nodes = 41;
  int oversample = 8;  // G = oversample * R on the 2 pi torus
  TimeQuadrature quadrature = TimeQuadrature::resonance;
};

struct RatioExperimentResult {
  RatioTable table;             // R, draw, ratio
  std::vector<double> max_ratio;  // per bandwidth
  double critical = 0.0;
  double target = 0.0;
  double slope = 0.0;           // of log max_ratio vs log R
  double spread = 0.0;          // max / min of max_ratio across R
  bool increasing = false;      // max_ratio strictly increasing in R
};

/// Random-phase data with a prescribed spectral decay up to bandwidth R.
inline Field sobolev_profile_data(const Grid& g, double decay, double R, const CounterRng& rng) {
  return Field::from_spectrum(g, [&, k = std::uint64_t{0}](std::span<const double> xi) mutable {
    const std::uint64_t c = k++;
    const double r = euclid(xi);
    if (r > R) return Complex(0.0);
    return std::polar(std::pow(1.0 + r * r, -0.5 * decay), 2.0 * std::numbers::pi * rng.uniform(c));
  });
}

inline RatioExperimentResult estimate_ratio_experiment(const RatioExperimentConfig& c) {
  if (static_cast<int>(c.kappa.size()) != c.arity || static_cast<int>(c.exponents.size()) != c.arity + 1)
    throw error("estimate_ratio_experiment: kappa/exponent counts do not match the arity");
  if (c.bandwidths.size() < 2) throw error("estimate_ratio_experiment: need at least two bandwidths");
  if (c.draws < 1 || c.time_nodes < 2) throw error("estimate_ratio_experiment: need draws >= 1 and time_nodes >= 2");
  RatioExperimentResult out;
  out.critical = critical_order(c.dim, c.degree, c.exponents);
  double kmin = c.kappa.front();
  for (double k : c.kappa) kmin = std::min(kmin, k);
  const double natural = kmin + out.critical - c.m_zeta;
  if (!c.target_index && natural < 0.0)
    throw error("estimate_ratio_experiment: target index kappa + m_c - m_zeta = " + std::to_string(natural) +
                " is negative; the estimate needs it >= 0 to land in a function space");
  out.target = c.target_index.value_or(natural);
  out.table.columns = {"R", "draw", "ratio"};

  const Phase phi = homogeneous_phase(c.degree);
  const CounterRng root(c.seed, "ratio_experiment");
  for (int R : c.bandwidths) {
    const Grid g = make_grid(c.dim, c.oversample * R, std::numbers::pi);
    double best = 0.0;
    for (int d = 0; d < c.draws; ++d) {
      SystemConfig sys;
      sys.phases.assign(static_cast<std::size_t>(c.arity) + 1, phi);
      sys.zeta = japanese_bracket_amplitude(c.m_zeta, c.arity, c.dim);
      sys.kappa = c.kappa;
      sys.exponents = c.exponents;
      sys.horizon = c.horizon;
      sys.steps = c.time_nodes - 1;
      sys.quadrature = c.quadrature;
      sys.route = Route::spectral;
      double den = 1.0;
      for (int j = 0; j < c.arity; ++j) {
        const CounterRng rng = root.substream(static_cast<std::uint64_t>(R)).substream(static_cast<std::uint64_t>(d)).substream(static_cast<std::uint64_t>(j));
        sys.data.push_back(sobolev_profile_data(g, c.kappa[static_cast<std::size_t>(j)] + 0.5 * c.dim + 0.01, R, rng));
        den *= norm(sys.data.back(), NormKind::sobolev(c.kappa[static_cast<std::size_t>(j)], c.exponents[static_cast<std::size_t>(j) + 1]));
      }
      const auto res = solve_coupled_system(sys);
      const double num = space_time_norm(res, c.q, NormKind::sobolev(out.target, c.exponents[0]));
      const double ratio = num / den;
      out.table.add_row({static_cast<double>(R), static_cast<double>(d), ratio});
      best = std::max(best, ratio);
    }
    out.max_ratio.push_back(best);
  }
  std::vector<double> Rs(c.bandwidths.begin(), c.bandwidths.end());
  out.slope = loglog_slope(Rs, out.max_ratio);
  double lo = out.max_ratio.front(), hi = lo;
  out.increasing = true;
  for (std::size_t i = 0; i < out.max_ratio.size(); ++i) {
    lo = std::min(lo, out.max_ratio[i]);
    hi = std::max(hi, out.max_ratio[i]);
    if (i > 0 && !(out.max_ratio[i] > out.max_ratio[i - 1])) out.increasing = false;
  }
  out.spread = hi / lo;
  return out;
}

}  // namespace oscilab
