#pragma once

// Three-regime split of a multilinear amplitude:
//
//   sigma = sigma_0 + sum_j sigma_j + sum_{j != k} sigma_jk
//
//   sigma_0  = chi(Xi) sigma,                  chi = bump(8 |Xi|)
//   sigma_j  = (1 - chi) nu_j sigma / max(1, sum nu)
//   sigma_jk = (1 - chi) (1 - sum nu~) w_jk / 2 sigma
//
// nu_j = 1 - Lambda(|xi_j|^2 / |Xi|^2) with Lambda = 1 below c1, 0 above c2, where
// c1 = A^2/(1+A^2), c2 = B^2/(1+B^2), A = 32 sqrt(N-1), B = 64 sqrt(N-1): then nu_j = 0 when
// |xi_j| <= A |Xi'_j| and nu_j = 1 when |xi_j| >= B |Xi'_j|.
//
// The residual lives where every t_i = |xi_i|^2/|Xi|^2 is below c2, so the two largest t_i are
// at least a = (1 - c2)/(N - 1). Pair weights w_jk = beta_j beta_k / sum_{i<l} beta_i beta_l with
// beta_i = 1 - smooth_step(t_i; a/2, a) are then well defined, and on supp sigma_jk both
// t_j, t_k >= a/2, giving |xi_j| / |xi_k| in [1/C, C] with C = sqrt(2/a).

#include <cmath>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "oscilab/amplitude.hpp"
#include "oscilab/cutoff.hpp"
#include "oscilab/error.hpp"
#include "oscilab/random.hpp"

namespace oscilab {

struct DecompositionConstants {
  double chi_inner = 0.125;  // chi = 1 for |Xi| <= chi_inner
  double chi_outer = 0.25;   // chi = 0 for |Xi| >= chi_outer
  double c1 = 0.0;
  double c2 = 0.0;
  double domination = 0.0;     // c with c |xi_j|^2 >= |Xi|^2 on supp sigma_j
  double pair_threshold = 0.0; // a
  double comparability = 0.0;  // C
};

/// Pointwise weights of every piece at one Xi (they sum to 1).
struct PartitionWeights {
  double chi = 0.0;
  std::vector<double> single;                 // N entries
  std::vector<std::vector<double>> pair;      // N x N, zero diagonal
};

class FrequencyPartition {
public:
  FrequencyPartition(int N, int n) : N_(N), n_(n) {
    if (N < 2) throw error("decompose_amplitude: arity must be at least 2, got " + std::to_string(N));
    const double A = 32.0 * std::sqrt(N - 1.0);
    const double B = 64.0 * std::sqrt(N - 1.0);
    k_.c1 = A * A / (1.0 + A * A);
    k_.c2 = B * B / (1.0 + B * B);
    k_.domination = 1.0 / k_.c1;
    k_.pair_threshold = (1.0 - k_.c2) / (N - 1.0);
    k_.comparability = std::sqrt(2.0 / k_.pair_threshold);
  }

  int arity() const { return N_; }
  int dim() const { return n_; }
  const DecompositionConstants& constants() const { return k_; }

  double chi(std::span<const double> Xi) const { return bump(8.0 * euclid(Xi)); }

  double nu(int j, std::span<const double> Xi) const {
    const double total = norm2(Xi);
    if (total == 0.0) return 0.0;
    const auto n = static_cast<std::size_t>(n_);
    const double t = norm2(Xi.subspan(static_cast<std::size_t>(j) * n, n)) / total;
    return 1.0 - smooth_step(t, k_.c1, k_.c2);
  }

  PartitionWeights weights(std::span<const double> Xi) const {
    const auto N = static_cast<std::size_t>(N_);
    const auto n = static_cast<std::size_t>(n_);
    PartitionWeights w;
    w.chi = chi(Xi);
    w.single.assign(N, 0.0);
    w.pair.assign(N, std::vector<double>(N, 0.0));
    const double outer = 1.0 - w.chi;
    const double total = norm2(Xi);
    if (outer == 0.0 || total == 0.0) return w;

    std::vector<double> t(N), nu(N);
    double nu_sum = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      t[j] = norm2(Xi.subspan(j * n, n)) / total;
      nu[j] = 1.0 - smooth_step(t[j], k_.c1, k_.c2);
      nu_sum += nu[j];
    }
    const double scale = nu_sum > 1.0 ? 1.0 / nu_sum : 1.0;
    double assigned = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      w.single[j] = outer * nu[j] * scale;
      assigned += nu[j] * scale;
    }
    const double residual = outer * (1.0 - assigned);
    if (residual <= 0.0) return w;

    const double a = k_.pair_threshold;
    std::vector<double> beta(N);
    for (std::size_t j = 0; j < N; ++j) beta[j] = 1.0 - smooth_step(t[j], 0.5 * a, a);
    double denom = 0.0;
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = j + 1; k < N; ++k) denom += beta[j] * beta[k];
    if (denom <= 0.0) throw error("decompose_amplitude: empty pair partition at a residual point");
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k)
        if (j != k) w.pair[j][k] = 0.5 * residual * beta[j] * beta[k] / denom;
    return w;
  }

private:
  int N_;
  int n_;
  DecompositionConstants k_;
};

struct PairPiece {
  int j = 0;
  int k = 0;
  MultilinearAmplitude sigma;
};

struct DecomposedAmplitude {
  MultilinearAmplitude sigma0;
  std::vector<MultilinearAmplitude> sigma_j;
  std::vector<PairPiece> sigma_jk;  // ordered pairs j != k
  DecompositionConstants constants;
  std::shared_ptr<const FrequencyPartition> partition;

  /// Sum of all pieces at (x, Xi).
  Complex reconstruct(std::span<const double> x, std::span<const double> Xi) const {
    Complex s = sigma0(x, Xi);
    for (const auto& p : sigma_j) s += p(x, Xi);
    for (const auto& p : sigma_jk) s += p.sigma(x, Xi);
    return s;
  }
};

inline DecomposedAmplitude decompose_amplitude(const MultilinearAmplitude& sigma) {
  const int N = sigma.arity();
  auto part = std::make_shared<const FrequencyPartition>(N, sigma.dim());
  DecomposedAmplitude out;
  out.partition = part;
  out.constants = part->constants();
  out.sigma0 = sigma.weighted([part](std::span<const double> Xi) { return part->weights(Xi).chi; },
                              sigma.name() + "_0");
  for (int j = 0; j < N; ++j) {
    out.sigma_j.push_back(sigma.weighted(
        [part, j](std::span<const double> Xi) { return part->weights(Xi).single[static_cast<std::size_t>(j)]; },
        sigma.name() + "_" + std::to_string(j + 1)));
  }
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) {
      if (j == k) continue;
      out.sigma_jk.push_back(
          {j, k,
           sigma.weighted(
               [part, j, k](std::span<const double> Xi) {
                 return part->weights(Xi).pair[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
               },
               sigma.name() + "_" + std::to_string(j + 1) + std::to_string(k + 1))});
    }
  }
  return out;
}

/// Random Xi in R^{N n} spread over the three regimes: |Xi| log-uniform in [1e-2, radius_max],
/// per-slot magnitudes log-uniform over three decades.
inline std::vector<std::vector<double>> decomposition_samples(int N, int n, std::size_t count, const CounterRng& rng,
                                                              double radius_max = 1e3) {
  const auto uN = static_cast<std::size_t>(N), un = static_cast<std::size_t>(n);
  std::vector<std::vector<double>> out;
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> Xi(uN * un);
    for (std::size_t j = 0; j < uN; ++j) {
      const double w = std::pow(10.0, rng.uniform(c++, -3.0, 0.0));
      for (std::size_t d = 0; d < un; ++d) Xi[j * un + d] = w * rng.normal(c++);
    }
    const double len = euclid(Xi);
    const double R = std::pow(10.0, rng.uniform(c++, -2.0, std::log10(radius_max)));
    if (len > 0.0)
      for (auto& v : Xi) v *= R / len;
    out.push_back(std::move(Xi));
  }
  return out;
}

struct DecompositionAudit {
  std::size_t samples = 0;
  double max_reconstruction_error = 0.0;  // relative to max(1, |sigma|)
  std::size_t sigma0_support_violations = 0;   // sigma_0 != 0 with |Xi| > 1/4
  std::size_t inner_support_violations = 0;    // sigma_j or sigma_jk != 0 with |Xi| <= 1/8
  std::size_t domination_violations = 0;       // sigma_j != 0 with c |xi_j|^2 < |Xi|^2
  std::size_t comparability_violations = 0;   // sigma_jk != 0 with |xi_j| / |xi_k| outside [1/C, C]

  std::size_t violations() const {
    return sigma0_support_violations + inner_support_violations + domination_violations + comparability_violations;
  }
};

inline DecompositionAudit audit_decomposition(const MultilinearAmplitude& sigma, const DecomposedAmplitude& dec,
                                              const std::vector<std::vector<double>>& samples) {
  const auto n = static_cast<std::size_t>(sigma.dim());
  const auto& k = dec.constants;
  DecompositionAudit a;
  const Point x{};
  const std::span<const double> xs(x.data(), n);
  for (const auto& Xi : samples) {
    ++a.samples;
    const double R2 = norm2(Xi), R = std::sqrt(R2);
    const Complex full = sigma(xs, Xi);
    const double err = std::abs(dec.reconstruct(xs, Xi) - full) / std::max(1.0, std::abs(full));
    a.max_reconstruction_error = std::max(a.max_reconstruction_error, err);
    if (dec.sigma0(xs, Xi) != Complex(0.0) && R > k.chi_outer) ++a.sigma0_support_violations;
    for (std::size_t j = 0; j < dec.sigma_j.size(); ++j) {
      if (dec.sigma_j[j](xs, Xi) == Complex(0.0)) continue;
      if (R <= k.chi_inner) ++a.inner_support_violations;
      if (k.domination * norm2(std::span<const double>(Xi).subspan(j * n, n)) < R2 * (1.0 - 1e-12)) ++a.domination_violations;
    }
    for (const auto& p : dec.sigma_jk) {
      if (p.sigma(xs, Xi) == Complex(0.0)) continue;
      if (R <= k.chi_inner) ++a.inner_support_violations;
      const double rj = euclid(std::span<const double>(Xi).subspan(static_cast<std::size_t>(p.j) * n, n));
      const double rk = euclid(std::span<const double>(Xi).subspan(static_cast<std::size_t>(p.k) * n, n));
      if (rj > k.comparability * rk * (1.0 + 1e-12) || rk > k.comparability * rj * (1.0 + 1e-12)) ++a.comparability_violations;
    }
  }
  return a;
}

}  // namespace oscilab
