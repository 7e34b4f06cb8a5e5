#pragma once

// The base bump and the dyadic cutoff families built from it.
//
//   bump(r)   = H(2-r) / (H(2-r) + H(r-1)),  H(t) = exp(-1/t) for t > 0, else 0
//   lp_j      = bump(2^-j .) - bump(2^{1-j} .)       (j >= 1), lp_0 = bump
//   theta_k   = bump(2^{3-k} .)
//   psi_k^2   = bump(2^{-1-k} .)^2 - bump(2^{2-k} .)^2
//   phi_k^2   = bump(2^{-3-k} .)^2 - bump(2^{4-k} .)^2
//   omega_k   = theta_k(. / 2)
//   zeta_k^2  = bump(2^{-k-k1-2} .)^2 - bump(2^{3+k1-k} .)^2
//   chi0      = 1 - bump(2^{5-k0} .)

#include <cmath>
#include <span>
#include <string>

#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"

namespace oscilab {

namespace detail {
inline double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace detail

/// Radial profile of the base bump: 1 on [0, 1], 0 on [2, inf), smooth and non-increasing.
inline double bump(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = detail::glue(2.0 - r);
  const double b = detail::glue(r - 1.0);
  return a / (a + b);
}

inline double bump(std::span<const double> xi) { return bump(euclid(xi)); }

/// Smooth step: 1 for t <= lo, 0 for t >= hi, the bump's gluing recipe on [lo, hi].
inline double smooth_step(double t, double lo, double hi) {
  if (t <= lo) return 1.0;
  if (t >= hi) return 0.0;
  const double u = (t - lo) / (hi - lo);
  const double a = detail::glue(1.0 - u);
  const double b = detail::glue(u);
  return a / (a + b);
}

/// Radial Littlewood-Paley piece lp_j at |xi| = r.
inline double lp_component(int j, double r) {
  if (j < 0) throw error("lp_component: j must be nonnegative");
  if (j == 0) return bump(r);
  return bump(std::ldexp(r, -j)) - bump(std::ldexp(r, 1 - j));
}

inline double lp_component(int j, std::span<const double> xi) { return lp_component(j, euclid(xi)); }

/// Smallest J with lp_j(r) = 0 for all j > J.
inline int lp_last_index(double r) {
  if (r <= 2.0) return 1;
  return static_cast<int>(std::ceil(std::log2(r))) + 1;
}

enum class CutoffKind { theta, psi, phi_k, omega, zeta, chi0 };

inline CutoffKind cutoff_kind_from_name(const std::string& name) {
  if (name == "theta") return CutoffKind::theta;
  if (name == "psi") return CutoffKind::psi;
  if (name == "phi_k" || name == "phi") return CutoffKind::phi_k;
  if (name == "omega") return CutoffKind::omega;
  if (name == "zeta") return CutoffKind::zeta;
  if (name == "chi0") return CutoffKind::chi0;
  throw error("unknown cutoff kind '" + name + "'");
}

namespace detail {
inline double sqrt_difference(double a, double b) {
  const double d = a * a - b * b;
  if (d < -1e-14) throw error("cutoff: negative squared difference");
  return d > 0.0 ? std::sqrt(d) : 0.0;
}
}  // namespace detail

/// Radial value of a family member at |xi| = r. For chi0 the index is k0; k1 only enters zeta.
inline double cutoff(CutoffKind kind, int k, double r, int k1 = 2) {
  switch (kind) {
    case CutoffKind::theta: return bump(std::ldexp(r, 3 - k));
    case CutoffKind::psi: return detail::sqrt_difference(bump(std::ldexp(r, -1 - k)), bump(std::ldexp(r, 2 - k)));
    case CutoffKind::phi_k: return detail::sqrt_difference(bump(std::ldexp(r, -3 - k)), bump(std::ldexp(r, 4 - k)));
    case CutoffKind::omega: return bump(std::ldexp(r, 2 - k));
    case CutoffKind::zeta:
      return detail::sqrt_difference(bump(std::ldexp(r, -k - k1 - 2)), bump(std::ldexp(r, 3 + k1 - k)));
    case CutoffKind::chi0: return 1.0 - bump(std::ldexp(r, 5 - k));
  }
  return 0.0;
}

inline double cutoff(CutoffKind kind, int k, std::span<const double> xi, int k1 = 2) {
  return cutoff(kind, k, euclid(xi), k1);
}

}  // namespace oscilab
