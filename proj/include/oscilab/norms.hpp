#pragma once

// Norms on the torus: Lebesgue, Bessel-potential Sobolev H^{sigma,p}, local Hardy h^p via the
// Littlewood-Paley square function, bmo, and Triebel-Lizorkin F^s_{p,q}. Integrals are Riemann
// sums with weight h^n.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oscilab/cutoff.hpp"
#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"

namespace oscilab {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

enum class NormTag { lebesgue, sobolev, local_hardy, bmo, triebel_lizorkin };

struct NormKind {
  NormTag tag = NormTag::lebesgue;
  double p = 2.0;
  double sigma = 0.0;  // sobolev index
  double s = 0.0;      // smoothness for triebel_lizorkin
  double q = 2.0;

  static NormKind lebesgue(double p) { return {NormTag::lebesgue, p, 0.0, 0.0, 2.0}; }
  static NormKind sobolev(double sigma, double p) { return {NormTag::sobolev, p, sigma, 0.0, 2.0}; }
  static NormKind local_hardy(double p) { return {NormTag::local_hardy, p, 0.0, 0.0, 2.0}; }
  static NormKind bmo() { return {NormTag::bmo, infinity, 0.0, 0.0, 2.0}; }
  static NormKind triebel_lizorkin(double s, double p, double q) { return {NormTag::triebel_lizorkin, p, 0.0, s, q}; }
};

namespace detail {
inline double parse_exponent(const std::string& s, const std::string& whole) {
  if (s == "inf" || s == "infinity") return infinity;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw config_error("");
    return v;
  } catch (...) {
    throw config_error("malformed number '" + s + "' in norm kind '" + whole + "'");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = s.find(sep, start);
    out.push_back(s.substr(start, at - start));
    if (at == std::string::npos) return out;
    start = at + 1;
  }
}
}  // namespace detail

/// "L2", "Lp" (p a number or inf), "H:sigma:p", "hp:p", "bmo", "F:s:p:q".
inline NormKind parse_norm_kind(const std::string& text) {
  const auto parts = detail::split(text, ':');
  const std::string& head = parts.front();
  auto need = [&](std::size_t k) {
    if (parts.size() != k) throw config_error("norm kind '" + text + "' expects " + std::to_string(k - 1) + " parameter(s)");
  };
  NormKind k;
  if (head == "bmo") {
    need(1);
    k = NormKind::bmo();
  } else if (head == "H") {
    need(3);
    k = NormKind::sobolev(detail::parse_exponent(parts[1], text), detail::parse_exponent(parts[2], text));
  } else if (head == "hp") {
    need(2);
    k = NormKind::local_hardy(detail::parse_exponent(parts[1], text));
  } else if (head == "F") {
    need(4);
    k = NormKind::triebel_lizorkin(detail::parse_exponent(parts[1], text), detail::parse_exponent(parts[2], text),
                                   detail::parse_exponent(parts[3], text));
  } else if (head.size() > 1 && head[0] == 'L') {
    need(1);
    k = NormKind::lebesgue(detail::parse_exponent(head.substr(1), text));
  } else {
    throw config_error("unknown norm kind '" + text + "'");
  }
  if (!(k.p > 0.0)) throw config_error("norm kind '" + text + "': p must be positive");
  if (!(k.q > 0.0)) throw config_error("norm kind '" + text + "': q must be positive");
  return k;
}

inline std::string to_string(const NormKind& k) {
  auto num = [](double v) {
    if (std::isinf(v)) return std::string("inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  switch (k.tag) {
    case NormTag::lebesgue: return "L" + num(k.p);
    case NormTag::sobolev: return "H:" + num(k.sigma) + ":" + num(k.p);
    case NormTag::local_hardy: return "hp:" + num(k.p);
    case NormTag::bmo: return "bmo";
    case NormTag::triebel_lizorkin: return "F:" + num(k.s) + ":" + num(k.p) + ":" + num(k.q);
  }
  return "?";
}

/// (sum |v|^p h^n)^{1/p}, max |v| for p = inf, over nonnegative sample magnitudes.
inline double lebesgue_of_magnitudes(const std::vector<double>& mag, double cell, double p) {
  if (!(p > 0.0)) throw error("Lebesgue exponent must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : mag) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  if (p == 2.0) for (double v : mag) s += v * v;
  else for (double v : mag) s += std::pow(v, p);
  return std::pow(s * cell, 1.0 / p);
}

inline std::vector<double> magnitudes(const Field& f) {
  const Field p = to_physical(f);
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(p[i]);
  return m;
}

inline double lebesgue_norm(const Field& f, double p) {
  return lebesgue_of_magnitudes(magnitudes(f), f.grid().cell_volume(), p);
}

/// Largest |xi| on the lattice.
inline double lattice_radius(const Grid& g) { return std::sqrt(static_cast<double>(g.dim())) * g.nyquist(); }

/// Littlewood-Paley pieces lp_j(D) f for j = 0..J, J the last index not vanishing on the lattice.
inline std::vector<Field> lp_pieces(const Field& f) {
  const Grid& g = f.grid();
  const Field spec = to_spectral(f);
  const int J = lp_last_index(lattice_radius(g));
  std::vector<Field> out;
  for (int j = 0; j <= J; ++j) {
    std::vector<Complex> s(spec.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Point xi = g.frequency(i);
      s[i] = lp_component(j, std::span<const double>(xi.data(), static_cast<std::size_t>(g.dim()))) * spec[i];
    }
    out.push_back(to_physical(Field(g, Representation::spectral, std::move(s))));
  }
  return out;
}

/// Mean oscillation sup over dyadic subcubes of the period cell with side >= 2h.
/// Requires G divisible by the block size at each level.
inline double bmo_seminorm(const Field& f) {
  const Grid& g = f.grid();
  const Field p = to_physical(f);
  const int G = g.points();
  const auto n = static_cast<std::size_t>(g.dim());
  double best = 0.0;
  for (int blocks = 1; G % blocks == 0 && G / blocks >= 2; blocks *= 2) {
    const int m = G / blocks;
    std::size_t cubes = 1;
    for (std::size_t d = 0; d < n; ++d) cubes *= static_cast<std::size_t>(blocks);
    std::vector<std::size_t> owner(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::size_t c = 0;
      for (std::size_t d = 0; d < n; ++d) c = c * static_cast<std::size_t>(blocks) + static_cast<std::size_t>(g.axis_index(i, static_cast<int>(d)) / m);
      owner[i] = c;
    }
    std::vector<Complex> mean(cubes, Complex(0.0));
    std::vector<double> count(cubes, 0.0), osc(cubes, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      mean[owner[i]] += p[i];
      count[owner[i]] += 1.0;
    }
    for (std::size_t c = 0; c < cubes; ++c) mean[c] /= count[c];
    for (std::size_t i = 0; i < p.size(); ++i) osc[owner[i]] += std::abs(p[i] - mean[owner[i]]);
    for (std::size_t c = 0; c < cubes; ++c) best = std::max(best, osc[c] / count[c]);
  }
  return best;
}

inline double norm(const Field& f, const NormKind& kind) {
  if (!(kind.p > 0.0)) throw error("norm: p must be positive");
  const Grid& g = f.grid();
  const double cell = g.cell_volume();
  switch (kind.tag) {
    case NormTag::lebesgue: return lebesgue_norm(f, kind.p);
    case NormTag::sobolev: {
      if (kind.sigma * std::log(std::sqrt(1.0 + lattice_radius(g) * lattice_radius(g))) > 700.0)
        throw error("norm: Sobolev weight <xi>^" + std::to_string(kind.sigma) + " overflows on this lattice");
      const double sigma = kind.sigma;
      if (sigma == 0.0) return lebesgue_norm(f, kind.p);
      return lebesgue_norm(
          apply_multiplier([sigma](std::span<const double> xi) { return Complex(std::pow(1.0 + norm2(xi), 0.5 * sigma)); }, f),
          kind.p);
    }
    case NormTag::local_hardy: {
      const auto pieces = lp_pieces(f);
      std::vector<double> sq(f.size(), 0.0);
      for (std::size_t j = 1; j < pieces.size(); ++j)
        for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += std::norm(pieces[j][i]);
      for (auto& v : sq) v = std::sqrt(v);
      return lebesgue_norm(pieces[0], kind.p) + lebesgue_of_magnitudes(sq, cell, kind.p);
    }
    case NormTag::bmo: {
      const Field low = apply_multiplier([](std::span<const double> xi) { return Complex(bump(xi)); }, f);
      return bmo_seminorm(f) + lebesgue_norm(low, infinity);
    }
    case NormTag::triebel_lizorkin: {
      if (!(kind.q > 0.0)) throw error("norm: q must be positive");
      const auto pieces = lp_pieces(f);
      std::vector<double> acc(f.size(), 0.0);
      for (std::size_t j = 0; j < pieces.size(); ++j) {
        const double w = std::pow(2.0, kind.s * static_cast<double>(j));
        for (std::size_t i = 0; i < acc.size(); ++i) {
          const double v = w * std::abs(pieces[j][i]);
          if (std::isinf(kind.q)) acc[i] = std::max(acc[i], v);
          else acc[i] += std::pow(v, kind.q);
        }
      }
      if (!std::isinf(kind.q))
        for (auto& v : acc) v = std::pow(v, 1.0 / kind.q);
      return lebesgue_of_magnitudes(acc, cell, kind.p);
    }
  }
  return 0.0;
}

}  // namespace oscilab
