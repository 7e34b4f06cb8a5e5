#pragma once

// Periodic grids, sampled fields, and the spectral transform pair.
//
// The torus is [-L, L)^n sampled at G points per axis (x_i = -L + i h, h = 2L/G).
// The matched frequency lattice is {k pi/L : k = -G/2, ..., G/2-1}^n and spectral
// samples are stored in that centered order, row-major. The forward transform
// approximates f^(xi) = \int f(x) e^{-i x.xi} dx with weight h^n; the inverse
// carries (dxi / 2pi)^n so that inverse(forward(f)) == f.

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oscilab/error.hpp"

namespace oscilab {

using Complex = std::complex<double>;

enum class Representation { physical, spectral };

inline const char* to_string(Representation r) {
  return r == Representation::physical ? "physical" : "spectral";
}

/// Maximum spatial dimension carried by the small fixed-size coordinate vectors.
inline constexpr int max_dim = 3;

/// A point in R^n (n <= 3) with unused trailing slots left at zero.
using Point = std::array<double, max_dim>;

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

inline double euclid(std::span<const double> v) { return std::sqrt(norm2(v)); }

/// <v> = (1 + |v|^2)^{1/2}
inline double japanese(std::span<const double> v) { return std::sqrt(1.0 + norm2(v)); }

class Grid {
public:
  Grid() = default;

  int dim() const { return dim_; }
  int points() const { return points_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / points_; }
  double freq_step() const { return std::numbers::pi / half_width_; }
  /// Largest |k| * dxi on one axis (the Nyquist row sits at -G/2).
  double nyquist() const { return 0.5 * points_ * freq_step(); }

  std::size_t total() const {
    std::size_t t = 1;
    for (int d = 0; d < dim_; ++d) t *= static_cast<std::size_t>(points_);
    return t;
  }

  /// h^n, the Riemann-sum weight in physical space.
  double cell_volume() const { return std::pow(spacing(), dim_); }
  /// (dxi / 2pi)^n, the normalized frequency weight.
  double freq_weight() const { return std::pow(freq_step() / (2.0 * std::numbers::pi), dim_); }

  /// Per-axis index of flat position `flat` (row-major, last axis fastest).
  int axis_index(std::size_t flat, int d) const {
    for (int e = dim_ - 1; e > d; --e) flat /= static_cast<std::size_t>(points_);
    return static_cast<int>(flat % static_cast<std::size_t>(points_));
  }

  /// Centered wavenumber k in [-G/2, G/2) of axis index c.
  int wavenumber(int c) const { return c - points_ / 2; }

  double coordinate(int i) const { return -half_width_ + i * spacing(); }

  Point position(std::size_t flat) const {
    Point p{};
    for (int d = 0; d < dim_; ++d) p[d] = coordinate(axis_index(flat, d));
    return p;
  }

  Point frequency(std::size_t flat) const {
    Point xi{};
    for (int d = 0; d < dim_; ++d) xi[d] = wavenumber(axis_index(flat, d)) * freq_step();
    return xi;
  }

  std::vector<int> wavenumbers(std::size_t flat) const {
    std::vector<int> k(dim_);
    for (int d = 0; d < dim_; ++d) k[d] = wavenumber(axis_index(flat, d));
    return k;
  }

  /// Flat spectral position of a wavenumber tuple; wavenumbers are reduced mod G
  /// into [-G/2, G/2).
  std::size_t spectral_index(std::span<const int> k) const {
    std::size_t flat = 0;
    for (int d = 0; d < dim_; ++d) {
      int c = ((k[d] + points_ / 2) % points_ + points_) % points_;
      flat = flat * static_cast<std::size_t>(points_) + static_cast<std::size_t>(c);
    }
    return flat;
  }

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && points_ == o.points_ && half_width_ == o.half_width_;
  }

private:
  friend Grid make_grid(int n, int G, double L);
  int dim_ = 1;
  int points_ = 4;
  double half_width_ = std::numbers::pi;
};

inline Grid make_grid(int n, int G, double L) {
  if (n < 1 || n > max_dim) throw error("make_grid: dimension must be in [1, 3], got " + std::to_string(n));
  if (G < 4) throw error("make_grid: points per dimension must be >= 4, got " + std::to_string(G));
  if (G % 2 != 0) throw error("make_grid: points per dimension must be even, got " + std::to_string(G));
  if (!(L > 0.0) || !std::isfinite(L)) throw error("make_grid: half width must be positive and finite");
  Grid g;
  g.dim_ = n;
  g.points_ = G;
  g.half_width_ = L;
  return g;
}

class Field {
public:
  Field() = default;

  Field(Grid grid, Representation rep, std::vector<Complex> samples)
      : grid_(grid), rep_(rep), samples_(std::move(samples)) {
    if (samples_.size() != grid_.total()) {
      throw error("Field: expected " + std::to_string(grid_.total()) + " samples, got " +
                  std::to_string(samples_.size()));
    }
  }

  static Field zeros(const Grid& g, Representation rep = Representation::physical) {
    return Field(g, rep, std::vector<Complex>(g.total()));
  }

  template <class Fn>
  static Field from_function(const Grid& g, Fn&& fn) {
    std::vector<Complex> s(g.total());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Point p = g.position(i);
      s[i] = fn(std::span<const double>(p.data(), static_cast<std::size_t>(g.dim())));
    }
    return Field(g, Representation::physical, std::move(s));
  }

  template <class Fn>
  static Field from_spectrum(const Grid& g, Fn&& fn) {
    std::vector<Complex> s(g.total());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Point xi = g.frequency(i);
      s[i] = fn(std::span<const double>(xi.data(), static_cast<std::size_t>(g.dim())));
    }
    return Field(g, Representation::spectral, std::move(s));
  }

  const Grid& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  std::span<const Complex> samples() const { return samples_; }
  const Complex& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }

  /// Moves the sample buffer out (the Field is left empty).
  std::vector<Complex> release() && { return std::move(samples_); }

private:
  Grid grid_;
  Representation rep_ = Representation::physical;
  std::vector<Complex> samples_;
};

namespace detail {

class FftPlanCache {
public:
  static FftPlanCache& instance() {
    static FftPlanCache cache;
    return cache;
  }

  fftw_plan plan(const Grid& g, int sign) {
    std::vector<int> dims(static_cast<std::size_t>(g.dim()), g.points());
    auto key = std::make_pair(dims, sign);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const std::size_t total = g.total();
    fftw_complex* a = fftw_alloc_complex(total);
    fftw_complex* b = fftw_alloc_complex(total);
    fftw_plan p = fftw_plan_dft(g.dim(), dims.data(), a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (p == nullptr) throw error("FFTW failed to create a plan");
    plans_.emplace(key, p);
    return p;
  }

  ~FftPlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

private:
  FftPlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

inline void run_fft(const Grid& g, int sign, std::vector<Complex>& in, std::vector<Complex>& out) {
  fftw_plan p = FftPlanCache::instance().plan(g, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

// For each flat position, the flat position of the same wavenumber in FFT
// (non-centered) order and the sign (-1)^{sum k}.
struct SpectralLayout {
  std::vector<std::size_t> fft_index;
  std::vector<double> sign;
};

inline SpectralLayout spectral_layout(const Grid& g) {
  SpectralLayout lay;
  const std::size_t total = g.total();
  lay.fft_index.resize(total);
  lay.sign.resize(total);
  const int G = g.points();
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t flat = 0;
    int ksum = 0;
    for (int d = 0; d < g.dim(); ++d) {
      const int k = g.wavenumber(g.axis_index(i, d));
      ksum += k;
      flat = flat * static_cast<std::size_t>(G) + static_cast<std::size_t>((k % G + G) % G);
    }
    lay.fft_index[i] = flat;
    lay.sign[i] = (ksum % 2 == 0) ? 1.0 : -1.0;
  }
  return lay;
}

}  // namespace detail

/// Switches a Field between physical and spectral representation.
inline Field transform(const Field& f, Representation target) {
  if (f.representation() == target) return f;
  const Grid& g = f.grid();
  const std::size_t total = g.total();
  const auto lay = detail::spectral_layout(g);
  std::vector<Complex> in(total), out(total);
  if (target == Representation::spectral) {
    std::copy(f.samples().begin(), f.samples().end(), in.begin());
    detail::run_fft(g, FFTW_FORWARD, in, out);
    const double w = g.cell_volume();
    for (std::size_t i = 0; i < total; ++i) in[i] = w * lay.sign[i] * out[lay.fft_index[i]];
    return Field(g, Representation::spectral, std::move(in));
  }
  for (std::size_t i = 0; i < total; ++i) in[lay.fft_index[i]] = lay.sign[i] * f[i];
  detail::run_fft(g, FFTW_BACKWARD, in, out);
  const double w = g.freq_weight();
  for (auto& v : out) v *= w;
  return Field(g, Representation::physical, std::move(out));
}

inline Field to_spectral(const Field& f) { return transform(f, Representation::spectral); }
inline Field to_physical(const Field& f) { return transform(f, Representation::physical); }

/// Complex-valued function of a frequency vector.
using FrequencyFunction = std::function<Complex(std::span<const double>)>;

inline std::string format_point(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

/// Samples a frequency function on the lattice (centered order); rejects non-finite values.
inline std::vector<Complex> multiplier_table(const Grid& g, const FrequencyFunction& m) {
  std::vector<Complex> table(g.total());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Point xi = g.frequency(i);
    std::span<const double> v(xi.data(), static_cast<std::size_t>(g.dim()));
    const Complex val = m(v);
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
      throw error("apply_multiplier: non-finite multiplier value at xi = " + format_point(v));
    }
    table[i] = val;
  }
  return table;
}

/// Multiplies spectral samples by a precomputed table; result in the caller's representation.
inline Field apply_table(std::span<const Complex> table, const Field& f) {
  if (table.size() != f.size()) throw error("apply_table: table size does not match the grid");
  Field spec = to_spectral(f);
  std::vector<Complex> s = std::move(spec).release();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= table[i];
  Field out(f.grid(), Representation::spectral, std::move(s));
  return f.representation() == Representation::spectral ? out : to_physical(out);
}

/// m(D) f: spectral samples multiplied pointwise by m(xi).
inline Field apply_multiplier(const FrequencyFunction& m, const Field& f) {
  const auto table = multiplier_table(f.grid(), m);
  return apply_table(table, f);
}

// Small pointwise helpers used across modules.

inline Field pointwise(const Field& a, const Field& b, const std::function<Complex(Complex, Complex)>& op) {
  if (!(a.grid() == b.grid())) throw error("pointwise: fields live on different grids");
  const Field pa = to_physical(a);
  const Field pb = to_physical(b);
  std::vector<Complex> s(pa.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = op(pa[i], pb[i]);
  return Field(a.grid(), Representation::physical, std::move(s));
}

inline Field scaled(const Field& f, Complex c) {
  std::vector<Complex> s(f.samples().begin(), f.samples().end());
  for (auto& v : s) v *= c;
  return Field(f.grid(), f.representation(), std::move(s));
}

inline Field add(const Field& a, const Field& b) {
  if (a.representation() == b.representation()) {
    if (!(a.grid() == b.grid())) throw error("add: fields live on different grids");
    std::vector<Complex> s(a.samples().begin(), a.samples().end());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += b[i];
    return Field(a.grid(), a.representation(), std::move(s));
  }
  return pointwise(a, b, [](Complex x, Complex y) { return x + y; });
}

inline Field conjugate(const Field& f) {
  const Field p = to_physical(f);
  std::vector<Complex> s(p.samples().begin(), p.samples().end());
  for (auto& v : s) v = std::conj(v);
  return Field(f.grid(), Representation::physical, std::move(s));
}

/// max_i |a_i - b_i| in physical representation.
inline double max_abs_difference(const Field& a, const Field& b) {
  const Field pa = to_physical(a);
  const Field pb = to_physical(b);
  double m = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, std::abs(pa[i] - pb[i]));
  return m;
}

/// Discrete L^2 norm (sum |f|^2 h^n)^{1/2} of the physical samples.
inline double l2_norm(const Field& f) {
  const Field p = to_physical(f);
  double s = 0.0;
  for (const auto& v : p.samples()) s += std::norm(v);
  return std::sqrt(s * f.grid().cell_volume());
}

/// ||a - b||_2 / ||b||_2 (absolute when b vanishes).
inline double relative_l2_error(const Field& a, const Field& b) {
  const Field pa = to_physical(a);
  const Field pb = to_physical(b);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    num += std::norm(pa[i] - pb[i]);
    den += std::norm(pb[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace oscilab
