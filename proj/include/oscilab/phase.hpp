#pragma once

// Phase functions: real frequency functions of order s with gradients, and an
// empirical check of |d^a phi(xi)| <= c_a |xi|^{s-|a|}.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oscilab/error.hpp"
#include "oscilab/expression.hpp"
#include "oscilab/grid.hpp"

namespace oscilab {

enum class PhaseKind { homogeneous_power, klein_gordon, zero, custom };

inline const char* to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::homogeneous_power: return "homogeneous_power";
    case PhaseKind::klein_gordon: return "klein_gordon";
    case PhaseKind::zero: return "zero";
    case PhaseKind::custom: return "custom";
  }
  return "?";
}

class Phase {
public:
  Phase() = default;

  PhaseKind kind() const { return kind_; }
  double order() const { return order_; }
  /// Overall real factor c in c * phi_base; -1 gives the reflected phases of the bilinear counterexample.
  double coefficient() const { return coefficient_; }
  bool smooth_at_origin() const { return smooth_; }
  const std::string& name() const { return name_; }
  bool is_zero() const { return kind_ == PhaseKind::zero || coefficient_ == 0.0; }
  /// True for c |xi|^s (the degree-s homogeneous family).
  bool homogeneous() const { return kind_ == PhaseKind::homogeneous_power || kind_ == PhaseKind::zero; }

  double operator()(std::span<const double> xi) const { return eval(xi); }

  double eval(std::span<const double> xi) const {
    switch (kind_) {
      case PhaseKind::zero: return 0.0;
      case PhaseKind::homogeneous_power: {
        const double r2 = norm2(xi);
        if (r2 == 0.0) return 0.0;
        if (order_ == 2.0) return coefficient_ * r2;
        return coefficient_ * std::pow(std::sqrt(r2), order_);
      }
      case PhaseKind::klein_gordon: return coefficient_ * japanese(xi);
      case PhaseKind::custom: return coefficient_ * custom_eval(xi);
    }
    return 0.0;
  }

  Point grad(std::span<const double> xi) const {
    Point g{};
    const std::size_t n = xi.size();
    const double r = euclid(xi);
    if (r == 0.0 && !smooth_) throw error("grad_phase: phase '" + name_ + "' is not smooth at xi = 0");
    switch (kind_) {
      case PhaseKind::zero: break;
      case PhaseKind::homogeneous_power: {
        if (r == 0.0) break;  // smooth even-integer power: gradient vanishes
        const double f = coefficient_ * order_ * std::pow(r, order_ - 2.0);
        for (std::size_t d = 0; d < n; ++d) g[d] = f * xi[d];
        break;
      }
      case PhaseKind::klein_gordon: {
        const double j = japanese(xi);
        for (std::size_t d = 0; d < n; ++d) g[d] = coefficient_ * xi[d] / j;
        break;
      }
      case PhaseKind::custom: {
        const double step = 1e-5 * std::max(1.0, r);
        Point p{};
        std::copy(xi.begin(), xi.end(), p.begin());
        for (std::size_t d = 0; d < n; ++d) {
          Point a = p, b = p;
          a[d] += step;
          b[d] -= step;
          g[d] = (eval({a.data(), n}) - eval({b.data(), n})) / (2.0 * step);
        }
        break;
      }
    }
    return g;
  }

  /// c * phi for a real factor c (order and smoothness unchanged).
  Phase scaled(double c) const {
    Phase p = *this;
    p.coefficient_ *= c;
    if (c == -1.0) p.name_ = "-" + name_;
    else if (c != 1.0) p.name_ = std::to_string(c) + "*" + name_;
    return p;
  }

  friend Phase homogeneous_phase(double s);
  friend Phase klein_gordon_phase();
  friend Phase zero_phase();
  friend Phase custom_phase(const std::string&, double, int, bool);

private:
  double custom_eval(std::span<const double> xi) const {
    // slots: xi1..xin, r
    if (xi.size() != static_cast<std::size_t>(dim_)) {
      throw error("phase '" + name_ + "' declared for n = " + std::to_string(dim_) + " evaluated in n = " +
                  std::to_string(xi.size()));
    }
    std::array<double, max_dim + 1> v{};
    std::copy(xi.begin(), xi.end(), v.begin());
    v[static_cast<std::size_t>(dim_)] = euclid(xi);
    return (*expr_)({v.data(), static_cast<std::size_t>(dim_) + 1});
  }

  PhaseKind kind_ = PhaseKind::zero;
  double order_ = 1.0;
  double coefficient_ = 1.0;
  bool smooth_ = true;
  int dim_ = 1;
  std::string name_ = "zero";
  std::shared_ptr<const Expression> expr_;
};

/// phi(xi) = |xi|^s, phi(0) = 0.
inline Phase homogeneous_phase(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw error("homogeneous phase order must be positive, got " + std::to_string(s));
  Phase p;
  p.kind_ = PhaseKind::homogeneous_power;
  p.order_ = s;
  const double half = s / 2.0;
  p.smooth_ = half == std::floor(half);
  char buf[64];
  std::snprintf(buf, sizeof buf, "|xi|^%g", s);
  p.name_ = buf;
  return p;
}

/// phi(xi) = <xi>.
inline Phase klein_gordon_phase() {
  Phase p;
  p.kind_ = PhaseKind::klein_gordon;
  p.order_ = 1.0;
  p.smooth_ = true;
  p.name_ = "klein_gordon";
  return p;
}

inline Phase zero_phase() {
  Phase p;
  p.kind_ = PhaseKind::zero;
  p.order_ = 1.0;
  p.smooth_ = true;
  p.name_ = "zero";
  return p;
}

/// User expression in xi (n = 1) or xi1..xin, plus r = |xi|.
inline Phase custom_phase(const std::string& text, double s, int n, bool smooth_at_origin = false) {
  if (n < 1 || n > max_dim) throw error("custom phase: dimension must be in [1, 3]");
  if (!(s > 0.0)) throw error("custom phase: order must be positive");
  std::vector<std::string> vars;
  if (n == 1) vars.push_back("xi");
  else for (int d = 0; d < n; ++d) vars.push_back("xi" + std::to_string(d + 1));
  vars.push_back("r");
  Phase p;
  p.kind_ = PhaseKind::custom;
  p.order_ = s;
  p.smooth_ = smooth_at_origin;
  p.dim_ = n;
  p.name_ = text;
  p.expr_ = std::make_shared<const Expression>(Expression::compile(text, vars));
  return p;
}

/// Catalogue names: water_wave (1/2), wave (1), capillary (3/2), schrodinger (2), airy (3),
/// klein_gordon, zero, homogeneous (order s given separately).
inline Phase phase_from_name(const std::string& kind, double s = 0.0) {
  if (kind == "water_wave") return homogeneous_phase(0.5);
  if (kind == "wave") return homogeneous_phase(1.0);
  if (kind == "capillary") return homogeneous_phase(1.5);
  if (kind == "schrodinger") return homogeneous_phase(2.0);
  if (kind == "airy") return homogeneous_phase(3.0);
  if (kind == "klein_gordon") return klein_gordon_phase();
  if (kind == "zero") return zero_phase();
  if (kind == "homogeneous" || kind == "homogeneous_power") return homogeneous_phase(s);
  throw config_error("unknown phase kind '" + kind + "'");
}

inline std::vector<std::string> builtin_phase_names() {
  return {"water_wave", "wave", "capillary", "schrodinger", "airy", "klein_gordon", "zero"};
}

inline double eval_phase(const Phase& phi, std::span<const double> xi) { return phi.eval(xi); }
inline Point grad_phase(const Phase& phi, std::span<const double> xi) { return phi.grad(xi); }

struct OrderBound {
  std::vector<int> alpha;  // multi-index
  double constant = 0.0;   // sup |d^alpha phi| |xi|^{|alpha| - s}
};

struct OrderBoundReport {
  double order = 0.0;
  int max_order = 0;
  std::size_t samples = 0;
  std::vector<OrderBound> bounds;

  double constant(std::span<const int> alpha) const {
    for (const auto& b : bounds)
      if (std::equal(b.alpha.begin(), b.alpha.end(), alpha.begin(), alpha.end())) return b.constant;
    throw error("OrderBoundReport: multi-index not present");
  }
};

namespace detail {

// All multi-indices of length n with total order <= K, in graded order.
inline std::vector<std::vector<int>> multi_indices(int n, int K) {
  std::vector<std::vector<int>> out;
  for (int order = 0; order <= K; ++order) {
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int d, int left) {
      if (d == n - 1) {
        a[static_cast<std::size_t>(d)] = left;
        out.push_back(a);
        return;
      }
      for (int v = left; v >= 0; --v) {
        a[static_cast<std::size_t>(d)] = v;
        rec(d + 1, left - v);
      }
    };
    rec(0, order);
  }
  return out;
}

// d^alpha f at p by nested central differences with per-axis step `step`.
template <class Fn>
double nested_difference(const Fn& f, Point p, std::size_t n, std::vector<int> alpha, double step) {
  for (std::size_t d = 0; d < n; ++d) {
    if (alpha[d] > 0) {
      --alpha[d];
      Point a = p, b = p;
      a[d] += step;
      b[d] -= step;
      return (nested_difference(f, a, n, alpha, step) - nested_difference(f, b, n, alpha, step)) / (2.0 * step);
    }
  }
  return f(std::span<const double>(p.data(), n));
}

}  // namespace detail

/// Sampled supremum of |d^alpha phi(xi)| |xi|^{|alpha|-s} for every |alpha| <= K.
/// First derivatives use the analytic gradient; higher ones nested central differences
/// with step 1e-3 |xi|.
inline OrderBoundReport verify_order_bounds(const Phase& phi, double s, int K,
                                            const std::vector<Point>& samples, int n) {
  if (samples.size() < 8) throw error("verify_order_bounds: need at least 8 sample points, got " + std::to_string(samples.size()));
  if (K < 0 || K > 3) throw error("verify_order_bounds: max order must be in [0, 3]");
  if (n < 1 || n > max_dim) throw error("verify_order_bounds: dimension must be in [1, 3]");
  const auto un = static_cast<std::size_t>(n);
  OrderBoundReport rep;
  rep.order = s;
  rep.max_order = K;
  rep.samples = samples.size();
  for (const auto& alpha : detail::multi_indices(n, K)) {
    int total = 0;
    for (int a : alpha) total += a;
    double sup = 0.0;
    for (const auto& xi : samples) {
      const double r = euclid({xi.data(), un});
      if (r == 0.0) throw error("verify_order_bounds: sample set must exclude xi = 0");
      double value;
      if (total == 0) {
        value = phi.eval({xi.data(), un});
      } else if (total == 1) {
        const Point g = phi.grad({xi.data(), un});
        std::size_t d = 0;
        while (alpha[d] == 0) ++d;
        value = g[d];
      } else {
        value = detail::nested_difference([&](std::span<const double> v) { return phi.eval(v); }, xi, un, alpha,
                                          1e-3 * r);
      }
      sup = std::max(sup, std::abs(value) * std::pow(r, total - s));
    }
    rep.bounds.push_back({alpha, sup});
  }
  return rep;
}

}  // namespace oscilab
