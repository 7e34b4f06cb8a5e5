#pragma once

// Multilinear amplitudes sigma(x, Xi), Xi = (xi_1, ..., xi_N), each xi_j in R^n.
// Frequencies are passed flattened: Xi[j*n + d] is coordinate d of xi_j.

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscilab/error.hpp"
#include "oscilab/expression.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/phase.hpp"

namespace oscilab {

/// One product term c * prod_j a_j(xi_j) of a separable amplitude.
struct SeparableTerm {
  Complex coefficient{1.0, 0.0};
  std::vector<FrequencyFunction> factors;
};

class MultilinearAmplitude {
public:
  using Eval = std::function<Complex(std::span<const double> x, std::span<const double> Xi)>;

  MultilinearAmplitude() = default;

  MultilinearAmplitude(int arity, int dim, double order, Eval eval, bool x_independent, std::string name = "amplitude")
      : arity_(arity), dim_(dim), order_(order), eval_(std::move(eval)), x_independent_(x_independent),
        name_(std::move(name)) {
    if (arity < 1) throw error("amplitude arity must be positive");
    if (dim < 1 || dim > max_dim) throw error("amplitude dimension must be in [1, 3]");
  }

  /// Sum of separable terms; eval is assembled from the terms.
  static MultilinearAmplitude separable(int dim, double order, std::vector<SeparableTerm> terms,
                                        std::string name = "separable") {
    if (terms.empty()) throw error("separable amplitude needs at least one term");
    const std::size_t N = terms.front().factors.size();
    for (const auto& t : terms)
      if (t.factors.size() != N) throw error("separable amplitude: terms disagree on arity");
    auto shared = std::make_shared<const std::vector<SeparableTerm>>(std::move(terms));
    const auto n = static_cast<std::size_t>(dim);
    Eval ev = [shared, n, N](std::span<const double>, std::span<const double> Xi) {
      Complex sum = 0.0;
      for (const auto& t : *shared) {
        Complex prod = t.coefficient;
        for (std::size_t j = 0; j < N; ++j) prod *= t.factors[j](Xi.subspan(j * n, n));
        sum += prod;
      }
      return sum;
    };
    MultilinearAmplitude a(static_cast<int>(N), dim, order, std::move(ev), true, std::move(name));
    a.terms_ = std::move(shared);
    return a;
  }

  int arity() const { return arity_; }
  int dim() const { return dim_; }
  double order() const { return order_; }
  bool x_independent() const { return x_independent_; }
  const std::string& name() const { return name_; }

  bool has_separable_terms() const { return terms_ != nullptr; }
  std::span<const SeparableTerm> terms() const {
    if (!terms_) return {};
    return {terms_->data(), terms_->size()};
  }
  /// Per-slot factors when the amplitude is a single product with unit coefficient.
  const std::vector<FrequencyFunction>* separable_factors() const {
    if (!terms_ || terms_->size() != 1 || terms_->front().coefficient != Complex(1.0, 0.0)) return nullptr;
    return &terms_->front().factors;
  }

  Complex operator()(std::span<const double> x, std::span<const double> Xi) const { return eval_(x, Xi); }
  Complex eval(std::span<const double> x, std::span<const double> Xi) const { return eval_(x, Xi); }

  /// w(Xi) * sigma(x, Xi); separability is dropped.
  MultilinearAmplitude weighted(std::function<double(std::span<const double>)> w, std::string name) const {
    Eval base = eval_;
    Eval ev = [base, w = std::move(w)](std::span<const double> x, std::span<const double> Xi) {
      const double v = w(Xi);
      return v == 0.0 ? Complex(0.0) : v * base(x, Xi);
    };
    return MultilinearAmplitude(arity_, dim_, order_, std::move(ev), x_independent_, std::move(name));
  }

  MultilinearAmplitude with_order(double m) const {
    MultilinearAmplitude a = *this;
    a.order_ = m;
    return a;
  }

private:
  int arity_ = 1;
  int dim_ = 1;
  double order_ = 0.0;
  Eval eval_;
  bool x_independent_ = true;
  std::string name_;
  std::shared_ptr<const std::vector<SeparableTerm>> terms_;
};

/// |Xi|^2 = sum_j |xi_j|^2.
inline double xi_norm2(std::span<const double> Xi) { return norm2(Xi); }

inline MultilinearAmplitude constant_amplitude(Complex c, int N, int n) {
  SeparableTerm t;
  t.coefficient = c;
  for (int j = 0; j < N; ++j) t.factors.push_back([](std::span<const double>) { return Complex(1.0); });
  return MultilinearAmplitude::separable(n, 0.0, {t}, "constant");
}

/// <Xi>^m.
inline MultilinearAmplitude japanese_bracket_amplitude(double m, int N, int n) {
  auto ev = [m](std::span<const double>, std::span<const double> Xi) {
    return Complex(std::pow(1.0 + norm2(Xi), 0.5 * m));
  };
  char buf[64];
  std::snprintf(buf, sizeof buf, "<Xi>^%g", m);
  return MultilinearAmplitude(N, n, m, ev, true, buf);
}

/// prod_j a_j(xi_j).
inline MultilinearAmplitude product_amplitude(std::vector<FrequencyFunction> factors, int n, double order,
                                              std::string name = "product") {
  SeparableTerm t;
  t.factors = std::move(factors);
  return MultilinearAmplitude::separable(n, order, {t}, std::move(name));
}

/// Expression amplitude. Variables: x (n = 1) or x1..xn; xi1..xiN (n = 1) or xi<j>_<d>;
/// r<j> = |xi_j|; R = |Xi|; S = |xi_1 + ... + xi_N|.
inline MultilinearAmplitude custom_amplitude(const std::string& text, double order, int N, int n) {
  if (N < 1) throw error("custom amplitude: arity must be positive");
  if (n < 1 || n > max_dim) throw error("custom amplitude: dimension must be in [1, 3]");
  std::vector<std::string> xvars, freq;
  if (n == 1) xvars.push_back("x");
  else for (int d = 0; d < n; ++d) xvars.push_back("x" + std::to_string(d + 1));
  for (int j = 0; j < N; ++j) {
    if (n == 1) freq.push_back("xi" + std::to_string(j + 1));
    else for (int d = 0; d < n; ++d) freq.push_back("xi" + std::to_string(j + 1) + "_" + std::to_string(d + 1));
  }
  for (int j = 0; j < N; ++j) freq.push_back("r" + std::to_string(j + 1));
  freq.push_back("R");
  freq.push_back("S");

  bool x_free = true;
  try {
    Expression::compile(text, freq);
  } catch (const error&) {
    x_free = false;
  }
  std::vector<std::string> vars = freq;
  vars.insert(vars.end(), xvars.begin(), xvars.end());
  auto expr = std::make_shared<const Expression>(Expression::compile(text, vars));
  const auto un = static_cast<std::size_t>(n), uN = static_cast<std::size_t>(N);
  auto ev = [expr, un, uN](std::span<const double> x, std::span<const double> Xi) {
    std::vector<double> v(Xi.begin(), Xi.end());
    Point sum{};
    for (std::size_t j = 0; j < uN; ++j) {
      auto xj = Xi.subspan(j * un, un);
      v.push_back(euclid(xj));
      for (std::size_t d = 0; d < un; ++d) sum[d] += xj[d];
    }
    v.push_back(euclid(Xi));
    v.push_back(euclid({sum.data(), un}));
    for (std::size_t d = 0; d < un; ++d) v.push_back(d < x.size() ? x[d] : 0.0);
    return Complex((*expr)(v));
  };
  return MultilinearAmplitude(N, n, order, ev, x_free, text);
}

/// One sample point (x, Xi) for seminorm estimation.
struct AmplitudeSample {
  Point x{};
  std::vector<double> Xi;
};

/// sup over samples of |d_Xi^alpha d_x^beta sigma| <Xi>^{|alpha| - m}, by nested central
/// differences (step 1e-4 <Xi> in Xi, 1e-4 in x).
inline double seminorm_estimate(const MultilinearAmplitude& sigma, double m, const std::vector<int>& alpha,
                                const std::vector<int>& beta, const std::vector<AmplitudeSample>& samples) {
  if (samples.empty()) throw error("seminorm_estimate: empty sample set");
  const auto n = static_cast<std::size_t>(sigma.dim());
  const std::size_t nXi = n * static_cast<std::size_t>(sigma.arity());
  if (alpha.size() != nXi) throw error("seminorm_estimate: alpha must have N*n entries");
  if (beta.size() != n) throw error("seminorm_estimate: beta must have n entries");
  int a_total = 0, b_total = 0;
  for (int a : alpha) a_total += a;
  for (int b : beta) b_total += b;
  if (a_total + b_total > 2) throw error("seminorm_estimate: |alpha| + |beta| must be <= 2");

  // combined variable vector: Xi then x
  std::vector<int> order(alpha);
  order.insert(order.end(), beta.begin(), beta.end());
  std::function<Complex(std::vector<double>&, std::vector<int>&, const std::vector<double>&)> diff =
      [&](std::vector<double>& v, std::vector<int>& ord, const std::vector<double>& step) -> Complex {
    for (std::size_t i = 0; i < ord.size(); ++i) {
      if (ord[i] > 0) {
        --ord[i];
        const double keep = v[i];
        v[i] = keep + step[i];
        const Complex a = diff(v, ord, step);
        v[i] = keep - step[i];
        const Complex b = diff(v, ord, step);
        v[i] = keep;
        ++ord[i];
        return (a - b) / (2.0 * step[i]);
      }
    }
    return sigma.eval({v.data() + nXi, n}, {v.data(), nXi});
  };

  double sup = 0.0;
  for (const auto& s : samples) {
    if (s.Xi.size() != nXi) throw error("seminorm_estimate: sample Xi has wrong length");
    const double bracket = std::sqrt(1.0 + norm2(s.Xi));
    std::vector<double> v(s.Xi);
    for (std::size_t d = 0; d < n; ++d) v.push_back(s.x[d]);
    std::vector<double> step(v.size(), 1e-4);
    for (std::size_t i = 0; i < nXi; ++i) step[i] = 1e-4 * bracket;
    std::vector<int> ord = order;
    const Complex d = diff(v, ord, step);
    sup = std::max(sup, std::abs(d) * std::pow(bracket, a_total - m));
  }
  return sup;
}

}  // namespace oscilab
