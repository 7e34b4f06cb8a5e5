#pragma once

#include <cstdint>

#include "oscilab/oscilab.hpp"

namespace testutil {

using namespace oscilab;

// Gaussian spectrum on |xi| <= band, zero elsewhere; returned in physical form.
inline Field random_band(const Grid& g, double band, std::uint64_t stream, std::uint64_t seed = 1) {
  const CounterRng rng(seed, "tests");
  const CounterRng s = rng.substream(stream);
  std::uint64_t c = 0;
  return to_physical(Field::from_spectrum(g, [&](std::span<const double> xi) {
    const std::uint64_t k = c;
    c += 2;
    return euclid(xi) <= band ? Complex(s.normal(k), s.normal(k + 1)) : Complex(0.0);
  }));
}

inline Field constant_field(const Grid& g, Complex c) {
  return Field::from_function(g, [&](std::span<const double>) { return c; });
}

inline std::span<const double> view(const Point& p, int n) { return {p.data(), static_cast<std::size_t>(n)}; }

}  // namespace testutil
