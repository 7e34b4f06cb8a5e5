#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace oscilab {

// Counter-based generator: the k-th draw of a named stream is
// splitmix64(seed ^ fnv1a(stream) + (k + 1) * golden). Draws depend only on
// (seed, stream, k), never on call order or thread schedule.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::string_view stream) : key_(seed ^ fnv1a(stream)) {}

  static constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  static constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return splitmix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform in [0, 1).
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(counter);
  }

  /// Standard normal via Box-Muller on counters (2c, 2c+1).
  double normal(std::uint64_t counter) const {
    double u1 = uniform(2 * counter);
    double u2 = uniform(2 * counter + 1);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// A derived stream, e.g. one per draw index.
  CounterRng substream(std::uint64_t index) const {
    CounterRng r = *this;
    r.key_ = splitmix64(key_ ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    return r;
  }

private:
  std::uint64_t key_;
};

}  // namespace oscilab
