#pragma once

// Binary field dumps, little-endian host layout:
//   "OSCF" | u32 version | u32 n | u32 G (one per dimension) | f64 L | (f64 re, f64 im) * G^n
// Samples are physical values in row-major order.

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"

namespace oscilab {

inline constexpr std::uint32_t field_format_version = 1;

inline void write_field(const Field& f, const std::string& path) {
  const Field u = to_physical(f);
  const Grid& g = u.grid();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw error("write_field: cannot write '" + path + "'");
  auto put = [&](const auto& v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); };
  os.write("OSCF", 4);
  put(field_format_version);
  put(static_cast<std::uint32_t>(g.dim()));
  for (int d = 0; d < g.dim(); ++d) put(static_cast<std::uint32_t>(g.points()));
  put(g.half_width());
  for (const Complex& z : u.samples()) {
    put(z.real());
    put(z.imag());
  }
  if (!os) throw error("write_field: write to '" + path + "' failed");
}

inline Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw error("read_field: cannot read '" + path + "'");
  auto get = [&](auto& v) {
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw error("read_field: '" + path + "' is truncated");
  };
  std::array<char, 4> magic{};
  get(magic);
  if (std::memcmp(magic.data(), "OSCF", 4) != 0) throw error("read_field: '" + path + "' is not a field dump");
  std::uint32_t version = 0, n = 0;
  get(version);
  if (version != field_format_version) throw error("read_field: unsupported version " + std::to_string(version));
  get(n);
  if (n < 1 || n > static_cast<std::uint32_t>(max_dim)) throw error("read_field: bad dimension " + std::to_string(n));
  std::vector<std::uint32_t> G(n);
  for (auto& v : G) get(v);
  for (auto v : G)
    if (v != G.front()) throw error("read_field: unequal points per dimension are not supported");
  double L = 0.0;
  get(L);
  const Grid g = make_grid(static_cast<int>(n), static_cast<int>(G.front()), L);
  std::vector<Complex> s(g.total());
  for (auto& z : s) {
    double re = 0.0, im = 0.0;
    get(re);
    get(im);
    z = Complex(re, im);
  }
  return Field(g, Representation::physical, std::move(s));
}

}  // namespace oscilab
