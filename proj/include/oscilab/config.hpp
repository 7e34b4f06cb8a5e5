#pragma once

// Strict JSON configuration: unknown or duplicated keys are errors that name the key path.

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscilab/amplitude.hpp"
#include "oscilab/carleson_experiments.hpp"
#include "oscilab/dispersive.hpp"
#include "oscilab/error.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/norms.hpp"
#include "oscilab/phase.hpp"
#include "oscilab/random.hpp"
#include "oscilab/sharpness.hpp"

namespace oscilab {

using json = nlohmann::ordered_json;

inline json parse_config_text(const std::string& text) {
  std::vector<std::set<std::string>> seen;
  std::string duplicate;
  auto cb = [&](int, json::parse_event_t ev, json& parsed) {
    switch (ev) {
      case json::parse_event_t::object_start: seen.emplace_back(); break;
      case json::parse_event_t::object_end: seen.pop_back(); break;
      case json::parse_event_t::key:
        if (!seen.back().insert(parsed.get<std::string>()).second && duplicate.empty()) duplicate = parsed.get<std::string>();
        break;
      default: break;
    }
    return true;
  };
  json j;
  try {
    j = json::parse(text, cb, true, false);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!duplicate.empty()) throw config_error("duplicate key '" + duplicate + "'");
  if (!j.is_object()) throw config_error("config must be a JSON object");
  return j;
}

inline json load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw config_error("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

/// A JSON object with a declared key set.
class Section {
public:
  Section(const json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw config_error("'" + where() + "' must be an object");
    for (const auto& [key, _] : j.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw config_error("unknown key '" + name(key) + "'");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key) const {
    if (!has(key)) throw config_error("missing key '" + name(key) + "'");
    return j_.at(key);
  }
  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key) const {
    const json& v = raw(key);
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "infinity") return infinity;
      if (s == "pi") return std::numbers::pi;
    }
    if (!v.is_number()) throw config_error("'" + name(key) + "' must be a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw config_error("'" + name(key) + "' must be an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw config_error("'" + name(key) + "' must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_string()) throw config_error("'" + name(key) + "' must be a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) const { return has(key) ? string(key) : fallback; }

  std::vector<double> numbers(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw config_error("'" + name(key) + "' must be an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      json wrap = json::object();
      wrap["v"] = v[i];
      out.push_back(Section(wrap, name(key) + "[" + std::to_string(i) + "]", {"v"}).number("v"));
    }
    return out;
  }

  std::vector<int> integers(const std::string& key) const {
    std::vector<int> out;
    const json& v = raw(key);
    if (!v.is_array()) throw config_error("'" + name(key) + "' must be an array");
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw config_error("'" + name(key) + "' must hold integers");
      out.push_back(e.get<int>());
    }
    return out;
  }

  const json& array(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw config_error("'" + name(key) + "' must be an array");
    return v;
  }

  const std::string& path() const { return path_; }

private:
  std::string where() const { return path_.empty() ? "config" : path_; }
  const json& j_;
  std::string path_;
};

/// {"dim", "points", "half_width"}; half_width may be the string "pi".
inline Grid grid_from_config(const json& j, const std::string& path) {
  const Section s(j, path, {"dim", "points", "half_width"});
  try {
    return make_grid(static_cast<int>(s.integer("dim", 1)), static_cast<int>(s.integer("points")),
                     s.number("half_width", std::numbers::pi));
  } catch (const config_error&) {
    throw;
  } catch (const error& e) {
    throw config_error("'" + path + "': " + e.what());
  }
}

/// A catalogue name, or {"kind", "order", "expression", "smooth_at_origin"}.
inline Phase phase_from_config(const json& j, const std::string& path, int n) {
  if (j.is_string()) {
    try {
      return phase_from_name(j.get<std::string>());
    } catch (const config_error& e) {
      throw config_error("'" + path + "': " + e.what());
    }
  }
  const Section s(j, path, {"kind", "order", "expression", "smooth_at_origin"});
  const std::string kind = s.string("kind");
  if (kind == "custom") return custom_phase(s.string("expression"), s.number("order"), n, s.boolean("smooth_at_origin", false));
  if (s.has("expression")) throw config_error("'" + s.name("expression") + "' only applies to custom phases");
  if (kind == "homogeneous" || kind == "homogeneous_power") {
    const double order = s.number("order");
    if (!(order > 0.0)) throw config_error("'" + s.name("order") + "' must be positive");
    return homogeneous_phase(order);
  }
  if (s.has("order") || s.has("smooth_at_origin"))
    throw config_error("'" + path + "': catalogue phase '" + kind + "' takes no order or smoothness override");
  try {
    return phase_from_name(kind);
  } catch (const config_error& e) {
    throw config_error("'" + s.name("kind") + "': " + e.what());
  }
}

/// {"kind": constant | japanese_bracket | custom | sharpness_bilinear | chi0_bessel, ...}.
inline MultilinearAmplitude amplitude_from_config(const json& j, const std::string& path, int N, int n) {
  const Section probe(j, path, {"kind", "value", "order", "expression", "m1", "m2", "s", "k0"});
  const std::string kind = probe.string("kind");
  if (kind == "constant") {
    const Section s(j, path, {"kind", "value"});
    return constant_amplitude(s.number("value", 1.0), N, n);
  }
  if (kind == "japanese_bracket") {
    const Section s(j, path, {"kind", "order"});
    return japanese_bracket_amplitude(s.number("order"), N, n);
  }
  if (kind == "custom") {
    const Section s(j, path, {"kind", "order", "expression"});
    return custom_amplitude(s.string("expression"), s.number("order"), N, n);
  }
  if (kind == "sharpness_bilinear") {
    const Section s(j, path, {"kind", "m1", "m2", "s"});
    if (N != 2) throw config_error("'" + path + "': sharpness_bilinear amplitudes are bilinear");
    return build_sharpness_amplitude(n, s.number("m1"), s.number("m2"), 1e6);
  }
  if (kind == "chi0_bessel") {
    const Section s(j, path, {"kind", "s", "k0"});
    if (N != 1) throw config_error("'" + path + "': chi0_bessel amplitudes are linear");
    return prop43_amplitude(n, s.number("s"), static_cast<int>(s.integer("k0", 0)));
  }
  throw config_error("'" + probe.name("kind") + "': unknown amplitude kind '" + kind + "'");
}

/// Field builders. Kinds:
///   expression       {"re", "im"} in x (n = 1) or x1..xn
///   random_band      gaussian spectral coefficients on |xi| <= bandwidth
///   sobolev_profile  |f^| = <xi>^{-decay} on |xi| <= bandwidth, random phases
///   random_sign      +-1 at every grid point
///   miyachi          (1 - th_0) |xi|^{-lambda} e^{-i |xi|^s chirp}
///   trig             sum_{k=1..modes} (a_k cos(k pi x / L) + b_k sin(k pi x / L)), gaussian a_k, b_k (per axis)
inline Field field_from_config(const json& j, const std::string& path, const Grid& g, const CounterRng& rng) {
  const Section probe(j, path, {"kind", "re", "im", "bandwidth", "decay", "lambda", "s", "chirp", "modes", "scale"});
  const std::string kind = probe.string("kind");
  const double scale = probe.number("scale", 1.0);
  const auto n = static_cast<std::size_t>(g.dim());
  Field f = Field::zeros(g);
  if (kind == "expression") {
    const Section s(j, path, {"kind", "re", "im", "scale"});
    std::vector<std::string> vars;
    if (n == 1) vars.push_back("x");
    else for (std::size_t d = 0; d < n; ++d) vars.push_back("x" + std::to_string(d + 1));
    const Expression re = Expression::compile(s.string("re"), vars);
    const Expression im = s.has("im") ? Expression::compile(s.string("im"), vars) : Expression::compile("0", vars);
    f = Field::from_function(g, [&](std::span<const double> x) { return Complex(re(x), im(x)); });
  } else if (kind == "random_band") {
    const Section s(j, path, {"kind", "bandwidth", "scale"});
    const double R = s.number("bandwidth");
    std::uint64_t c = 0;
    f = to_physical(Field::from_spectrum(g, [&](std::span<const double> xi) {
      const std::uint64_t k = c;
      c += 2;
      if (euclid(xi) > R) return Complex(0.0);
      return Complex(rng.normal(k), rng.normal(k + 1));
    }));
  } else if (kind == "sobolev_profile") {
    const Section s(j, path, {"kind", "bandwidth", "decay", "scale"});
    f = to_physical(sobolev_profile_data(g, s.number("decay"), s.number("bandwidth"), rng));
  } else if (kind == "random_sign") {
    const Section s(j, path, {"kind", "scale"});
    f = random_sign_field(g, rng);
  } else if (kind == "miyachi") {
    const Section s(j, path, {"kind", "lambda", "s", "chirp", "scale"});
    f = to_physical(build_miyachi_function(s.number("lambda"), s.number("s"), s.boolean("chirp", true), g));
  } else if (kind == "trig") {
    const Section s(j, path, {"kind", "modes", "scale"});
    const int K = static_cast<int>(s.integer("modes"));
    if (K < 1 || 2 * K >= g.points()) throw config_error("'" + s.name("modes") + "' must lie in [1, G/2)");
    const double w = std::numbers::pi / g.half_width();
    f = Field::from_function(g, [&](std::span<const double> x) {
      double v = 0.0;
      std::uint64_t c = 0;
      for (std::size_t d = 0; d < n; ++d)
        for (int k = 1; k <= K; ++k) {
          v += rng.normal(c) * std::cos(k * w * x[d]) + rng.normal(c + 1) * std::sin(k * w * x[d]);
          c += 2;
        }
      return Complex(v);
    });
  } else {
    throw config_error("'" + probe.name("kind") + "': unknown field kind '" + kind + "'");
  }
  return scale == 1.0 ? f : scaled(f, scale);
}

inline NormKind norm_from_config(const json& j, const std::string& path) {
  if (!j.is_string()) throw config_error("'" + path + "' must be a norm name such as \"L2\" or \"H:1:2\"");
  try {
    return parse_norm_kind(j.get<std::string>());
  } catch (const config_error& e) {
    throw config_error("'" + path + "': " + e.what());
  }
}

}  // namespace oscilab
