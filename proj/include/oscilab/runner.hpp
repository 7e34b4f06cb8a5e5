#pragma once

// Config-driven experiment runner behind the oscilab command line tool.
//
// Every command writes report.json (deterministic for a fixed seed), timing.json (wall-clock)
// and one or more CSV tables into the output directory.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "oscilab/carleson.hpp"
#include "oscilab/carleson_experiments.hpp"
#include "oscilab/config.hpp"
#include "oscilab/cutoff.hpp"
#include "oscilab/decomposition.hpp"
#include "oscilab/dispersive.hpp"
#include "oscilab/field_io.hpp"
#include "oscilab/maximal.hpp"
#include "oscilab/norms.hpp"
#include "oscilab/oio.hpp"
#include "oscilab/ratio_table.hpp"
#include "oscilab/sharpness.hpp"

namespace oscilab {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool hard = true;
  bool skipped = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  json config;
  std::vector<CheckResult> checks;
  json results = json::object();
  std::vector<std::string> artifacts;
  double wall_seconds = 0.0;

  bool ok() const {
    for (const auto& c : checks)
      if (c.hard && !c.skipped && !c.passed) return false;
    return true;
  }

  json to_json() const {
    json j = json::object();
    j["command"] = command;
    j["seed"] = seed;
    j["config"] = config;
    json cs = json::array();
    for (const auto& c : checks) {
      json e = json::object();
      e["name"] = c.name;
      e["verdict"] = c.skipped ? "skipped" : (c.passed ? "pass" : "fail");
      e["hard"] = c.hard;
      e["value"] = finite_or_string(c.value);
      e["threshold"] = finite_or_string(c.threshold);
      if (!c.detail.empty()) e["detail"] = c.detail;
      cs.push_back(std::move(e));
    }
    j["checks"] = std::move(cs);
    j["results"] = results;
    j["artifacts"] = artifacts;
    j["status"] = ok() ? "ok" : "failed";
    return j;
  }

  static json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  }
};

namespace detail {

class Runner {
public:
  Runner(std::string command, const json& config, std::string out_dir, std::uint64_t seed)
      : out_(std::move(out_dir)) {
    report_.command = std::move(command);
    report_.config = config;
    report_.seed = seed;
  }

  RunReport run() {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_);
    const std::string& c = report_.command;
    if (c == "verify") verify();
    else if (c == "norms") norms();
    else if (c == "decompose") decompose();
    else if (c == "evolve") evolve();
    else if (c == "sharpness") sharpness();
    else if (c == "carleson") carleson();
    else throw config_error("unknown command '" + c + "'");
    report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text("report.json", report_.to_json().dump(2) + "\n", false);
    json timing = json::object();
    timing["command"] = report_.command;
    timing["wall_seconds"] = report_.wall_seconds;
    write_text("timing.json", timing.dump(2) + "\n", false);
    return report_;
  }

private:
  // -- helpers ------------------------------------------------------------------------------

  const json& cfg() const { return report_.config; }
  CounterRng rng(const char* stream) const { return CounterRng(report_.seed, stream); }

  std::string path(const std::string& name) const { return (std::filesystem::path(out_) / name).string(); }

  void write_text(const std::string& name, const std::string& text, bool artifact = true) {
    std::ofstream os(path(name), std::ios::binary | std::ios::trunc);
    if (!os) throw error("cannot write '" + path(name) + "'");
    os << text;
    if (artifact) report_.artifacts.push_back(name);
  }

  void table(const std::string& name, const RatioTable& t) {
    emit_ratio_table(t, path(name));
    report_.artifacts.push_back(name);
  }

  void dump(const std::string& name, const Field& f) {
    write_field(f, path(name));
    report_.artifacts.push_back(name);
  }

  CheckResult& check(const std::string& name, double value, double threshold, bool le = true, bool hard = true) {
    CheckResult c;
    c.name = name;
    c.value = value;
    c.threshold = threshold;
    c.hard = hard;
    c.passed = le ? value <= threshold : value >= threshold;
    report_.checks.push_back(c);
    return report_.checks.back();
  }

  void skip(const std::string& name, const std::string& why) {
    CheckResult c;
    c.name = name;
    c.skipped = true;
    c.detail = why;
    report_.checks.push_back(c);
  }

  static std::vector<std::string> keys(std::initializer_list<const char*> extra) {
    std::vector<std::string> k = {"command", "seed"};
    for (const char* e : extra) k.push_back(e);
    return k;
  }

  // -- verify -------------------------------------------------------------------------------

  void verify() {
    const Section top(cfg(), "", {"command", "seed", "grid", "tolerances"});
    const Grid g = top.has("grid") ? grid_from_config(top.raw("grid"), "grid") : make_grid(1, 64, std::numbers::pi);
    const char* names[] = {"transform_round_trip", "plancherel",  "lp_partition",     "derivative_multiplier",
                           "free_unitarity",      "free_group_law", "oracle_equivalence", "decomposition",
                           "duhamel_linear",      "scaling_identity"};
    const double defaults[] = {1e-12, 1e-10, 1e-12, 1e-10, 1e-10, 1e-12, 1e-8, 1e-10, 1e-10, 1e-6};
    std::vector<double> tol(std::begin(defaults), std::end(defaults));
    if (top.has("tolerances")) {
      const json& t = top.raw("tolerances");
      if (!t.is_object()) throw config_error("'tolerances' must be an object");
      for (const auto& [key, value] : t.items()) {
        std::size_t i = 0;
        while (i < tol.size() && key != names[i]) ++i;
        if (i == tol.size()) throw config_error("unknown key 'tolerances." + key + "'");
        if (!value.is_number() || !(value.get<double>() > 0.0))
          throw config_error("'tolerances." + key + "' must be a positive number");
        tol[i] = value.get<double>();
      }
    }
    const auto n = static_cast<std::size_t>(g.dim());
    const CounterRng r = rng("verify");
    auto random_field = [&](std::uint64_t stream, double band) {
      const CounterRng s = r.substream(stream);
      std::uint64_t c = 0;
      return to_physical(Field::from_spectrum(g, [&](std::span<const double> xi) {
        const std::uint64_t k = c;
        c += 2;
        return euclid(xi) <= band ? Complex(s.normal(k), s.normal(k + 1)) : Complex(0.0);
      }));
    };
    const double full = 2.0 * lattice_radius(g);
    const Field f = random_field(0, full);

    check(names[0], relative_l2_error(to_physical(to_spectral(f)), f), tol[0]);

    {
      const Field fh = to_spectral(f);
      double spec = 0.0;
      for (const auto& v : fh.samples()) spec += std::norm(v);
      spec *= g.freq_weight();
      const double phys = std::pow(l2_norm(f), 2.0);
      check(names[1], std::abs(phys - spec) / phys, tol[1]);
    }

    {
      double worst = 0.0;
      for (std::size_t i = 0; i < g.total(); ++i) {
        const Point xi = g.frequency(i);
        const double rad = euclid({xi.data(), n});
        double sum = 0.0;
        for (int j = 0; j <= lp_last_index(rad); ++j) sum += lp_component(j, rad);
        worst = std::max(worst, std::abs(sum - 1.0));
      }
      check(names[2], worst, tol[2]);
    }

    {
      const double w = std::numbers::pi / g.half_width();
      const Field s = Field::from_function(g, [&](std::span<const double> x) { return Complex(std::sin(w * x[0])); });
      const Field c = Field::from_function(g, [&](std::span<const double> x) { return Complex(w * std::cos(w * x[0])); });
      const Field d = apply_multiplier([](std::span<const double> xi) { return Complex(0.0, xi[0]); }, s);
      check(names[3], max_abs_difference(d, c), tol[3]);
    }

    {
      double worst = 0.0, group = 0.0;
      const double base = l2_norm(f);
      for (const auto& name : builtin_phase_names()) {
        const Phase phi = phase_from_name(name);
        for (double t : {0.1, 1.0, 10.0}) worst = std::max(worst, std::abs(l2_norm(free_propagator(t, phi, f)) - base) / base);
        group = std::max(group, relative_l2_error(free_propagator(0.3, phi, free_propagator(0.7, phi, f)), free_propagator(1.0, phi, f)));
      }
      check(names[4], worst, tol[4]);
      check(names[5], group, tol[5]);
    }

    {
      const double P = static_cast<double>(g.total());
      if (P * P * P > quadrature_budget) {
        skip(names[6], "direct quadrature over this grid exceeds the budget");
      } else {
        SeparableTerm a, b;
        a.factors = {[](std::span<const double> xi) { return Complex(std::pow(japanese(xi), -0.5)); },
                     [](std::span<const double> xi) { return Complex(std::cos(euclid(xi))); }};
        b.coefficient = Complex(0.5, -0.25);
        b.factors = {[](std::span<const double> xi) { return Complex(bump(0.25 * euclid(xi))); },
                     [](std::span<const double> xi) { return Complex(0.0, std::pow(japanese(xi), -1.0)); }};
        const OperatorSpec spec{MultilinearAmplitude::separable(g.dim(), 0.0, {a, b}, "verify_pair"),
                                {phase_from_name("schrodinger"), phase_from_name("wave"), phase_from_name("klein_gordon")},
                                {}};
        const double band = 0.5 * g.nyquist() * (1.0 - 1e-9);
        const std::vector<Field> in = {random_field(1, band), random_field(2, band)};
        check(names[6], relative_l2_error(eval_multilinear_oio(spec, in, Route::separable), eval_multilinear_oio(spec, in, Route::direct)),
              tol[6]);
      }
    }

    {
      const auto sigma = japanese_bracket_amplitude(-0.5, 2, g.dim());
      const auto dec = decompose_amplitude(sigma);
      const auto audit = audit_decomposition(sigma, dec, decomposition_samples(2, g.dim(), 1000, r.substream(3)));
      auto& c = check(names[7], audit.max_reconstruction_error, tol[7]);
      if (audit.violations() > 0) {
        c.passed = false;
        c.detail = std::to_string(audit.violations()) + " support violations";
      }
    }

    {
      SystemConfig sys;
      sys.phases = {zero_phase(), zero_phase()};
      sys.zeta = constant_amplitude(1.0, 1, g.dim());
      sys.data = {f};
      sys.kappa = {0.0};
      sys.exponents = {2.0, 2.0};
      sys.horizon = 1.0;
      sys.steps = 4;
      const auto res = solve_coupled_system(sys);
      check(names[8], std::max(relative_l2_error(res.snapshots.back(), f), residual_check(res, sys)), tol[8]);
    }

    {
      ScalingSetup ss;
      const Phase phi = homogeneous_phase(2.0);
      ss.phases = {phi, phi, phi};
      ss.sigma = japanese_bracket_amplitude(-1.0, 2, g.dim());
      ss.r = {0.5, 0.25, 0.25};
      const double band = 0.5 * g.nyquist() * (1.0 - 1e-9);
      ss.inputs = {random_field(4, band), random_field(5, band)};
      try {
        check(names[9], scaling_check(ss, 4.0).discrepancy, tol[9]);
      } catch (const budget_error& e) {
        skip(names[9], e.what());
      }
    }

    RatioTable t;
    t.columns = {"check", "value", "threshold", "passed"};
    for (std::size_t i = 0; i < report_.checks.size(); ++i) {
      const auto& c = report_.checks[i];
      t.add_row({static_cast<double>(i), c.skipped ? std::nan("") : c.value, c.threshold, c.skipped ? -1.0 : (c.passed ? 1.0 : 0.0)});
    }
    table("checks.csv", t);
  }

  // -- norms --------------------------------------------------------------------------------

  void norms() {
    const Section top(cfg(), "", {"command", "seed", "grid", "fields", "norms", "maximal"});
    const Grid g = grid_from_config(top.raw("grid"), "grid");
    const json& fields = top.array("fields");
    const json& kinds = top.array("norms");
    std::vector<Field> fs;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string p = "fields[" + std::to_string(i) + "]";
      json spec = fields[i];
      std::string name = "field" + std::to_string(i);
      if (spec.is_object() && spec.contains("name")) {
        if (!spec["name"].is_string()) throw config_error("'" + p + ".name' must be a string");
        name = spec["name"].get<std::string>();
        spec.erase("name");
      }
      fs.push_back(field_from_config(spec, p, g, rng("norms").substream(i)));
      names.push_back(name);
    }
    std::vector<NormKind> nk;
    for (std::size_t i = 0; i < kinds.size(); ++i) nk.push_back(norm_from_config(kinds[i], "norms[" + std::to_string(i) + "]"));

    RatioTable t;
    t.columns = {"field", "norm", "value"};
    json out = json::array();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      json e = json::object();
      e["field"] = names[i];
      for (std::size_t k = 0; k < nk.size(); ++k) {
        const double v = norm(fs[i], nk[k]);
        t.add_row({static_cast<double>(i), static_cast<double>(k), v});
        e[to_string(nk[k])] = RunReport::finite_or_string(v);
      }
      out.push_back(std::move(e));
    }
    report_.results["norms"] = std::move(out);
    table("norms.csv", t);

    if (top.has("maximal")) {
      const Section m(top.raw("maximal"), "maximal", {"r", "peetre", "park"});
      const double r = m.number("r", 1.0);
      double pa = 1.0, pb = 1.0, ps = 1.0, pp = 2.0;
      int pj = 0;
      if (m.has("peetre")) {
        const Section s(m.raw("peetre"), "maximal.peetre", {"a", "b"});
        pa = s.number("a");
        pb = s.number("b");
      }
      if (m.has("park")) {
        const Section s(m.raw("park"), "maximal.park", {"s", "j", "p"});
        ps = s.number("s");
        pj = static_cast<int>(s.integer("j"));
        pp = s.number("p");
      }
      RatioTable mt;
      mt.columns = {"field", "hl_norm_ratio", "peetre_constant", "park_constant", "park_comparability"};
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const Field M = hl_maximal(fs[i], r);
        const double base = lebesgue_norm(fs[i], 2.0);
        const double hl = base > 0.0 ? lebesgue_norm(M, 2.0) / base : 0.0;
        const double pe = empirical_constant(peetre_maximal(fs[i], pa, pb), hl_maximal(fs[i], r));
        const double pk = empirical_constant(park_maximal(fs[i], ps, pj, pp), hl_maximal(fs[i], pp));
        const double cmp = park_dyadic_comparability(fs[i], ps, pj, pp);
        mt.add_row({static_cast<double>(i), hl, pe, pk, cmp});
      }
      table("maximal.csv", mt);
    }
  }

  // -- decompose ----------------------------------------------------------------------------

  void decompose() {
    const Section top(cfg(), "", {"command", "seed", "arity", "dim", "amplitude", "samples", "radius_max"});
    const int N = static_cast<int>(top.integer("arity", 2));
    const int n = static_cast<int>(top.integer("dim", 1));
    if (N < 2) throw config_error("'arity' must be at least 2 for the decomposition");
    if (n < 1 || n > max_dim) throw config_error("'dim' must lie in [1, 3]");
    const auto count = top.integer("samples", 10000);
    if (count < 1) throw config_error("'samples' must be positive");
    const MultilinearAmplitude sigma = amplitude_from_config(top.raw("amplitude"), "amplitude", N, n);
    const DecomposedAmplitude dec = decompose_amplitude(sigma);
    const auto samples = decomposition_samples(N, n, static_cast<std::size_t>(count), rng("decompose"), top.number("radius_max", 1e3));
    const auto audit = audit_decomposition(sigma, dec, samples);

    RatioTable t;
    t.columns = {"abs_Xi", "sigma", "sigma0", "single_sum", "pair_sum", "reconstruction_error"};
    const Point x{};
    const std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
    for (const auto& Xi : samples) {
      Complex single = 0.0, pair = 0.0;
      for (const auto& p : dec.sigma_j) single += p(xs, Xi);
      for (const auto& p : dec.sigma_jk) pair += p.sigma(xs, Xi);
      const Complex s = sigma(xs, Xi);
      t.add_row({euclid(Xi), std::abs(s), std::abs(dec.sigma0(xs, Xi)), std::abs(single), std::abs(pair),
                 std::abs(dec.reconstruct(xs, Xi) - s)});
    }
    table("decomposition.csv", t);

    json k = json::object();
    k["chi_inner"] = dec.constants.chi_inner;
    k["chi_outer"] = dec.constants.chi_outer;
    k["c1"] = dec.constants.c1;
    k["c2"] = dec.constants.c2;
    k["domination"] = dec.constants.domination;
    k["pair_threshold"] = dec.constants.pair_threshold;
    k["comparability"] = dec.constants.comparability;
    report_.results["constants"] = k;
    json v = json::object();
    v["sigma0_support"] = audit.sigma0_support_violations;
    v["inner_support"] = audit.inner_support_violations;
    v["domination"] = audit.domination_violations;
    v["comparability"] = audit.comparability_violations;
    report_.results["violations"] = v;
    check("reconstruction", audit.max_reconstruction_error, 1e-10);
    check("support_violations", static_cast<double>(audit.violations()), 0.0);
  }

  // -- evolve -------------------------------------------------------------------------------

  void evolve() {
    const Section top(cfg(), "", {"command", "seed", "system", "ratio_experiment"});
    if (!top.has("system") && !top.has("ratio_experiment"))
      throw config_error("evolve needs a 'system' or a 'ratio_experiment' section");
    if (top.has("system")) evolve_system(top.raw("system"));
    if (top.has("ratio_experiment")) ratio_experiment(top.raw("ratio_experiment"));
  }

  void evolve_system(const json& j) {
    const Section s(j, "system", {"grid", "phases", "zeta", "data", "kappa", "exponents", "horizon", "steps", "quadrature",
                                  "route", "target", "q", "dump_fields", "residual"});
    const Grid g = grid_from_config(s.raw("grid"), "system.grid");
    const json& ph = s.array("phases");
    const json& data = s.array("data");
    const int N = static_cast<int>(data.size());
    SystemConfig sys;
    for (std::size_t i = 0; i < ph.size(); ++i) sys.phases.push_back(phase_from_config(ph[i], "system.phases[" + std::to_string(i) + "]", g.dim()));
    sys.zeta = amplitude_from_config(s.raw("zeta"), "system.zeta", N, g.dim());
    for (std::size_t i = 0; i < data.size(); ++i)
      sys.data.push_back(field_from_config(data[i], "system.data[" + std::to_string(i) + "]", g, rng("evolve").substream(i)));
    sys.kappa = s.has("kappa") ? s.numbers("kappa") : std::vector<double>(data.size(), 0.0);
    // default: p0 = 2, p_j = 2N
    sys.exponents = s.has("exponents") ? s.numbers("exponents") : std::vector<double>(data.size() + 1, 2.0 * N);
    if (!s.has("exponents")) sys.exponents[0] = 2.0;
    sys.horizon = s.number("horizon", 1.0);
    sys.steps = static_cast<int>(s.integer("steps", 64));
    try {
      sys.quadrature = time_quadrature_from_name(s.string("quadrature", "trapezoid"));
      sys.route = route_from_name(s.string("route", "automatic"));
      sys.validate();
    } catch (const error& e) {
      throw config_error(std::string("'system': ") + e.what());
    }
    const NormKind target = s.has("target") ? norm_from_config(s.raw("target"), "system.target") : NormKind::lebesgue(2.0);
    const auto res = solve_coupled_system(sys);

    RatioTable t;
    t.columns = {"t", "l2_norm", "target_norm"};
    for (std::size_t i = 0; i < res.times.size(); ++i) t.add_row({res.times[i], res.norm_traces[i], norm(res.snapshots[i], target)});
    table("trace.csv", t);

    json r = json::object();
    r["target"] = to_string(target);
    r["critical_order"] = sys.critical();
    r["natural_index"] = sys.kappa_min() + sys.critical() - sys.zeta.order();
    r["outside_hypotheses"] = res.outside_hypotheses;
    json st = json::object();
    for (double q : s.has("q") ? s.numbers("q") : std::vector<double>{2.0, infinity}) {
      const double v = space_time_norm(res, q, target);
      st[std::isinf(q) ? std::string("inf") : format_number(q)] = v;
    }
    r["space_time_norms"] = st;
    if (s.boolean("residual", true) && res.snapshots.size() >= 3) r["residual"] = residual_check(res, sys);
    report_.results["system"] = r;
    if (s.boolean("dump_fields", false)) {
      for (std::size_t j = 0; j < sys.data.size(); ++j) dump("data_" + std::to_string(j + 1) + ".field", sys.data[j]);
      dump("u_final.field", res.snapshots.back());
    }
  }

  void ratio_experiment(const json& j) {
    const Section s(j, "ratio_experiment",
                    {"dim", "degree", "arity", "exponents", "kappa", "m_zeta", "target_index", "horizon", "q", "bandwidths",
                     "draws", "time_nodes", "oversample", "quadrature"});
    RatioExperimentConfig c;
    c.dim = static_cast<int>(s.integer("dim", 1));
    c.degree = s.number("degree", 2.0);
    c.arity = static_cast<int>(s.integer("arity", 2));
    if (s.has("exponents")) c.exponents = s.numbers("exponents");
    c.kappa = s.has("kappa") ? s.numbers("kappa") : std::vector<double>(static_cast<std::size_t>(c.arity), 0.0);
    c.m_zeta = s.number("m_zeta");
    if (s.has("target_index")) c.target_index = s.number("target_index");
    c.horizon = s.number("horizon", 1.0);
    c.q = s.number("q", 2.0);
    if (s.has("bandwidths")) c.bandwidths = s.integers("bandwidths");
    c.draws = static_cast<int>(s.integer("draws", 5));
    c.time_nodes = static_cast<int>(s.integer("time_nodes", 41));
    c.oversample = static_cast<int>(s.integer("oversample", 8));
    c.quadrature = time_quadrature_from_name(s.string("quadrature", "resonance"));
    c.seed = report_.seed;
    RatioExperimentResult res;
    try {
      res = estimate_ratio_experiment(c);
    } catch (const budget_error&) {
      throw;
    } catch (const error& e) {
      throw config_error(std::string("'ratio_experiment': ") + e.what());
    }
    table("ratio.csv", res.table);
    RatioTable summary;
    summary.columns = {"R", "max_ratio"};
    for (std::size_t i = 0; i < res.max_ratio.size(); ++i) summary.add_row({static_cast<double>(c.bandwidths[i]), res.max_ratio[i]});
    table("ratio_summary.csv", summary);
    json r = json::object();
    r["critical_order"] = res.critical;
    r["target_index"] = res.target;
    r["slope"] = res.slope;
    r["spread"] = res.spread;
    r["increasing"] = res.increasing;
    report_.results["ratio_experiment"] = r;
  }

  // -- sharpness ----------------------------------------------------------------------------

  void sharpness() {
    const Section top(cfg(), "", {"command", "seed", "s", "p", "q", "r", "epsilon", "bandwidths", "dim", "identity"});
    const double s = top.number("s", 1.0), p = top.number("p", 4.0), q = top.number("q", 4.0);
    const double r = top.number("r", 1.0 / (1.0 / p + 1.0 / q)), eps = top.number("epsilon", 0.0);
    const int n = static_cast<int>(top.integer("dim", 1));
    const std::vector<int> Rs = top.has("bandwidths") ? top.integers("bandwidths") : std::vector<int>{32, 64, 128, 256, 512};
    SharpnessParameters par;
    try {
      par = sharpness_parameters(n, s, p, q, r, eps);
    } catch (const error& e) {
      throw config_error(e.what());
    }
    if (top.has("identity")) {
      const Grid g = grid_from_config(top.raw("identity"), "identity");
      const auto rep = square_function_check(par, g, Route::direct);
      check("square_function_identity", rep.discrepancy, 1e-6);
      check("bilinear_min", rep.min_real, -1e-12 * std::max(1.0, rep.bilinear_l1), false);
    }
    const auto res = blowup_experiment(p, q, r, eps, s, Rs, n);
    table("sharpness.csv", res.table);
    json j = json::object();
    j["family"] = to_string(par.family);
    j["lambda1"] = par.lambda1;
    j["lambda2"] = par.lambda2;
    j["m1"] = par.m1;
    j["m2"] = par.m2;
    j["critical_order"] = par.critical;
    j["slope"] = res.slope;
    j["increasing"] = res.increasing;
    j["blowup_detected"] = res.blowup_detected;
    report_.results["blowup"] = j;
    check("order_identity", std::abs(par.m1 + par.m2 - par.critical - eps), 1e-12);
  }

  // -- carleson -----------------------------------------------------------------------------

  void carleson() {
    const Section top(cfg(), "", {"command", "seed", "family", "draws", "grid", "phase", "amplitude", "shift", "ks", "data"});
    const std::string family = top.string("family", "builtin");
    const int draws = static_cast<int>(top.integer("draws", 5));
    if (draws < 1) throw config_error("'draws' must be positive");
    std::vector<DecayReport> reps;
    if (family == "builtin") {
      for (const char* k : {"grid", "phase", "amplitude", "shift", "ks", "data"})
        if (top.has(k)) throw config_error("'" + std::string(k) + "' does not apply to the builtin family");
      reps = carleson_builtin_family(report_.seed, draws).draws;
    } else if (family == "custom") {
      const Grid g = grid_from_config(top.raw("grid"), "grid");
      const Phase phi = phase_from_config(top.raw("phase"), "phase", g.dim());
      const auto d = amplitude_from_config(top.raw("amplitude"), "amplitude", 1, g.dim());
      Point u{};
      if (top.has("shift")) {
        const auto v = top.numbers("shift");
        if (v.size() != static_cast<std::size_t>(g.dim())) throw config_error("'shift' needs one entry per dimension");
        for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i];
      }
      const std::vector<int> ks = top.has("ks") ? top.integers("ks") : std::vector<int>{2, 3, 4, 5, 6, 7};
      for (int i = 0; i < draws; ++i) {
        Field f = field_from_config(top.raw("data"), "data", g, rng("carleson").substream(static_cast<std::uint64_t>(i)));
        BandMeasureSpec spec{phi, d, u, ks.front(), 0, std::move(f)};
        try {
          reps.push_back(decay_experiment(spec, ks));
        } catch (const budget_error&) {
          throw;
        } catch (const error& e) {
          throw config_error(e.what());
        }
      }
    } else {
      throw config_error("'family': unknown Carleson family '" + family + "'");
    }
    RatioTable per, mean;
    per.columns = {"draw", "k", "carleson_norm", "fitted_slope"};
    mean.columns = {"k", "carleson_norm", "fitted_slope"};
    double slope = 0.0;
    bool degenerate = false;
    for (const auto& r : reps) {
      slope += r.slope / static_cast<double>(reps.size());
      degenerate = degenerate || r.degenerate;
    }
    for (std::size_t i = 0; i < reps.front().ks.size(); ++i) {
      double avg = 0.0;
      for (std::size_t d = 0; d < reps.size(); ++d) {
        per.add_row({static_cast<double>(d), static_cast<double>(reps[d].ks[i]), reps[d].norms[i], reps[d].slope});
        avg += reps[d].norms[i] / static_cast<double>(reps.size());
      }
      mean.add_row({static_cast<double>(reps.front().ks[i]), avg, slope});
    }
    table("carleson.csv", mean);
    table("carleson_draws.csv", per);
    json j = json::object();
    j["mean_slope"] = RunReport::finite_or_string(slope);
    j["degenerate"] = degenerate;
    j["predicted_epsilon_max"] = reps.front().predicted_max;
    report_.results["decay"] = j;
  }

  std::string out_;
  RunReport report_;
};

}  // namespace detail

/// Runs `command` on a parsed config. A "command" key inside the config, when present, must match.
inline RunReport run_experiment(const std::string& command, const json& config, const std::string& out_dir, std::uint64_t seed) {
  if (config.contains("command") && (!config["command"].is_string() || config["command"].get<std::string>() != command))
    throw config_error("config 'command' does not match the requested command '" + command + "'");
  return detail::Runner(command, config, out_dir, seed).run();
}

/// Seed resolution: explicit override, else the config's "seed", else 0.
inline std::uint64_t resolve_seed(const json& config, std::optional<std::uint64_t> override_seed) {
  if (override_seed) return *override_seed;
  if (!config.contains("seed")) return 0;
  const json& s = config["seed"];
  if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
    throw config_error("'seed' must be a nonnegative integer");
  return s.get<std::uint64_t>();
}

}  // namespace oscilab
