// Acceptance suite: one PASS/FAIL line per criterion. `acceptance --criterion N` runs one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscilab/oscilab.hpp"

using namespace oscilab;

namespace {

struct Verdict {
  bool pass = true;
  std::string summary;
};

void note(const char* fmt, auto... args) {
  std::printf("  ");
  std::printf(fmt, args...);
  std::printf("\n");
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Field random_band(const Grid& g, double band, const CounterRng& rng) {
  std::uint64_t c = 0;
  return to_physical(Field::from_spectrum(g, [&](std::span<const double> xi) {
    const std::uint64_t k = c;
    c += 2;
    return euclid(xi) <= band ? Complex(rng.normal(k), rng.normal(k + 1)) : Complex(0.0);
  }));
}

// 1 -------------------------------------------------------------------------------------------
Verdict lp_partition() {
  double worst = 0.0;
  for (int n : {1, 2})
    for (int G : {8, 16, 32, 64})
      for (double L : {std::numbers::pi, 0.37, 10.0}) {
        const Grid g = make_grid(n, G, L);
        for (std::size_t i = 0; i < g.total(); ++i) {
          const Point xi = g.frequency(i);
          const double r = euclid({xi.data(), static_cast<std::size_t>(n)});
          double s = 0.0;
          for (int j = 0; j <= lp_last_index(r); ++j) s += lp_component(j, r);
          worst = std::max(worst, std::abs(s - 1.0));
        }
      }
  return {worst <= 1e-12, fmt("max |sum - 1| = %.3g (limit 1e-12)", worst)};
}

// 2 -------------------------------------------------------------------------------------------
Verdict decomposition() {
  Verdict v;
  double worst = 0.0;
  std::size_t violations = 0;
  for (int N : {2, 3})
    for (int n : {1, 2}) {
      const std::vector<MultilinearAmplitude> amps = {japanese_bracket_amplitude(-0.5, N, n), japanese_bracket_amplitude(1.0, N, n),
                                                      custom_amplitude("cos(R) / (1 + R^2)", -2.0, N, n)};
      for (std::size_t a = 0; a < amps.size(); ++a) {
        const auto dec = decompose_amplitude(amps[a]);
        const auto samples = decomposition_samples(N, n, 10000, CounterRng(static_cast<std::uint64_t>(100 * N + 10 * n + a), "acceptance"));
        const auto audit = audit_decomposition(amps[a], dec, samples);
        note("N=%d n=%d %-18s recon %.3g, violations sigma0 %zu inner %zu domination %zu comparability %zu", N, n,
             amps[a].name().c_str(), audit.max_reconstruction_error, audit.sigma0_support_violations,
             audit.inner_support_violations, audit.domination_violations, audit.comparability_violations);
        worst = std::max(worst, audit.max_reconstruction_error);
        violations += audit.violations();
      }
    }
  v.pass = worst <= 1e-10 && violations == 0;
  v.summary = fmt("max reconstruction error %.3g (limit 1e-10), %zu support violations", worst, violations);
  return v;
}

// 3 -------------------------------------------------------------------------------------------
FrequencyFunction random_factor(const CounterRng& r, std::uint64_t c) {
  const int kind = static_cast<int>(r.bits(c) % 4);
  const double a = r.uniform(c + 1, -1.5, 0.5), b = r.uniform(c + 2, 0.1, 2.0);
  switch (kind) {
    case 0: return [a](std::span<const double> xi) { return Complex(std::pow(japanese(xi), a)); };
    case 1: return [b](std::span<const double> xi) { return std::polar(1.0, b * euclid(xi)); };
    case 2: return [b](std::span<const double> xi) { return Complex(bump(b * euclid(xi))); };
    default: return [a, b](std::span<const double> xi) { return Complex(std::cos(b * xi[0]), a * xi[0] / japanese(xi)); };
  }
}

Verdict oracle_equivalence() {
  double worst = 0.0;
  const auto names = builtin_phase_names();
  for (auto [n, G] : {std::pair{1, 64}, std::pair{2, 16}}) {
    const Grid g = make_grid(n, G, std::numbers::pi);
    double local = 0.0;
    for (int d = 0; d < 20; ++d) {
      const CounterRng r = CounterRng(2024, "oracle").substream(static_cast<std::uint64_t>(100 * n + d));
      std::vector<SeparableTerm> terms(1 + r.bits(0) % 3);
      std::uint64_t c = 10;
      for (auto& t : terms) {
        t.coefficient = Complex(r.normal(c), r.normal(c + 1));
        t.factors = {random_factor(r, c + 2), random_factor(r, c + 5)};
        c += 8;
      }
      const auto amp = MultilinearAmplitude::separable(n, 0.0, terms, "random");
      std::vector<Phase> phases;
      for (int j = 0; j < 3; ++j) {
        const Phase p = phase_from_name(names[r.bits(50 + static_cast<std::uint64_t>(j)) % names.size()]);
        phases.push_back(p.scaled(r.uniform(60 + static_cast<std::uint64_t>(j), -1.0, 1.0)));
      }
      const OperatorSpec spec{amp, phases, {}};
      const double band = 0.5 * g.nyquist() * (1.0 - 1e-9);
      const std::vector<Field> in = {random_band(g, band, r.substream(1)), random_band(g, band, r.substream(2))};
      const double e = relative_l2_error(eval_multilinear_oio(spec, in, Route::separable), eval_multilinear_oio(spec, in, Route::direct));
      local = std::max(local, e);
    }
    note("n=%d G=%d: max relative L2 error over 20 draws %.3g", n, G, local);
    worst = std::max(worst, local);
  }
  return {worst <= 1e-8, fmt("max relative L2 error %.3g (limit 1e-8)", worst)};
}

// 4 -------------------------------------------------------------------------------------------
Verdict square_function() {
  const Grid g = make_grid(1, 256, 8.0 * std::numbers::pi);
  struct Case {
    double s, p, q;
  };
  double worst = 0.0, neg = 0.0;
  for (const Case& c : {Case{1.0, 4.0, 4.0}, Case{1.0, 1.5, 1.5}, Case{2.0, 4.0, 6.0}, Case{2.0, 1.5, 2.0}}) {
    const auto par = sharpness_parameters(1, c.s, c.p, c.q, 1.0 / (1.0 / c.p + 1.0 / c.q), 0.1);
    const auto rep = square_function_check(par, g, Route::direct);
    note("%-9s s=%g p=%g q=%g: discrepancy %.3g, min Re B %.3g, max |Im B| %.3g", to_string(par.family), c.s, c.p, c.q,
         rep.discrepancy, rep.min_real, rep.max_imag);
    worst = std::max(worst, rep.discrepancy);
    neg = std::min(neg, rep.min_real / std::max(rep.bilinear_l1, 1e-300));
  }
  return {worst <= 1e-6, fmt("max relative L1 discrepancy %.3g (limit 1e-6)", worst)};
}

// 5 -------------------------------------------------------------------------------------------
Verdict sharpness_dichotomy() {
  const std::vector<int> Rs = {32, 64, 128, 256, 512};
  Verdict v;
  for (double s : {1.0, 2.0}) {
    const auto crit = blowup_experiment(4.0, 4.0, 2.0, 0.0, s, Rs);
    const auto super = blowup_experiment(4.0, 4.0, 2.0, 0.5, s, Rs);
    std::string rc, rs;
    for (const auto& row : crit.table.rows) rc += fmt(" %.4g", row[1]);
    for (const auto& row : super.table.rows) rs += fmt(" %.4g", row[1]);
    note("s=%g eps=0   ratios%s  slope %+.3f (need |slope| <= 0.05)", s, rc.c_str(), crit.slope);
    note("s=%g eps=0.5 ratios%s  slope %+.3f (need >= 0.1, strictly increasing: %s)", s, rs.c_str(), super.slope,
         super.increasing ? "yes" : "no");
    const bool ok0 = std::abs(crit.slope) <= 0.05, ok5 = super.slope >= 0.1 && super.increasing;
    if (!ok0 || !ok5) v.pass = false;
    v.summary += fmt("s=%g: eps=0 slope %+.3f%s, eps=0.5 slope %+.3f%s; ", s, crit.slope, ok0 ? "" : " (out of band)", super.slope,
                     ok5 ? "" : " (not growing)");
  }
  return v;
}

// 6 -------------------------------------------------------------------------------------------
SystemConfig schrodinger_pair(int M) {
  const Grid g = make_grid(1, 64, std::numbers::pi);
  const CounterRng r(6, "acceptance_duhamel");
  SystemConfig c;
  const Phase s = phase_from_name("schrodinger");
  c.phases = {s, s, s};
  c.zeta = japanese_bracket_amplitude(-0.5, 2, 1);
  c.data = {random_band(g, 8.0, r.substream(1)), random_band(g, 8.0, r.substream(2))};
  c.kappa = {0.0, 0.0};
  c.exponents = {2.0, 4.0, 4.0};
  c.horizon = 0.05;
  c.steps = M;
  return c;
}

Verdict duhamel() {
  Verdict v;
  std::vector<double> res;
  for (int M : {16, 32, 64, 128}) {
    const SystemConfig c = schrodinger_pair(M);
    res.push_back(residual_check(solve_coupled_system(c), c));
    note("M=%4d residual %.4g%s", M, res.back(), res.size() > 1 ? fmt("  ratio %.3f", res[res.size() - 2] / res.back()).c_str() : "");
  }
  bool second = true;
  for (std::size_t i = 0; i + 1 < res.size(); ++i) {
    const double q = res[i] / res[i + 1];
    second = second && q >= 3.5 && q <= 4.5;
  }

  SystemConfig zero = schrodinger_pair(32);
  zero.zeta = constant_amplitude(0.0, 2, 1);
  const auto rz = solve_coupled_system(zero);
  double zmax = 0.0;
  for (const auto& u : rz.snapshots) zmax = std::max(zmax, l2_norm(u));
  const double zres = residual_check(rz, zero);

  const Grid g = make_grid(1, 64, std::numbers::pi);
  SystemConfig lin;
  lin.phases = {zero_phase(), zero_phase()};
  lin.zeta = constant_amplitude(1.0, 1, 1);
  lin.data = {random_band(g, 20.0, CounterRng(6, "acceptance_linear"))};
  lin.kappa = {0.0};
  lin.exponents = {2.0, 2.0};
  lin.horizon = 1.0;
  lin.steps = 16;
  const auto rl = solve_coupled_system(lin);
  double lerr = 0.0;
  for (std::size_t i = 0; i < rl.times.size(); ++i) lerr = std::max(lerr, max_abs_difference(rl.snapshots[i], scaled(lin.data[0], rl.times[i])));
  const double lres = residual_check(rl, lin);
  note("zeta = 0: max ||u|| %.3g, residual %.3g; zero phases: max |u - t f| %.3g, residual %.3g", zmax, zres, lerr, lres);

  const bool exact = zmax <= 1e-10 && zres <= 1e-10 && lerr <= 1e-10 && lres <= 1e-10;
  v.pass = second && exact;
  v.summary = fmt("residual ratios in [3.5, 4.5]: %s; exact cases within 1e-10: %s", second ? "yes" : "no", exact ? "yes" : "no");
  return v;
}

// 7 -------------------------------------------------------------------------------------------
Verdict rescaling() {
  const Grid g = make_grid(1, 64, std::numbers::pi);
  const CounterRng r(7, "acceptance_scaling");
  double worst = 0.0;
  const std::vector<std::vector<double>> rs = {{0.5, 0.25, 0.25}, {0.0, 0.0, 0.0}, {-0.5, 1.0, 0.0}};
  const std::vector<double> ms = {-1.0, 0.0, 0.5};
  for (std::size_t i = 0; i < rs.size(); ++i) {
    ScalingSetup s;
    const Phase phi = homogeneous_phase(2.0);
    s.phases = {phi, phi, phi.scaled(-1.0)};
    s.sigma = japanese_bracket_amplitude(ms[i], 2, 1);
    s.r = rs[i];
    const double band = 0.5 * g.nyquist() * (1.0 - 1e-9);
    s.inputs = {random_band(g, band, r.substream(2 * i)), random_band(g, band, r.substream(2 * i + 1))};
    const auto rep = scaling_check(s, 4.0);
    note("m=%+.1f r=(%g, %g, %g): discrepancy %.3g, exponent E/s = %g", ms[i], rs[i][0], rs[i][1], rs[i][2], rep.discrepancy, rep.exponent);
    worst = std::max(worst, rep.discrepancy);
  }
  return {worst <= 1e-6, fmt("max discrepancy %.3g at t=4 (limit 1e-6)", worst)};
}

// 8 -------------------------------------------------------------------------------------------
Verdict ratio_stability() {
  RatioExperimentConfig c;
  c.seed = 8;
  c.m_zeta = -1.0;
  const auto crit = estimate_ratio_experiment(c);
  auto row = [](const RatioExperimentResult& r) {
    std::string s;
    for (double v : r.max_ratio) s += fmt(" %.4g", v);
    return s;
  };
  note("m_zeta = m_c = %g, target index %g: max ratios%s, spread %.3f", crit.critical, crit.target, row(crit).c_str(), crit.spread);
  c.m_zeta = crit.critical + 0.5;
  c.target_index = 0.0;  // same target norm as the critical estimate
  const auto super = estimate_ratio_experiment(c);
  note("m_zeta = m_c + 0.5, target index 0: max ratios%s, growth %.3f, increasing %s", row(super).c_str(),
       super.max_ratio.back() / super.max_ratio.front(), super.increasing ? "yes" : "no");
  c.target_index.reset();
  try {
    const auto shifted = estimate_ratio_experiment(c);
    note("m_zeta = m_c + 0.5, target index %g (shifted with m_zeta): max ratios%s", shifted.target, row(shifted).c_str());
  } catch (const error& e) {
    note("m_zeta = m_c + 0.5 with the shifted target index: refused (%s)", e.what());
  }
  const bool ok1 = crit.spread < 2.0;
  const double growth = super.max_ratio.back() / super.max_ratio.front();
  const bool ok2 = super.increasing && growth >= 1.5;
  return {ok1 && ok2, fmt("critical spread %.3f (need < 2): %s; supercritical growth %.3f, increasing %s (need >= 1.5, monotone): %s",
                          crit.spread, ok1 ? "ok" : "no", growth, super.increasing ? "yes" : "no", ok2 ? "ok" : "no")};
}

// 9 -------------------------------------------------------------------------------------------
Verdict carleson_decay() {
  const auto fam = carleson_builtin_family(42, 5);
  for (std::size_t d = 0; d < fam.draws.size(); ++d) note("draw %zu: slope %.4f", d, fam.draws[d].slope);
  return {fam.mean_slope <= -0.2, fmt("mean slope %.4f (need <= -0.2); predicted epsilon range up to %g", fam.mean_slope,
                                      fam.draws.front().predicted_max)};
}

// 10 ------------------------------------------------------------------------------------------
Verdict maximal_suite() {
  double pe_shift = 0.0, pk_shift = 0.0, cmp_max = 0.0;
  bool finite = true;
  for (int d = 0; d < 5; ++d) {
    double pe[2], pk[2];
    for (int i = 0; i < 2; ++i) {
      const Grid g = make_grid(1, 128 << i, std::numbers::pi);
      const Field f = field_from_config(parse_config_text(R"({"kind": "trig", "modes": 8})"), "f", g, CounterRng(static_cast<std::uint64_t>(d), "acceptance_maximal"));
      const Field Mp = hl_maximal(f, 2.0);
      pe[i] = empirical_constant(peetre_maximal(f, 1.0, 4.0), Mp);
      pk[i] = empirical_constant(park_maximal(f, 1.0, 3, 2.0), Mp);
      const double cmp = park_dyadic_comparability(f, 1.0, 3, 2.0);
      finite = finite && std::isfinite(pe[i]) && std::isfinite(pk[i]) && std::isfinite(cmp);
      cmp_max = std::max(cmp_max, cmp);
    }
    note("draw %d: Peetre/M_2 %.4f -> %.4f, Park/M_2 %.4f -> %.4f (G 128 -> 256)", d, pe[0], pe[1], pk[0], pk[1]);
    pe_shift = std::max(pe_shift, std::abs(pe[1] / pe[0] - 1.0));
    pk_shift = std::max(pk_shift, std::abs(pk[1] / pk[0] - 1.0));
  }
  const bool ok = finite && pe_shift <= 0.1 && pk_shift <= 0.1;
  return {ok, fmt("max refinement change Peetre %.1f%%, Park %.1f%% (limit 10%%); dyadic comparability <= %.3f", 100 * pe_shift,
                  100 * pk_shift, cmp_max)};
}

// 11 ------------------------------------------------------------------------------------------
Verdict unitarity() {
  double worst = 0.0;
  for (auto [n, G] : {std::pair{1, 64}, std::pair{2, 32}}) {
    const Grid g = make_grid(n, G, std::numbers::pi);
    const Field f = random_band(g, 1e9, CounterRng(11, "acceptance_unitarity").substream(static_cast<std::uint64_t>(n)));
    const double base = l2_norm(f);
    for (const auto& name : builtin_phase_names())
      for (double t : {0.1, 1.0, 10.0}) worst = std::max(worst, std::abs(l2_norm(free_propagator(t, phase_from_name(name), f)) - base) / base);
  }
  return {worst <= 1e-10, fmt("max relative norm change %.3g (limit 1e-10)", worst)};
}

struct Criterion {
  const char* title;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oscilab acceptance suite"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {"Littlewood-Paley partition of unity", 1.0, lp_partition},
      {"amplitude decomposition", 10.0, decomposition},
      {"operator oracle equivalence", 120.0, oracle_equivalence},
      {"square-function identity", 120.0, square_function},
      {"sharpness dichotomy", 300.0, sharpness_dichotomy},
      {"Duhamel correctness", 60.0, duhamel},
      {"rescaling identity", 30.0, rescaling},
      {"estimate ratio stability", 600.0, ratio_stability},
      {"Carleson decay", 300.0, carleson_decay},
      {"maximal-function suite", 60.0, maximal_suite},
      {"unitarity", 10.0, unitarity},
  };
  bool all_pass = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = all[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= all[i].budget_seconds;
    const bool pass = v.pass && in_time;
    all_pass = all_pass && pass;
    std::printf("%s criterion %zu (%s): %s [%.2f s of %.0f s]\n", pass ? "PASS" : "FAIL", i + 1, all[i].title, v.summary.c_str(), secs,
                all[i].budget_seconds);
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
