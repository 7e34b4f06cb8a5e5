#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <unistd.h>

#include "test_util.hpp"

using namespace oscilab;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("oscilab_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string config_error_message(const std::string& text, const std::string& command) {
  try {
    run_experiment(command, parse_config_text(text), scratch("err").string(), 0);
  } catch (const config_error& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST(Rng, FrozenDraws) {
  // values cross-checked against an independent splitmix64 / FNV-1a implementation
  const CounterRng r(42, "carleson");
  EXPECT_EQ(r.bits(0), 11071260863519248998ULL);
  EXPECT_EQ(r.bits(1), 12396374718072442814ULL);
  EXPECT_EQ(r.substream(3).bits(0), 17584577478602662338ULL);
  EXPECT_DOUBLE_EQ(r.uniform(0), 0.60017425401906555);
  EXPECT_DOUBLE_EQ(r.normal(0), -0.47558765408392911);
}

TEST(Rng, UniformRangeAndMoments) {
  const CounterRng r(1, "moments");
  double m = 0.0, v = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform(static_cast<std::uint64_t>(i));
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = r.normal(static_cast<std::uint64_t>(i));
    m += z / n;
    v += z * z / n;
  }
  EXPECT_NEAR(m, 0.0, 0.03);
  EXPECT_NEAR(v, 1.0, 0.04);
}

TEST(RatioTableCsv, EmptyTableRejected) {
  RatioTable t;
  t.columns = {"a"};
  EXPECT_THROW(format_csv(t), error);
  EXPECT_THROW(t.add_row({1.0, 2.0}), error);
}

TEST(RatioTableCsv, SingleRowIsTwoLines) {
  RatioTable t;
  t.columns = {"R", "ratio"};
  t.add_row({32.0, 1.0 / 3.0});
  EXPECT_EQ(format_csv(t), "R,ratio\n32,0.333333333333\n");
}

TEST(RatioTableCsv, RoundTrip) {
  RatioTable t;
  t.columns = {"k", "carleson_norm", "fitted_slope"};
  const CounterRng r(3, "csv");
  for (int i = 0; i < 50; ++i)
    t.add_row({static_cast<double>(i), std::exp(r.uniform(static_cast<std::uint64_t>(i), -30.0, 30.0)), -r.uniform(static_cast<std::uint64_t>(100 + i))});
  const fs::path p = scratch("csv") / "t.csv";
  emit_ratio_table(t, p.string());
  const std::string text = slurp(p);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  const RatioTable back = parse_ratio_table(p.string());
  ASSERT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.columns.size(); ++j)
      EXPECT_NEAR(back.rows[i][j], t.rows[i][j], 5e-12 * std::max(1.0, std::abs(t.rows[i][j])));  // 12 significant digits
  EXPECT_THROW(emit_ratio_table(t, "/nonexistent_dir_oscilab/x.csv"), error);
}

TEST(RatioTableCsv, SlopeFit) {
  EXPECT_NEAR(fitted_slope({1, 2, 3, 4}, {3, 5, 7, 9}), 2.0, 1e-14);
  EXPECT_NEAR(loglog_slope({8, 16, 32, 64}, {1, 2, 4, 8}), 1.0, 1e-14);
}

TEST(FieldIo, RoundTripAndHeader) {
  const Grid g = make_grid(2, 8, 1.25);
  const Field f = testutil::random_band(g, 1e9, 7);
  const fs::path p = scratch("field") / "f.field";
  write_field(f, p.string());
  const std::string raw = slurp(p);
  ASSERT_EQ(raw.size(), 4u + 4u + 4u + 2u * 4u + 8u + g.total() * 16u);
  EXPECT_EQ(raw.substr(0, 4), "OSCF");
  const Field back = read_field(p.string());
  EXPECT_TRUE(back.grid() == g);
  EXPECT_EQ(max_abs_difference(back, f), 0.0);
  std::ofstream(p, std::ios::binary) << "OSCX";
  EXPECT_THROW(read_field(p.string()), error);
}

TEST(Config, StrictParsing) {
  EXPECT_THROW(parse_config_text("{\"a\": 1,}"), config_error);
  EXPECT_THROW(parse_config_text("{\"a\": 1, \"a\": 2}"), config_error);
  EXPECT_THROW(parse_config_text("{\"a\": 1 // note\n}"), config_error);
  EXPECT_THROW(parse_config_text("[1, 2]"), config_error);
  EXPECT_NO_THROW(parse_config_text("{\"a\": {\"b\": [1, 2]}}"));
}

TEST(Config, UnknownKeysNamed) {
  EXPECT_NE(config_error_message(R"({"arity": 2, "amplitude": {"kind": "constant"}, "samplez": 3})", "decompose").find("'samplez'"),
            std::string::npos);
  EXPECT_NE(config_error_message(R"({"arity": 2, "amplitude": {"kind": "japanese_bracket", "ordr": 1}})", "decompose")
                .find("'amplitude.ordr'"),
            std::string::npos);
}

TEST(Config, MisspelledPhaseKindNamesTheKey) {
  const std::string cfg = R"({
    "grid": {"dim": 1, "points": 64, "half_width": "pi"},
    "phase": {"kind": "schroedinger"}, "amplitude": {"kind": "chi0_bessel", "s": 2},
    "family": "custom", "data": {"kind": "random_sign"}})";
  const std::string msg = config_error_message(cfg, "carleson");
  EXPECT_NE(msg.find("phase.kind"), std::string::npos) << msg;
  EXPECT_NE(msg.find("schroedinger"), std::string::npos) << msg;
}

TEST(Config, CommandMismatchAndSeed) {
  EXPECT_THROW(run_experiment("norms", parse_config_text(R"({"command": "verify"})"), scratch("cm").string(), 0), config_error);
  EXPECT_EQ(resolve_seed(parse_config_text(R"({"seed": 9})"), std::nullopt), 9u);
  EXPECT_EQ(resolve_seed(parse_config_text(R"({"seed": 9})"), std::uint64_t{4}), 4u);
  EXPECT_THROW(resolve_seed(parse_config_text(R"({"seed": -1})"), std::nullopt), config_error);
}

TEST(Config, GridAndFieldBuilders) {
  const Grid g = grid_from_config(parse_config_text(R"({"dim": 2, "points": 16, "half_width": "pi"})"), "grid");
  EXPECT_EQ(g.total(), 256u);
  EXPECT_DOUBLE_EQ(g.half_width(), std::numbers::pi);
  EXPECT_THROW(grid_from_config(parse_config_text(R"({"dim": 1, "points": 7, "half_width": 1})"), "grid"), error);
  const Grid g1 = make_grid(1, 64, std::numbers::pi);
  const Field f = field_from_config(parse_config_text(R"j({"kind": "expression", "re": "cos(x)", "scale": 2})j"), "f", g1, CounterRng(0, "x"));
  EXPECT_NEAR(f[32].real(), 2.0, 1e-15);
  EXPECT_THROW(field_from_config(parse_config_text(R"({"kind": "trig", "modes": 40})"), "f", g1, CounterRng(0, "x")), config_error);
}

TEST(Runner, VerifySuitePasses) {
  const fs::path out = scratch("verify");
  const auto rep = run_experiment("verify", parse_config_text(R"({"grid": {"dim": 1, "points": 64, "half_width": "pi"}})"), out.string(), 0);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.checks.size(), 10u);
  std::set<std::string> names;
  for (const auto& c : rep.checks) {
    EXPECT_TRUE(names.insert(c.name).second) << "duplicate check " << c.name;
    EXPECT_TRUE(c.passed) << c.name;
  }
  EXPECT_TRUE(fs::exists(out / "report.json"));
  EXPECT_TRUE(fs::exists(out / "checks.csv"));
}

TEST(Runner, SameSeedSameBytes) {
  const std::string cfg = R"({
    "seed": 5,
    "grid": {"dim": 1, "points": 128, "half_width": "pi"},
    "fields": [{"kind": "random_band", "bandwidth": 20}, {"kind": "trig", "modes": 8}],
    "norms": ["L2", "H:1:2", "bmo"],
    "maximal": {"peetre": {"a": 1, "b": 4}}})";
  const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  run_experiment("norms", parse_config_text(cfg), a.string(), 5);
  run_experiment("norms", parse_config_text(cfg), b.string(), 5);
  run_experiment("norms", parse_config_text(cfg), c.string(), 6);
  for (const char* f : {"norms.csv", "maximal.csv", "report.json"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  EXPECT_NE(slurp(a / "norms.csv"), slurp(c / "norms.csv"));
}

TEST(Runner, WorkerCountDoesNotChangeOutput) {
  const std::string cfg = R"({"family": "builtin", "draws": 2})";
  const fs::path a = scratch("thr_a"), b = scratch("thr_b");
  ::setenv("OSCILAB_THREADS", "1", 1);
  run_experiment("carleson", parse_config_text(cfg), a.string(), 1);
  ::setenv("OSCILAB_THREADS", "4", 1);
  run_experiment("carleson", parse_config_text(cfg), b.string(), 1);
  ::unsetenv("OSCILAB_THREADS");
  EXPECT_EQ(slurp(a / "carleson.csv"), slurp(b / "carleson.csv"));
  EXPECT_EQ(slurp(a / "carleson_draws.csv"), slurp(b / "carleson_draws.csv"));
}

TEST(Runner, SampleConfigsParse) {
  const char* root = std::getenv("OSCILAB_SOURCE_DIR");
  if (!root) GTEST_SKIP() << "OSCILAB_SOURCE_DIR not set";
  for (const char* name : {"verify", "norms", "decompose", "evolve", "sharpness", "carleson"}) {
    const json cfg = load_config((fs::path(root) / "configs" / (std::string(name) + ".json")).string());
    EXPECT_EQ(cfg.at("command").get<std::string>(), name);
  }
}
