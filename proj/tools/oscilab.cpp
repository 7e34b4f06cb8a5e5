// oscilab <command> --config <file> [--out <dir>] [--seed <int>]
//
// Exit status: 0 success, 1 a hard check failed, 2 usage or config error,
// 3 computation over budget, 4 any other failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oscilab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Oscillatory integral operator laboratory"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  for (const char* name : {"verify", "norms", "decompose", "evolve", "sharpness", "carleson"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "overrides the config seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const oscilab::json cfg = oscilab::load_config(config_path);
    const auto report = oscilab::run_experiment(command, cfg, out_dir, oscilab::resolve_seed(cfg, seed));
    for (const auto& c : report.checks)
      std::cout << (c.skipped ? "SKIP " : (c.passed ? "PASS " : "FAIL ")) << c.name << "  value=" << c.value
                << "  threshold=" << c.threshold << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
    std::cout << command << ": " << (report.ok() ? "ok" : "failed") << ", outputs in " << out_dir << "\n";
    return report.ok() ? 0 : 1;
  } catch (const oscilab::config_error& e) {
    std::cerr << "oscilab: config error: " << e.what() << "\n";
    return 2;
  } catch (const oscilab::budget_error& e) {
    std::cerr << "oscilab: over budget: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "oscilab: " << e.what() << "\n";
    return 4;
  }
}
