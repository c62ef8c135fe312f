// liouwave command line front end.
//
//   liouwave run <config> [--out DIR] [--seed N]
//   liouwave check
//   liouwave resume <checkpoint> [--out DIR]
//
// Exit codes: 0 orderly completion (alarms included), 1 failed check suite,
// 2 configuration error, 3 I/O or snapshot error, 4 internal error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "liouwave/error.hpp"
#include "liouwave/scenario.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_outcome(const liouwave::RunOutcome& r) {
  std::cout << "scenario " << r.scenario << ": " << r.status;
  if (!r.out_dir.empty()) std::cout << " -> " << r.out_dir;
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liouwave: spectral solver for Liouville-type wave equations on the torus"};
  app.require_subcommand(1);

  std::string config_path, out_dir, checkpoint;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "run the scenario described by a config file");
  run->add_option("config", config_path, "config file (key = value lines)")->required();
  run->add_option("--out", out_dir, "output directory (overrides the 'output' key)");
  run->add_option("--seed", seed, "seed for random initial data (overrides the 'seed' key)");

  app.add_subcommand("check", "run the reduced invariant suite and print pass/fail");

  auto* resume = app.add_subcommand("resume", "continue an evolve run from a checkpoint");
  resume->add_option("checkpoint", checkpoint, "checkpoint_<k>.lwav file")->required();
  resume->add_option("--out", out_dir, "output directory (default <checkpoint dir>/resumed)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      std::map<std::string, std::string> overrides;
      if (seed) overrides["seed"] = std::to_string(*seed);
      if (!out_dir.empty()) overrides["output"] = out_dir;
      const liouwave::RunConfig cfg = liouwave::parse_config(slurp(config_path), overrides);
      const auto r = liouwave::run_scenario(cfg);
      print_outcome(r);
      return r.exit_code;
    }
    if (resume->parsed()) {
      const auto r = liouwave::resume_run(checkpoint, out_dir);
      print_outcome(r);
      return r.exit_code;
    }
    bool ok = true;
    for (const auto& item : liouwave::run_check_suite()) {
      std::cout << (item.pass ? "PASS " : "FAIL ") << item.name;
      if (!item.detail.empty()) std::cout << "  (" << item.detail << ")";
      std::cout << "\n";
      ok = ok && item.pass;
    }
    std::cout << (ok ? "all checks passed" : "some checks failed") << "\n";
    return ok ? 0 : 1;
  } catch (const liouwave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const liouwave::SnapshotError& e) {
    std::cerr << "snapshot error: " << e.what() << "\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
