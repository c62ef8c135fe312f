#pragma once

// Flat "key = value" run configuration.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "liouwave/blowup.hpp"
#include "liouwave/propagator.hpp"
#include "liouwave/rhs.hpp"

namespace liouwave {

struct InitConfig {
  std::string u = "zero";  // zero | random | eigenmode | bubble
  std::string v = "zero";  // zero | random | eigenmode
  double amplitude = 0.5;
  double v_amplitude = 0.0;
  int kmax = 4;
  int mode_k1 = 1;
  int mode_k2 = 0;
  double lambda = 8.0;
  double center1 = 3.141592653589793;
  double center2 = 3.141592653589793;
  double clamp = 50.0;
  double offset = 0.0;  // constant added to u
};

struct WeightConfig {
  double amplitude = 0.0;  // h(x) = 1 + amplitude * cos(mode * 2π x1 / L1)
  int mode = 1;
};

struct PicardConfig {
  double T = 0.05;
  double h = 1e-3;
  double tol = 1e-10;
  int max_iter = 50;
};

struct RunConfig {
  std::string scenario = "evolve";
  Family family = Family::SinhGordon;
  std::vector<double> rho;
  double a = 1.0;
  MatrixKind matrix = MatrixKind::A;
  int toda_n = 2;
  std::vector<double> matrix_entries;
  std::map<int, WeightConfig> weights;  // keyed by 1-based component/term index

  int n1 = 64, n2 = 64;
  double L1 = 6.283185307179586, L2 = 6.283185307179586;
  StepperConfig stepper{};
  double T = 1.0;
  InitConfig init{};
  bool blowup_enabled = true;
  BlowupThresholds blowup{};
  PicardConfig picard{};
  std::vector<double> scan_values;
  std::string output_dir = "liouwave_out";
  std::uint64_t seed = 0;
  bool snapshots = false;
  std::size_t checkpoint_every = 0;

  /// Every key with its effective value; defaults are marked in `defaulted`.
  std::vector<std::pair<std::string, std::string>> resolved;
  std::vector<std::string> defaulted;
  /// Effective configuration text (input plus overrides), used for checkpoints.
  std::string text;
};

/// Parses and validates. Unknown keys, bad types and violated constraints
/// throw ConfigError naming the key. `overrides` replace keys from the text.
RunConfig parse_config(const std::string& text,
                       const std::map<std::string, std::string>& overrides = {});

/// Builders used by the scenarios.
GridRef build_grid(const RunConfig& c);
CouplingConfig build_coupling(const RunConfig& c, const GridRef& grid);
WaveState build_initial_state(const RunConfig& c, const GridRef& grid);

}  // namespace liouwave
