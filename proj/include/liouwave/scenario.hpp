#pragma once

// Batch scenarios behind the command line: evolve, picard-verify,
// functional-scan, bubble-probe and check.

#include <optional>
#include <string>
#include <vector>

#include "liouwave/config.hpp"
#include "liouwave/propagator.hpp"

namespace liouwave {

/// timeseries.csv header, fixed column order.
const std::vector<std::string>& csv_columns();
std::string csv_header();

/// One CSV row. `e0` is the reference energy for the drift column.
std::string csv_row(const WaveState& s, const FunctionalReport& rep, const CouplingConfig& cfg,
                    double e0, const ConcentrationQuery& q, const std::string& status);

/// Covered fractions reported in the conc_fraction_plus/minus columns: the
/// detector output (m from the coupling window, at least 1) on e^{u} and
/// e^{-u}, maximised over components for Toda.
std::pair<double, double> concentration_fractions(const WaveState& s, const CouplingConfig& cfg,
                                                  const ConcentrationQuery& q);

struct RunOutcome {
  std::string scenario;
  std::string status;   // run status, or pass/fail for check
  std::string out_dir;
  int exit_code = 0;
};

/// Executes the configured scenario and writes its files under `out_dir`
/// (the config's output directory when empty).
RunOutcome run_scenario(const RunConfig& c, const std::string& out_dir = "");

/// Continues an evolve run from checkpoint_<k>.lwav and its .meta sidecar.
/// Rows strictly after the checkpoint time are written to `out_dir`
/// (default: <checkpoint dir>/resumed).
RunOutcome resume_run(const std::string& checkpoint_path, const std::string& out_dir = "");

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Reduced-size invariant suite run by `liouwave check`.
std::vector<CheckItem> run_check_suite();

}  // namespace liouwave
