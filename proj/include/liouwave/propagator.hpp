#pragma once

// Spectral linear wave flow and Duhamel-type time stepping.
//
// With Ω = √−Δ acting mode-wise, one step of size h reads
//   u⁺ = cos(hΩ)u + sinc(hΩ)v + Ω⁻²(1−cos hΩ) f
//   v⁺ = −Ω sin(hΩ)u + cos(hΩ)v + sinc(hΩ) f
// where sinc(hΩ) = sin(hΩ)/Ω → h and Ω⁻²(1−cos hΩ) → h²/2 on the zero mode.
// The frozen scheme uses f = f(u); the symmetric scheme averages f(u) with
// f at the frozen predictor.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "liouwave/blowup.hpp"
#include "liouwave/fields.hpp"
#include "liouwave/functionals.hpp"
#include "liouwave/rhs.hpp"

namespace liouwave {

enum class Scheme { Frozen, Symmetric };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct StopThresholds {
  double max_abs_u = 200.0;
  double max_grad_l2 = 1e6;
  std::size_t max_steps = 10'000'000;
};

struct StepperConfig {
  double h = 1e-3;
  Scheme scheme = Scheme::Symmetric;
  bool dealias = true;
  StopThresholds stop{};
  std::size_t sample_every = 1;
  void validate() const;
};

/// Mode-wise cos(t√λ).
Spectrum apply_cos(const GridRef& grid, double t, Spectrum modes);
/// Mode-wise sin(t√λ)/√λ, with t on the zero mode.
Spectrum apply_sinc(const GridRef& grid, double t, Spectrum modes);

/// Exact homogeneous flow over time t.
WaveState linear_flow(const WaveState& s, double t);

/// Source evaluator: spectral images (zero mode already removed) of f(u).
using RhsEval = std::function<std::vector<Spectrum>(const std::vector<ScalarField>&)>;

RhsEval make_rhs_eval(const CouplingConfig& cfg, bool dealias);

/// Precomputed per-mode coefficients for a fixed step h.
class DuhamelStepper {
 public:
  DuhamelStepper(GridRef grid, double h, Scheme scheme);

  WaveState step(const WaveState& s, const RhsEval& f) const;
  double h() const { return h_; }
  Scheme scheme() const { return scheme_; }

  /// u⁺ and v⁺ for a given spectral source average (used by the Picard map).
  void advance(const std::vector<Spectrum>& u, const std::vector<Spectrum>& v,
               const std::vector<Spectrum>& f, std::vector<Spectrum>& u_out,
               std::vector<Spectrum>& v_out) const;

 private:
  GridRef grid_;
  double h_;
  Scheme scheme_;
  std::vector<double> cos_, sinc_, omega_sin_, one_minus_cos_;
};

WaveState duhamel_step(const WaveState& s, double h, const RhsEval& f,
                       Scheme scheme = Scheme::Symmetric);
WaveState duhamel_step(const WaveState& s, double h, const CouplingConfig& cfg,
                       Scheme scheme = Scheme::Symmetric, bool dealias = true);

enum class RunStatus { Completed, BlowUpAlarm, NonFinite, MaxSteps };

std::string to_string(RunStatus s);

struct EvolveOptions {
  /// Runs the blow-up monitor at every sample when set.
  std::optional<BlowupThresholds> blowup;
  /// Keep a copy of the state at each sample.
  bool keep_snapshots = false;
  /// Called after each sample is recorded; may not modify the run.
  std::function<void(const WaveState&, const FunctionalReport&)> on_sample;
  /// Called every `checkpoint_every` steps (0 disables) with the global step index.
  std::size_t checkpoint_every = 0;
  std::function<void(const WaveState&, std::size_t)> on_checkpoint;
  /// Sample times are time_origin + k*h for global step index k. Resumed runs
  /// pass the original origin and the step they restart from.
  std::optional<double> time_origin;
  std::size_t first_step = 0;
  /// Record the starting state as a sample. Resumed runs turn this off since
  /// the checkpointed state was already reported.
  bool record_initial = true;
};

struct Trajectory {
  std::vector<FunctionalReport> samples;
  std::vector<WaveState> snapshots;
  RunStatus status = RunStatus::Completed;
  std::string status_detail;
  std::optional<MonitorResult> alarm;
  WaveState final_state;
  std::size_t steps = 0;

  std::vector<double> times() const;
};

/// Steps from s.t to T (the step count is round((T − origin)/h)).
Trajectory evolve(const WaveState& s, double T, const StepperConfig& stepper,
                  const CouplingConfig& cfg, const EvolveOptions& opts = {});

}  // namespace liouwave
