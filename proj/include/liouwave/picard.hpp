#pragma once

// Fixed-point (Picard) solver for the local problem: iterate the Duhamel map
// F(w) = solution of the linear wave equation with source f(w(s)) on a fixed
// time grid, starting from the homogeneous linear flow.

#include <string>
#include <vector>

#include "liouwave/fields.hpp"
#include "liouwave/rhs.hpp"

namespace liouwave {

struct PicardReport {
  double R = 0.0;
  double T = 0.0;
  double h = 0.0;
  int iterations = 0;
  /// d_k = sup_n (‖Δu(t_n)‖_{H¹} + ‖Δv(t_n)‖_{L²}) between consecutive iterates.
  std::vector<double> distances;
  /// d_{k+1} / d_k.
  std::vector<double> contraction_ratios;
  bool converged = false;
  bool diverged = false;
  double final_distance = 0.0;
  std::string note;
};

struct PicardResult {
  /// States at t0 + n h, n = 0..N.
  std::vector<WaveState> path;
  PicardReport report;
};

/// 3 (‖u_0‖_{H¹} + ‖u_1‖_{L²}), component norms combined in ℓ².
double picard_radius(const WaveState& s);

/// Iterates until d_k <= tol or max_iter; three consecutive ratios >= 1 stop
/// the iteration with converged = false.
PicardResult picard_solve(const WaveState& s, const CouplingConfig& cfg, double T, double h,
                          double tol, int max_iter, bool dealias = true);

/// First contraction ratio d_2/d_1 on [0, T] with `steps` time steps (0 for zero data).
double picard_first_ratio(const WaveState& s, const CouplingConfig& cfg, double T,
                          int steps = 32, bool dealias = true);

/// Adjusts T (starting from `trial_T`) until the first contraction ratio lies in
/// [target/2, target]. Throws when T would drop below 1e-8 or exceed 1e6.
double picard_time(const WaveState& s, const CouplingConfig& cfg, double target_ratio,
                   double trial_T = 1.0, int steps = 32);

/// sup over paths of H¹×L² distance, for comparing solvers.
double sup_h1_distance(const std::vector<WaveState>& a, const std::vector<WaveState>& b);
double h1_l2_distance(const WaveState& a, const WaveState& b);

}  // namespace liouwave
