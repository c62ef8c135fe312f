#pragma once

// Concentration detection for the normalized measures e^{±u}/∫e^{±u} and the
// blow-up monitor built on it.

#include <array>
#include <string>
#include <vector>

#include "liouwave/fields.hpp"
#include "liouwave/rhs.hpp"

namespace liouwave {

struct ConcentrationQuery {
  int m = 1;           // max number of points
  double r = 0.5;      // ball radius
  double eps = 0.1;    // alarm when covered fraction >= 1 - eps
  double delta = 0.0;  // minimum separation of accepted points
  void validate() const;
};

struct ConcentrationReport {
  int sign = 1;        // +1: e^{u}, -1: e^{-u}
  int component = 0;   // Toda component index (0 for scalar families)
  std::vector<std::array<double, 2>> points;
  std::vector<std::array<int, 2>> grid_indices;
  /// Mass of the (original) density inside each ball B(x_l, r).
  std::vector<double> fractions;
  /// Mass of the union of the balls.
  double covered = 0.0;
  bool alarmed = false;
};

/// w e^{sign*u} / ∫ w e^{sign*u} (w = 1 when absent); integrates to 1.
ScalarField density(const ScalarField& u, Sign sign, const ScalarField* weight = nullptr);

/// Mass of `dens` inside the torus ball of radius r around every grid point,
/// by FFT convolution with the discretized ball indicator.
ScalarField ball_mass_map(const ScalarField& dens, double r);

/// Greedy peak-then-exclude search for up to q.m concentration points.
ConcentrationReport detect_concentration(const ScalarField& dens, const ConcentrationQuery& q);

/// Number of concentration points predicted by the coupling window:
/// floor(ρ/8π) for scalar families, floor(ρ/4π) for Toda, and 0 for ρ < 0.
int concentration_window(double rho, Family family);

struct BlowupThresholds {
  double grad_l2 = 1e3;
  double log_integral = 50.0;
  /// Radius, tolerance and separation for the detector; m comes from the windows.
  ConcentrationQuery query{};
  void validate() const;
};

struct MonitorResult {
  bool triggered = false;
  std::string reason;
  /// m_i per measure in report order: (e^{u}, e^{-u}) scalar; e^{u_j} Toda.
  std::vector<int> windows;
  std::vector<ConcentrationReport> reports;
  /// Index into `reports` of the first alternative met, or -1.
  int alternative = -1;
};

/// Checks the gradient and log-integral signatures; on trigger (or when
/// `force` is set) runs the concentration detector on each relevant measure.
MonitorResult blowup_monitor(const WaveState& s, const CouplingConfig& cfg,
                             const BlowupThresholds& th, bool force = false);

/// log(λ²/(1+λ² d(x,c)²)²) clamped below at −clamp, shifted to zero mean.
ScalarField bubble_field(const GridRef& grid, std::array<double, 2> center, double lam,
                         double clamp = 50.0);

}  // namespace liouwave
