#pragma once

#include <cstdint>
#include <vector>

#include "liouwave/surface.hpp"

namespace liouwave {

/// One time slice (u, ∂t u) of an n-component wave system.
struct WaveState {
  double t = 0.0;
  std::vector<ScalarField> u;
  std::vector<ScalarField> v;
  /// Velocity means subtracted by wave_state_new (round-off repair).
  std::vector<double> velocity_mean_removed;

  std::size_t components() const { return u.size(); }
  const GridRef& grid() const { return u.front().grid; }
};

/// Builds a state, forcing mean(v_i) = 0. A velocity mean larger than
/// 1e-8 * ||u1_i||_2 + 1e-12 is rejected; smaller ones are subtracted.
WaveState wave_state_new(const GridRef& grid, std::vector<ScalarField> u0,
                         std::vector<ScalarField> u1, double t0 = 0.0);

/// Zero state with `ncomp` components.
WaveState zero_state(const GridRef& grid, std::size_t ncomp, double t0 = 0.0);

/// Zeroes every mode outside the two-thirds band. Idempotent.
Spectrum dealias(Spectrum s);
ScalarField dealias(const ScalarField& f);

/// Seeded band-limited random field: sum of Fourier modes with
/// max(|k1|,|k2|) <= kmax and Gaussian coefficients decaying like
/// 1/(1+|k|^2), rescaled to max|f - mean| = amplitude. Mean zero.
ScalarField random_smooth_field(const GridRef& grid, std::uint64_t seed,
                                double amplitude, int kmax);

/// Smooth bump: amplitude * exp(-(d/width)^2) around `center`, d the torus distance.
ScalarField bump_field(const GridRef& grid, double c1, double c2, double width,
                       double amplitude);

}  // namespace liouwave
