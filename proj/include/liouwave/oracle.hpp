#pragma once

// Brute-force references for tests: dense-eigenbasis evolution and direct
// ball quadrature. Neither touches the FFT path.

#include <array>

#include "liouwave/fields.hpp"
#include "liouwave/rhs.hpp"

namespace liouwave::oracle {

/// Integrates u'' = Δu + P f(u) in a dense real Fourier eigenbasis with
/// classical RK4 using `substeps` steps over [s.t, T]. P keeps the two-thirds
/// band when `dealias` is set. Grids up to 16x16 only.
WaveState dense_evolve(const WaveState& s, double T, const CouplingConfig& cfg, long substeps,
                       bool dealias = true);

/// Σ density * cell area over cells within torus distance r of `center`.
double direct_ball_mass(const ScalarField& dens, std::array<double, 2> center, double r);

}  // namespace liouwave::oracle
