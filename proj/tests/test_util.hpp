#pragma once

#include <cmath>
#include <numbers>

#include "liouwave/fields.hpp"
#include "liouwave/rhs.hpp"

namespace lwtest {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kArea = 4.0 * kPi * kPi;

inline liouwave::ScalarField cos_x1(const liouwave::GridRef& g, double amp = 1.0) {
  return liouwave::sample(g, [amp](double x1, double) { return amp * std::cos(x1); });
}

/// Band-limited random state inside the two-thirds band for kmax <= n/3.
inline liouwave::WaveState random_state(const liouwave::GridRef& g, std::size_t ncomp,
                                        std::uint64_t seed, double amp, double vamp, int kmax = 4) {
  std::vector<liouwave::ScalarField> u, v;
  for (std::size_t i = 0; i < ncomp; ++i) {
    u.push_back(liouwave::random_smooth_field(g, seed + 2 * i, amp, kmax));
    v.push_back(liouwave::random_smooth_field(g, seed + 2 * i + 1, vamp, kmax));
  }
  return liouwave::wave_state_new(g, std::move(u), std::move(v));
}

inline double max_abs_diff(const liouwave::ScalarField& a, const liouwave::ScalarField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

}  // namespace lwtest
