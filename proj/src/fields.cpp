#include "liouwave/fields.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace liouwave {

WaveState wave_state_new(const GridRef& grid, std::vector<ScalarField> u0,
                         std::vector<ScalarField> u1, double t0) {
  if (u0.empty() || u0.size() != u1.size())
    throw std::invalid_argument("wave_state_new: need matching nonempty u0/u1 component lists");
  if (!std::isfinite(t0)) throw std::invalid_argument("wave_state_new: t0 must be finite");
  WaveState s;
  s.t = t0;
  for (std::size_t i = 0; i < u0.size(); ++i) {
    for (const ScalarField* f : {&u0[i], &u1[i]}) {
      if (f->grid != grid && (f->grid->n1() != grid->n1() || f->grid->n2() != grid->n2() ||
                              f->grid->L1() != grid->L1() || f->grid->L2() != grid->L2()))
        throw std::invalid_argument("wave_state_new: component grid mismatch");
      if (f->size() != grid->points())
        throw std::invalid_argument("wave_state_new: component shape mismatch");
      if (!f->all_finite()) throw std::invalid_argument("wave_state_new: non-finite data");
    }
    ScalarField vel(grid, std::move(u1[i].values));
    const double m = mean(vel);
    const double limit = 1e-8 * norm_l2(vel) + 1e-12;
    if (std::abs(m) > limit)
      throw std::invalid_argument("wave_state_new: nonzero-mean velocity in component " +
                                  std::to_string(i + 1) + " (mean " + std::to_string(m) + ")");
    vel += -m;
    s.velocity_mean_removed.push_back(m);
    s.u.emplace_back(grid, std::move(u0[i].values));
    s.v.push_back(std::move(vel));
  }
  return s;
}

WaveState zero_state(const GridRef& grid, std::size_t ncomp, double t0) {
  std::vector<ScalarField> a(ncomp, ScalarField(grid));
  return wave_state_new(grid, a, a, t0);
}

Spectrum dealias(Spectrum s) {
  auto mask = s.grid->dealias_mask();
  for (std::size_t m = 0; m < s.modes.size(); ++m)
    if (!mask[m]) s.modes[m] = 0.0;
  return s;
}

ScalarField dealias(const ScalarField& f) { return to_physical(dealias(to_spectral(f))); }

ScalarField random_smooth_field(const GridRef& grid, std::uint64_t seed, double amplitude,
                                int kmax) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Spectrum s(grid);
  // Fill coefficients in a fixed order over (k1, k2>=0), then Hermitian-complete
  // the self-conjugate k2 = 0 column.
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    for (int k2 = 0; k2 <= kmax; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      if (k2 == 0 && k1 < 0) continue;
      const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2);
      Complex c(gauss(rng) * decay, gauss(rng) * decay);
      const int i = (k1 + grid->n1()) % grid->n1();
      s.modes[static_cast<std::size_t>(i) * grid->half2() + k2] = c;
      if (k2 == 0) {
        const int ineg = (grid->n1() - i) % grid->n1();
        s.modes[static_cast<std::size_t>(ineg) * grid->half2()] = std::conj(c);
      }
    }
  }
  ScalarField f = to_physical(s);
  const double scale = f.max_abs();
  if (scale > 0.0) f *= amplitude / scale;
  return f;
}

ScalarField bump_field(const GridRef& grid, double c1, double c2, double width,
                       double amplitude) {
  return sample(grid, [&](double x1, double x2) {
    const double d = grid->torus_distance(x1, x2, c1, c2);
    return amplitude * std::exp(-(d / width) * (d / width));
  });
}

}  // namespace liouwave
