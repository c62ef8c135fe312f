#include "liouwave/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "liouwave/error.hpp"

namespace liouwave {

namespace {

constexpr double kPi = std::numbers::pi;

// log∫ w e^{scale (u − ū)}
double centered_log(const ScalarField& u, double scale, const ScalarField* w = nullptr) {
  return log_integral_exp(u, scale, w) - scale * mean(u);
}

std::vector<Spectrum> spectra(const std::vector<ScalarField>& fs) {
  std::vector<Spectrum> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(to_spectral(f));
  return out;
}

// ½ Σ S_ij ⟨X_i, X_j⟩ where X is ∇ (grad=true) or identity.
double quadratic_form(const std::vector<Spectrum>& s, const CouplingMatrix& m, bool grad) {
  const int n = m.n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = m.energy_form(i, j);
      if (w == 0.0) continue;
      acc += w * (grad ? spectral_grad_dot(s[i], s[j]) : spectral_l2_dot(s[i], s[j]));
    }
  return 0.5 * acc;
}

void require_energy(const CouplingMatrix& m) {
  if (!m.has_energy()) throw SingularCouplingError();
}

}  // namespace

double functional_J_sg(const ScalarField& u, double rho1, double rho2) {
  double j = 0.5 * spectral_h1_semi_sq(to_spectral(u));
  if (rho1 != 0.0) j -= rho1 * centered_log(u, 1.0);
  if (rho2 != 0.0) j -= rho2 * centered_log(u, -1.0);
  return j;
}

double functional_J(const ScalarField& u, const CouplingConfig& cfg) {
  if (cfg.family == Family::Toda) throw std::invalid_argument("functional_J: scalar family expected");
  const double a = cfg.effective_a();
  double j = 0.5 * spectral_h1_semi_sq(to_spectral(u));
  if (cfg.rho1() != 0.0) j -= cfg.rho1() * centered_log(u, 1.0, cfg.weight(0));
  if (cfg.rho2() != 0.0) j -= (cfg.rho2() / a) * centered_log(u, -a, cfg.weight(1));
  return j;
}

double functional_J_toda(const std::vector<ScalarField>& u, const std::vector<double>& rho,
                         const CouplingMatrix& m, const std::vector<ScalarField>& weights) {
  require_energy(m);
  if (u.size() != static_cast<std::size_t>(m.n) || rho.size() != u.size())
    throw std::invalid_argument("functional_J_toda: component count mismatch");
  double j = quadratic_form(spectra(u), m, true);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (rho[i] == 0.0) continue;
    const ScalarField* w = i < weights.size() ? &weights[i] : nullptr;
    j -= m.d[i] * rho[i] * centered_log(u[i], 1.0, w);
  }
  return j;
}

double energy_sg(const WaveState& s, double rho1, double rho2) {
  return 0.5 * inner(s.v.front(), s.v.front()) + functional_J_sg(s.u.front(), rho1, rho2);
}

double energy_toda(const WaveState& s, const std::vector<double>& rho, const CouplingMatrix& m) {
  require_energy(m);
  return quadratic_form(spectra(s.v), m, false) + functional_J_toda(s.u, rho, m);
}

double energy(const WaveState& s, const CouplingConfig& cfg) {
  if (cfg.family == Family::Toda) {
    require_energy(*cfg.matrix);
    return quadratic_form(spectra(s.v), *cfg.matrix, false) +
           functional_J_toda(s.u, cfg.rho, *cfg.matrix, cfg.weights);
  }
  return 0.5 * inner(s.v.front(), s.v.front()) + functional_J(s.u.front(), cfg);
}

std::vector<ScalarField> grad_J(const std::vector<ScalarField>& u, const CouplingConfig& cfg) {
  const GridRef& g = u.front().grid;
  auto lap = g->lap_symbol();
  std::vector<Spectrum> neg_lap;  // spectra of −Δu_j
  for (const auto& f : u) {
    Spectrum s = to_spectral(f);
    for (std::size_t m = 0; m < s.size(); ++m) s.modes[m] *= lap[m];
    neg_lap.push_back(std::move(s));
  }
  if (cfg.family != Family::Toda) {
    ScalarField out = to_physical(neg_lap.front());
    out -= rhs_scalar(u.front(), cfg);
    return {std::move(out)};
  }
  const auto& m = *cfg.matrix;
  require_energy(m);
  const double inv_area = 1.0 / g->area();
  std::vector<ScalarField> out;
  for (int i = 0; i < m.n; ++i) {
    Spectrum acc(g);
    for (int j = 0; j < m.n; ++j) {
      const double w = m.energy_form(i, j);
      for (std::size_t k = 0; k < acc.size(); ++k) acc.modes[k] += w * neg_lap[j].modes[k];
    }
    ScalarField gi = to_physical(acc);
    if (cfg.rho[i] != 0.0) {
      auto p = normalized_exp(u[i], 1.0, cfg.weight(i));
      const double c = m.d[i] * cfg.rho[i];
      for (std::size_t k = 0; k < gi.size(); ++k)
        gi.values[k] -= c * (p.density.values[k] - inv_area);
    }
    out.push_back(std::move(gi));
  }
  return out;
}

double mt_residual(const ScalarField& u, MtFlavor flavor) {
  const double dir = 0.5 * spectral_h1_semi_sq(to_spectral(u));
  switch (flavor) {
    case MtFlavor::Standard: return dir - 8.0 * kPi * centered_log(u, 1.0);
    case MtFlavor::Sinh:
      return dir - 8.0 * kPi * (centered_log(u, 1.0) + centered_log(u, -1.0));
    case MtFlavor::Toda: break;
  }
  throw std::invalid_argument("mt_residual: use mt_residual_toda for the Toda flavor");
}

double mt_residual_toda(const std::vector<ScalarField>& u, const CouplingMatrix& m) {
  return functional_J_toda(u, std::vector<double>(u.size(), 4.0 * kPi), m);
}

double mt_residual_improved(const ScalarField& u, int k, int l, double eps) {
  if (k < 0 || l < 0 || !(eps > 0.0))
    throw std::invalid_argument("mt_residual_improved: need k, l >= 0 and eps > 0");
  const double grad_sq = spectral_h1_semi_sq(to_spectral(u));
  return 0.5 * (1.0 + eps) * grad_sq - 8.0 * k * kPi * centered_log(u, 1.0) -
         8.0 * l * kPi * centered_log(u, -1.0);
}

FunctionalReport functional_report(const WaveState& s, const CouplingConfig& cfg) {
  FunctionalReport r;
  r.t = s.t;
  const auto su = spectra(s.u);
  for (std::size_t i = 0; i < s.components(); ++i) {
    r.means.push_back(mean(s.u[i]));
    r.velocity_means.push_back(mean(s.v[i]));
    r.grad_l2 = std::max(r.grad_l2, std::sqrt(spectral_h1_semi_sq(su[i])));
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();

  if (cfg.family != Family::Toda) {
    const auto& u = s.u.front();
    const double a = cfg.effective_a();
    r.kinetic = 0.5 * inner(s.v.front(), s.v.front());
    r.dirichlet = 0.5 * spectral_h1_semi_sq(su.front());
    r.log_plus = centered_log(u, 1.0, cfg.weight(0));
    r.log_minus = centered_log(u, -a, cfg.weight(1));
    r.log_components = {r.log_plus};
    r.J = r.dirichlet;
    if (cfg.rho1() != 0.0) r.J -= cfg.rho1() * r.log_plus;
    if (cfg.rho2() != 0.0) r.J -= (cfg.rho2() / a) * r.log_minus;
    r.E = r.kinetic + r.J;
    r.mt_residual = cfg.rho2() != 0.0 ? mt_residual(u, MtFlavor::Sinh)
                                      : mt_residual(u, MtFlavor::Standard);
    return r;
  }

  const auto& m = *cfg.matrix;
  r.log_plus = -std::numeric_limits<double>::infinity();
  r.log_minus = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.components(); ++i) {
    const double lp = centered_log(s.u[i], 1.0, cfg.weight(i));
    r.log_components.push_back(lp);
    r.log_plus = std::max(r.log_plus, lp);
    r.log_minus = std::max(r.log_minus, centered_log(s.u[i], -1.0));
  }
  if (!m.has_energy()) {
    r.energy_defined = false;
    r.kinetic = r.dirichlet = r.J = r.E = r.mt_residual = nan;
    return r;
  }
  r.kinetic = quadratic_form(spectra(s.v), m, false);
  r.dirichlet = quadratic_form(su, m, true);
  r.J = r.dirichlet;
  for (std::size_t i = 0; i < s.components(); ++i)
    if (cfg.rho[i] != 0.0) r.J -= m.d[i] * cfg.rho[i] * r.log_components[i];
  r.E = r.kinetic + r.J;
  r.mt_residual = r.dirichlet;
  for (std::size_t i = 0; i < s.components(); ++i)
    r.mt_residual -= m.d[i] * 4.0 * kPi * centered_log(s.u[i], 1.0);
  return r;
}

}  // namespace liouwave
