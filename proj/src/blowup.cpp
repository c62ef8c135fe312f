#include "liouwave/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace liouwave {

namespace {

// Ball membership shared by the map and the union mass.
bool within(double d, double r) { return d <= r * (1.0 + 1e-12); }

ScalarField ball_indicator(const GridRef& g, double r) {
  return sample(g, [&](double x1, double x2) {
    return within(g->torus_distance(x1, x2, 0.0, 0.0), r) ? 1.0 : 0.0;
  });
}

double union_mass(const ScalarField& dens, const std::vector<std::array<double, 2>>& pts,
                  double r) {
  const auto& g = *dens.grid;
  double acc = 0.0;
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2) {
      const double x1 = g.x1(i1), x2 = g.x2(i2);
      for (const auto& p : pts)
        if (within(g.torus_distance(x1, x2, p[0], p[1]), r)) {
          acc += dens(i1, i2);
          break;
        }
    }
  return acc * g.cell_area();
}

}  // namespace

void ConcentrationQuery::validate() const {
  if (m < 1) throw std::invalid_argument("concentration query: m must be >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("concentration query: r must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("concentration query: eps in (0,1)");
  if (!(delta >= 0.0)) throw std::invalid_argument("concentration query: delta must be >= 0");
}

void BlowupThresholds::validate() const {
  if (!(grad_l2 > 0.0) || !(log_integral > 0.0))
    throw std::invalid_argument("blow-up thresholds must be positive");
  ConcentrationQuery q = query;
  q.m = 1;
  q.validate();
}

ScalarField density(const ScalarField& u, Sign sign, const ScalarField* weight) {
  return normalized_exp(u, static_cast<double>(static_cast<int>(sign)), weight).density;
}

ScalarField ball_mass_map(const ScalarField& dens, double r) {
  const GridRef& g = dens.grid;
  if (!(r > 0.0) || r >= 0.5 * std::min(g->L1(), g->L2()))
    throw std::invalid_argument("ball_mass_map: radius must be in (0, min(L1,L2)/2)");
  Spectrum d = to_spectral(dens);
  const Spectrum k = to_spectral(ball_indicator(g, r));
  for (std::size_t m = 0; m < d.size(); ++m) d.modes[m] *= k.modes[m];
  ScalarField out = to_physical(d);
  // Discrete convolution: area * IFFT(d̂ k̂) with our 1/N forward normalization.
  const double area = g->area();
  for (double& x : out.values) x = std::max(0.0, x * area);
  return out;
}

ConcentrationReport detect_concentration(const ScalarField& dens, const ConcentrationQuery& q) {
  q.validate();
  const auto& g = *dens.grid;
  ConcentrationReport rep;
  ScalarField work = dens;
  const double exclusion = std::max(q.delta, 2.0 * q.r);

  for (int l = 0; l < q.m; ++l) {
    const ScalarField map = ball_mass_map(work, q.r);
    double best = 0.0;
    int b1 = -1, b2 = -1;
    for (int i1 = 0; i1 < g.n1(); ++i1)
      for (int i2 = 0; i2 < g.n2(); ++i2) {
        const double val = map(i1, i2);
        if (!(val > best)) continue;
        bool separated = true;
        for (const auto& p : rep.points)
          if (g.torus_distance(g.x1(i1), g.x2(i2), p[0], p[1]) < q.delta) {
            separated = false;
            break;
          }
        if (!separated) continue;
        best = val;
        b1 = i1;
        b2 = i2;
      }
    if (b1 < 0) break;
    const std::array<double, 2> p{g.x1(b1), g.x2(b2)};
    rep.points.push_back(p);
    rep.grid_indices.push_back({b1, b2});
    for (int i1 = 0; i1 < g.n1(); ++i1)
      for (int i2 = 0; i2 < g.n2(); ++i2)
        if (g.torus_distance(g.x1(i1), g.x2(i2), p[0], p[1]) <= exclusion) work(i1, i2) = 0.0;
  }

  const double total = integrate(dens);
  for (const auto& p : rep.points) rep.fractions.push_back(union_mass(dens, {p}, q.r) / total);
  rep.covered = rep.points.empty() ? 0.0 : union_mass(dens, rep.points, q.r) / total;
  rep.alarmed = rep.covered >= 1.0 - q.eps;
  return rep;
}

int concentration_window(double rho, Family family) {
  const double unit = (family == Family::Toda ? 4.0 : 8.0) * std::numbers::pi;
  if (!(rho > 0.0)) return 0;
  return static_cast<int>(std::floor(rho / unit));
}

MonitorResult blowup_monitor(const WaveState& s, const CouplingConfig& cfg,
                             const BlowupThresholds& th, bool force) {
  th.validate();
  MonitorResult res;
  const double a = cfg.effective_a();

  struct Measure {
    std::size_t comp;
    int sign;
    double rho;
  };
  std::vector<Measure> measures;
  if (cfg.family == Family::Toda) {
    for (std::size_t j = 0; j < s.components(); ++j) measures.push_back({j, 1, cfg.rho[j]});
  } else {
    measures.push_back({0, 1, cfg.rho1()});
    measures.push_back({0, -1, cfg.rho2()});
  }

  for (std::size_t j = 0; j < s.components() && !res.triggered; ++j) {
    const double grad = seminorm_h1(s.u[j]);
    if (grad >= th.grad_l2) {
      res.triggered = true;
      res.reason = "gradient L2 norm " + std::to_string(grad) + " of component " +
                   std::to_string(j + 1) + " exceeds threshold";
    }
  }
  for (const auto& ms : measures) {
    if (res.triggered) break;
    const double scale = ms.sign > 0 ? 1.0 : -a;
    const double li = log_integral_exp(s.u[ms.comp], scale, nullptr);
    if (li >= th.log_integral) {
      res.triggered = true;
      res.reason = std::string("log integral of e^{") + (ms.sign > 0 ? "+" : "-") + "u} = " +
                   std::to_string(li) + " exceeds threshold";
    }
  }
  if (!res.triggered && !force) return res;
  if (!res.triggered) res.reason = "forced";
  res.triggered = true;

  for (const auto& ms : measures) {
    const int window = concentration_window(ms.rho, cfg.family);
    res.windows.push_back(window);
    if (window < 1) continue;
    ConcentrationQuery q = th.query;
    q.m = window;
    const double scale = ms.sign > 0 ? 1.0 : -a;
    const ScalarField dens = normalized_exp(s.u[ms.comp], scale, nullptr).density;
    ConcentrationReport rep = detect_concentration(dens, q);
    rep.sign = ms.sign;
    rep.component = static_cast<int>(ms.comp);
    if (rep.alarmed && res.alternative < 0) res.alternative = static_cast<int>(res.reports.size());
    res.reports.push_back(std::move(rep));
  }
  return res;
}

ScalarField bubble_field(const GridRef& grid, std::array<double, 2> center, double lam,
                         double clamp) {
  if (!(lam >= 1.0)) throw std::invalid_argument("bubble_field: lambda must be >= 1");
  ScalarField u = sample(grid, [&](double x1, double x2) {
    const double d = grid->torus_distance(x1, x2, center[0], center[1]);
    const double q = 1.0 + lam * lam * d * d;
    return std::max(std::log(lam * lam / (q * q)), -clamp);
  });
  u += -mean(u);
  return u;
}

}  // namespace liouwave
