#include <cmath>
#include <numbers>
#include <sstream>

#include "liouwave/oracle.hpp"
#include "liouwave/picard.hpp"
#include "liouwave/scenario.hpp"
#include "liouwave/snapshot.hpp"

namespace liouwave {

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double x) {
  std::ostringstream o;
  o.precision(3);
  o << std::scientific << x;
  return o.str();
}

WaveState random_state(const GridRef& g, std::size_t ncomp, std::uint64_t seed, double amp) {
  std::vector<ScalarField> u, v;
  for (std::size_t i = 0; i < ncomp; ++i) {
    u.push_back(random_smooth_field(g, seed + 2 * i, amp, 3));
    v.push_back(random_smooth_field(g, seed + 2 * i + 1, 0.5 * amp, 3));
  }
  return wave_state_new(g, std::move(u), std::move(v));
}

double max_drift(const Trajectory& tr) {
  const double e0 = tr.samples.front().E;
  double d = 0.0;
  for (const auto& s : tr.samples) d = std::max(d, std::abs(s.E - e0) / (1.0 + std::abs(e0)));
  return d;
}

CheckItem linear_exactness() {
  auto g = make_torus_grid(32, 32);
  auto u0 = sample(g, [](double x1, double) { return std::cos(x1); });
  WaveState s = wave_state_new(g, {u0}, {ScalarField(g)});
  StepperConfig sc;
  sc.h = 0.01;
  sc.sample_every = 10;
  EvolveOptions eo;
  eo.keep_snapshots = true;
  const Trajectory tr = evolve(s, 2.0, sc, CouplingConfig::sinh_gordon(0.0, 0.0), eo);
  double err = 0.0;
  for (const auto& st : tr.snapshots) {
    const auto exact = sample(g, [&](double x1, double) { return std::cos(st.t) * std::cos(x1); });
    err = std::max(err, norm_l2(st.u[0] - exact) / norm_l2(u0));
  }
  return {"linear eigenmode exactness", err <= 1e-12, "rel err " + sci(err)};
}

CheckItem mean_and_energy(const std::string& name, const CouplingConfig& cfg, std::size_t ncomp) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = random_state(g, ncomp, 11, 0.5);
  StepperConfig sc;
  sc.h = 1e-3;
  sc.sample_every = 50;
  const Trajectory tr = evolve(s, 1.0, sc, cfg);
  double mean_dev = 0.0;
  for (const auto& r : tr.samples)
    for (std::size_t i = 0; i < ncomp; ++i)
      mean_dev = std::max({mean_dev, std::abs(r.means[i] - tr.samples.front().means[i]),
                           std::abs(r.velocity_means[i])});
  const double drift = max_drift(tr);
  const bool ok = tr.status == RunStatus::Completed && mean_dev <= 1e-12 && drift <= 1e-6;
  return {name, ok, "mean dev " + sci(mean_dev) + ", energy drift " + sci(drift)};
}

CheckItem quadrature() {
  auto g = make_torus_grid(64, 64);
  const double I = integrate(sample(g, [](double x1, double) { return std::exp(std::cos(x1)); }));
  const double exact = 4.0 * kPi * kPi * std::cyl_bessel_i(0.0, 1.0);
  const double rel = std::abs(I - exact) / exact;
  return {"quadrature of exp(cos x1)", rel <= 1e-10, "rel err " + sci(rel)};
}

CheckItem functional_identities() {
  auto g = make_torus_grid(32, 32);
  const auto cfg = CouplingConfig::sinh_gordon(4 * kPi, 2 * kPi);
  const double j0 = functional_J(ScalarField(g), cfg);
  const double exact = -(6 * kPi) * std::log(4 * kPi * kPi);
  const bool ok_j0 = std::abs(j0 - exact) <= 1e-12 * std::abs(exact);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const FunctionalReport r = functional_report(random_state(g, 1, 100 + 2 * k, 1.0), cfg);
    worst = std::max(worst, std::abs(r.E - (r.kinetic + r.J)) / (1.0 + std::abs(r.E)));
  }
  return {"J(0) and E = kinetic + J", ok_j0 && worst <= 1e-10,
          "J(0) err " + sci(std::abs(j0 - exact)) + ", identity " + sci(worst)};
}

CheckItem picard_check() {
  auto g = make_torus_grid(32, 32);
  const WaveState s = random_state(g, 1, 7, 0.2);
  const auto cfg = CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi);
  const PicardResult pr = picard_solve(s, cfg, 0.05, 1e-3, 1e-10, 50);
  bool ratios_ok = true;
  for (double r : pr.report.contraction_ratios) ratios_ok = ratios_ok && r < 1.0;
  return {"Picard contraction", pr.report.converged && ratios_ok,
          std::to_string(pr.report.iterations) + " iterations"};
}

CheckItem oracle_check() {
  auto g = make_torus_grid(16, 16);
  std::vector<ScalarField> u{dealias(random_smooth_field(g, 3, 0.3, 3))};
  std::vector<ScalarField> v{dealias(random_smooth_field(g, 4, 0.2, 3))};
  const WaveState s = wave_state_new(g, u, v);
  const auto cfg = CouplingConfig::sinh_gordon(kPi, kPi);
  StepperConfig sc;
  sc.h = 1e-3;
  sc.sample_every = 100;
  const Trajectory tr = evolve(s, 0.2, sc, cfg);
  const WaveState ref = oracle::dense_evolve(s, 0.2, cfg, 2000);
  const double d = norm_l2(tr.final_state.u[0] - ref.u[0]);
  return {"dense eigenbasis oracle", d <= 1e-8, "L2 diff " + sci(d)};
}

CheckItem snapshot_check() {
  auto g = make_torus_grid(16, 24, 3.0, 5.0);
  WaveState s = random_state(g, 2, 21, 1.0);
  s.t = 0.125;
  const WaveState r = decode_snapshot(encode_snapshot(s));
  bool same = r.t == s.t && r.components() == 2;
  for (std::size_t i = 0; same && i < 2; ++i) same = r.u[i].values == s.u[i].values && r.v[i].values == s.v[i].values;
  return {"snapshot round trip", same, ""};
}

CheckItem windows_and_detector() {
  const bool windows = concentration_window(10 * kPi, Family::SinhGordon) == 1 &&
                       concentration_window(17 * kPi, Family::SinhGordon) == 2 &&
                       concentration_window(9 * kPi, Family::Toda) == 2;
  auto g = make_torus_grid(64, 64);
  const ScalarField u = bubble_field(g, {kPi, kPi}, 16.0);
  ConcentrationQuery q;
  const ConcentrationReport rep = detect_concentration(density(u, Sign::Plus), q);
  const double err = rep.points.empty() ? 1e9 : g->torus_distance(rep.points[0][0], rep.points[0][1], kPi, kPi);
  const bool ok = windows && rep.covered >= 0.9 && err <= g->L1() / g->n1();
  return {"windows and bubble detector", ok, "covered " + sci(rep.covered)};
}

CheckItem jensen_check() {
  auto g = make_torus_grid(32, 32);
  const double floor = std::log(4 * kPi * kPi);
  bool ok = true;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const ScalarField u = random_smooth_field(g, 300 + k, 2.0, 4);
    ok = ok && log_integral_exp(u - ScalarField(g, mean(u)), 1.0) >= floor - 1e-12 &&
         log_integral_exp(u - ScalarField(g, mean(u)), -1.0) >= floor - 1e-12;
  }
  return {"discrete Jensen bound", ok, ""};
}

}  // namespace

std::vector<CheckItem> run_check_suite() {
  std::vector<CheckItem> out;
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("error: ") + e.what()});
    }
  };
  guarded("linear eigenmode exactness", linear_exactness);
  guarded("sinh-Gordon mean and energy", [] {
    return mean_and_energy("sinh-Gordon mean and energy", CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi), 1);
  });
  guarded("Toda A2 mean and energy", [] {
    return mean_and_energy("Toda A2 mean and energy",
                           CouplingConfig::toda({3 * kPi, 3 * kPi}, cartan_matrix(MatrixKind::A, 2)), 2);
  });
  guarded("quadrature of exp(cos x1)", quadrature);
  guarded("J(0) and E = kinetic + J", functional_identities);
  guarded("Picard contraction", picard_check);
  guarded("dense eigenbasis oracle", oracle_check);
  guarded("snapshot round trip", snapshot_check);
  guarded("windows and bubble detector", windows_and_detector);
  guarded("discrete Jensen bound", jensen_check);
  return out;
}

}  // namespace liouwave
