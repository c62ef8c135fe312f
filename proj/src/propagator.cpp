#include "liouwave/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "liouwave/error.hpp"

namespace liouwave {

std::string to_string(Scheme s) { return s == Scheme::Frozen ? "frozen" : "symmetric"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "frozen") return Scheme::Frozen;
  if (s == "symmetric") return Scheme::Symmetric;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected frozen|symmetric)");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::BlowUpAlarm: return "blow-up-alarm";
    case RunStatus::NonFinite: return "non-finite";
    case RunStatus::MaxSteps: return "max-steps";
  }
  return "?";
}

void StepperConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("stepper: h must be > 0");
  if (!(stop.max_abs_u > 0.0) || !(stop.max_grad_l2 > 0.0) || stop.max_steps == 0)
    throw std::invalid_argument("stepper: stop thresholds must be positive");
  if (sample_every == 0) throw std::invalid_argument("stepper: sample_every must be >= 1");
}

namespace {

struct Coefficients {
  std::vector<double> c, s, ws, q;
};

// cos(tω), sin(tω)/ω, ω sin(tω), (1−cos tω)/ω² per stored mode.
Coefficients coefficients(const SpectralGrid& g, double t) {
  auto lap = g.lap_symbol();
  Coefficients k;
  const std::size_t n = lap.size();
  k.c.resize(n);
  k.s.resize(n);
  k.ws.resize(n);
  k.q.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (lap[m] == 0.0) {
      k.c[m] = 1.0;
      k.s[m] = t;
      k.ws[m] = 0.0;
      k.q[m] = 0.5 * t * t;
      continue;
    }
    const double w = std::sqrt(lap[m]);
    const double half = std::sin(0.5 * t * w);
    k.c[m] = std::cos(t * w);
    k.s[m] = std::sin(t * w) / w;
    k.ws[m] = w * std::sin(t * w);
    k.q[m] = 2.0 * half * half / lap[m];
  }
  return k;
}

std::vector<Spectrum> spectra(const std::vector<ScalarField>& fs) {
  std::vector<Spectrum> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(to_spectral(f));
  return out;
}

std::vector<ScalarField> physical(const std::vector<Spectrum>& ss) {
  std::vector<ScalarField> out;
  out.reserve(ss.size());
  for (const auto& s : ss) out.push_back(to_physical(s));
  return out;
}

}  // namespace

Spectrum apply_cos(const GridRef& grid, double t, Spectrum modes) {
  const auto k = coefficients(*grid, t);
  for (std::size_t m = 0; m < modes.size(); ++m) modes.modes[m] *= k.c[m];
  return modes;
}

Spectrum apply_sinc(const GridRef& grid, double t, Spectrum modes) {
  const auto k = coefficients(*grid, t);
  for (std::size_t m = 0; m < modes.size(); ++m) modes.modes[m] *= k.s[m];
  return modes;
}

WaveState linear_flow(const WaveState& s, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("linear_flow: t must be finite");
  const auto k = coefficients(*s.grid(), t);
  WaveState out = s;
  out.t = s.t + t;
  for (std::size_t i = 0; i < s.components(); ++i) {
    const Spectrum u = to_spectral(s.u[i]);
    const Spectrum v = to_spectral(s.v[i]);
    Spectrum un(u.grid), vn(u.grid);
    for (std::size_t m = 0; m < u.size(); ++m) {
      un.modes[m] = k.c[m] * u.modes[m] + k.s[m] * v.modes[m];
      vn.modes[m] = -k.ws[m] * u.modes[m] + k.c[m] * v.modes[m];
    }
    out.u[i] = to_physical(un);
    out.v[i] = to_physical(vn);
  }
  return out;
}

RhsEval make_rhs_eval(const CouplingConfig& cfg, bool dealias) {
  return [cfg, dealias](const std::vector<ScalarField>& u) { return rhs_modes(u, cfg, dealias); };
}

DuhamelStepper::DuhamelStepper(GridRef grid, double h, Scheme scheme)
    : grid_(std::move(grid)), h_(h), scheme_(scheme) {
  if (!std::isfinite(h) || h == 0.0) throw std::invalid_argument("stepper: h must be nonzero");
  auto k = coefficients(*grid_, h);
  cos_ = std::move(k.c);
  sinc_ = std::move(k.s);
  omega_sin_ = std::move(k.ws);
  one_minus_cos_ = std::move(k.q);
}

void DuhamelStepper::advance(const std::vector<Spectrum>& u, const std::vector<Spectrum>& v,
                             const std::vector<Spectrum>& f, std::vector<Spectrum>& u_out,
                             std::vector<Spectrum>& v_out) const {
  u_out.assign(u.size(), Spectrum(grid_));
  v_out.assign(u.size(), Spectrum(grid_));
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto& uh = u[i].modes;
    const auto& vh = v[i].modes;
    const auto& fh = f[i].modes;
    auto& uo = u_out[i].modes;
    auto& vo = v_out[i].modes;
    for (std::size_t m = 0; m < uh.size(); ++m) {
      uo[m] = cos_[m] * uh[m] + sinc_[m] * vh[m] + one_minus_cos_[m] * fh[m];
      vo[m] = -omega_sin_[m] * uh[m] + cos_[m] * vh[m] + sinc_[m] * fh[m];
    }
  }
}

WaveState DuhamelStepper::step(const WaveState& s, const RhsEval& f) const {
  auto force = f(s.u);
  const auto uh = spectra(s.u);
  const auto vh = spectra(s.v);
  std::vector<Spectrum> un, vn;
  advance(uh, vh, force, un, vn);
  if (scheme_ == Scheme::Symmetric) {
    const auto f1 = f(physical(un));
    for (std::size_t i = 0; i < force.size(); ++i)
      for (std::size_t m = 0; m < force[i].size(); ++m)
        force[i].modes[m] = 0.5 * (force[i].modes[m] + f1[i].modes[m]);
    advance(uh, vh, force, un, vn);
  }
  WaveState out;
  out.t = s.t + h_;
  out.u = physical(un);
  out.v = physical(vn);
  out.velocity_mean_removed = s.velocity_mean_removed;
  return out;
}

WaveState duhamel_step(const WaveState& s, double h, const RhsEval& f, Scheme scheme) {
  return DuhamelStepper(s.grid(), h, scheme).step(s, f);
}

WaveState duhamel_step(const WaveState& s, double h, const CouplingConfig& cfg, Scheme scheme,
                       bool dealias) {
  return duhamel_step(s, h, make_rhs_eval(cfg, dealias), scheme);
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(samples.size());
  for (const auto& r : samples) t.push_back(r.t);
  return t;
}

namespace {

bool finite_state(const WaveState& s, double& max_abs_u) {
  max_abs_u = 0.0;
  for (std::size_t i = 0; i < s.components(); ++i) {
    if (!s.u[i].all_finite() || !s.v[i].all_finite()) return false;
    max_abs_u = std::max(max_abs_u, s.u[i].max_abs());
  }
  return true;
}

}  // namespace

Trajectory evolve(const WaveState& s0, double T, const StepperConfig& stepper,
                  const CouplingConfig& cfg, const EvolveOptions& opts) {
  stepper.validate();
  cfg.validate();
  if (s0.components() != cfg.components())
    throw std::invalid_argument("evolve: state components do not match coupling");
  if (!(T > s0.t)) throw std::invalid_argument("evolve: T must exceed the state time");
  if (opts.blowup) opts.blowup->validate();

  const double origin = opts.time_origin.value_or(s0.t);
  const long long total = std::llround((T - origin) / stepper.h);
  std::size_t k = opts.first_step;
  const DuhamelStepper step(s0.grid(), stepper.h, stepper.scheme);
  const RhsEval f = make_rhs_eval(cfg, stepper.dealias);
  const BlowupThresholds fallback_thresholds =
      opts.blowup.value_or(BlowupThresholds{});

  Trajectory traj;
  WaveState state = s0;

  // Returns false when the run must stop.
  auto record = [&](const WaveState& st) -> bool {
    FunctionalReport rep = functional_report(st, cfg);
    traj.samples.push_back(rep);
    if (opts.keep_snapshots) traj.snapshots.push_back(st);
    if (opts.on_sample) opts.on_sample(st, rep);
    if (rep.grad_l2 > stepper.stop.max_grad_l2) {
      traj.status = RunStatus::BlowUpAlarm;
      traj.status_detail = "gradient stop threshold exceeded";
      traj.alarm = blowup_monitor(st, cfg, fallback_thresholds, true);
      return false;
    }
    if (opts.blowup) {
      MonitorResult mr = blowup_monitor(st, cfg, *opts.blowup);
      if (mr.triggered) {
        traj.status = RunStatus::BlowUpAlarm;
        traj.status_detail = mr.reason;
        traj.alarm = std::move(mr);
        return false;
      }
    }
    return true;
  };

  bool running = opts.record_initial ? record(state) : true;
  std::size_t taken = 0;
  while (running && static_cast<long long>(k) < total) {
    if (taken >= stepper.stop.max_steps) {
      traj.status = RunStatus::MaxSteps;
      traj.status_detail = "step limit reached";
      break;
    }
    WaveState next;
    try {
      next = step.step(state, f);
    } catch (const DynamicRangeError& e) {
      traj.status = RunStatus::NonFinite;
      traj.status_detail = e.what();
      break;
    }
    ++k;
    ++taken;
    next.t = origin + static_cast<double>(k) * stepper.h;
    double max_u = 0.0;
    if (!finite_state(next, max_u)) {
      traj.status = RunStatus::NonFinite;
      traj.status_detail = "non-finite values after step";
      break;
    }
    state = std::move(next);
    if (max_u > stepper.stop.max_abs_u) {
      FunctionalReport rep = functional_report(state, cfg);
      traj.samples.push_back(rep);
      if (opts.keep_snapshots) traj.snapshots.push_back(state);
      if (opts.on_sample) opts.on_sample(state, rep);
      traj.status = RunStatus::BlowUpAlarm;
      traj.status_detail = "max |u| stop threshold exceeded";
      traj.alarm = blowup_monitor(state, cfg, fallback_thresholds, true);
      break;
    }
    if (k % stepper.sample_every == 0 || static_cast<long long>(k) == total)
      running = record(state);
    if (opts.checkpoint_every > 0 && k % opts.checkpoint_every == 0 && opts.on_checkpoint)
      opts.on_checkpoint(state, k);
  }
  traj.steps = taken;
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace liouwave
