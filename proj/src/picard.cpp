#include "liouwave/picard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "liouwave/propagator.hpp"

namespace liouwave {

namespace {

using Slice = std::vector<Spectrum>;  // one spectrum per component

struct SpectralPath {
  std::vector<Slice> u;
  std::vector<Slice> v;
};

Slice to_slice(const std::vector<ScalarField>& fs) {
  Slice s;
  for (const auto& f : fs) s.push_back(to_spectral(f));
  return s;
}

std::vector<ScalarField> to_fields(const Slice& s) {
  std::vector<ScalarField> out;
  for (const auto& x : s) out.push_back(to_physical(x));
  return out;
}

Slice difference(const Slice& a, const Slice& b) {
  Slice d = a;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t m = 0; m < d[i].size(); ++m) d[i].modes[m] -= b[i].modes[m];
  return d;
}

double h1_norm(const Slice& s) {
  double acc = 0.0;
  for (const auto& x : s) acc += spectral_h1_semi_sq(x) + spectral_l2_sq(x);
  return std::sqrt(acc);
}

double l2_norm(const Slice& s) {
  double acc = 0.0;
  for (const auto& x : s) acc += spectral_l2_sq(x);
  return std::sqrt(acc);
}

double path_distance(const SpectralPath& a, const SpectralPath& b) {
  double d = 0.0;
  for (std::size_t n = 0; n < a.u.size(); ++n)
    d = std::max(d, h1_norm(difference(a.u[n], b.u[n])) + l2_norm(difference(a.v[n], b.v[n])));
  return d;
}

class PicardMap {
 public:
  PicardMap(const WaveState& s, const CouplingConfig& cfg, double h, int steps, bool dealias)
      : stepper_(s.grid(), h, Scheme::Frozen),
        f_(make_rhs_eval(cfg, dealias)),
        u0_(to_slice(s.u)),
        v0_(to_slice(s.v)),
        steps_(steps),
        state_(s),
        h_(h) {}

  SpectralPath linear_path() const {
    SpectralPath p;
    for (int n = 0; n <= steps_; ++n) {
      WaveState w = linear_flow(state_, n * h_);
      p.u.push_back(to_slice(w.u));
      p.v.push_back(to_slice(w.v));
    }
    return p;
  }

  // F(w): Duhamel propagation with the source sampled on w at the grid times,
  // trapezoidal in time within each step.
  SpectralPath apply(const SpectralPath& w) const {
    std::vector<Slice> forces;
    forces.reserve(w.u.size());
    for (const auto& uslice : w.u) forces.push_back(f_(to_fields(uslice)));
    SpectralPath out;
    out.u.push_back(u0_);
    out.v.push_back(v0_);
    for (int n = 0; n < steps_; ++n) {
      Slice avg = forces[n];
      for (std::size_t i = 0; i < avg.size(); ++i)
        for (std::size_t m = 0; m < avg[i].size(); ++m)
          avg[i].modes[m] = 0.5 * (forces[n][i].modes[m] + forces[n + 1][i].modes[m]);
      Slice un, vn;
      stepper_.advance(out.u.back(), out.v.back(), avg, un, vn);
      out.u.push_back(std::move(un));
      out.v.push_back(std::move(vn));
    }
    return out;
  }

  std::vector<WaveState> states(const SpectralPath& p) const {
    std::vector<WaveState> out;
    for (std::size_t n = 0; n < p.u.size(); ++n) {
      WaveState w;
      w.t = state_.t + static_cast<double>(n) * h_;
      w.u = to_fields(p.u[n]);
      w.v = to_fields(p.v[n]);
      w.velocity_mean_removed = state_.velocity_mean_removed;
      out.push_back(std::move(w));
    }
    return out;
  }

 private:
  DuhamelStepper stepper_;
  RhsEval f_;
  Slice u0_, v0_;
  int steps_;
  WaveState state_;
  double h_;
};

int step_count(double T, double h) {
  if (!(T > 0.0) || !(h > 0.0)) throw std::invalid_argument("picard: T and h must be > 0");
  const long long n = std::max<long long>(1, std::llround(T / h));
  if (n > 10'000'000) throw std::invalid_argument("picard: too many time steps");
  return static_cast<int>(n);
}

}  // namespace

double picard_radius(const WaveState& s) {
  double u = 0.0, v = 0.0;
  for (std::size_t i = 0; i < s.components(); ++i) {
    const double a = norm_h1(s.u[i]);
    const double b = norm_l2(s.v[i]);
    u += a * a;
    v += b * b;
  }
  return 3.0 * (std::sqrt(u) + std::sqrt(v));
}

PicardResult picard_solve(const WaveState& s, const CouplingConfig& cfg, double T, double h,
                          double tol, int max_iter, bool dealias) {
  cfg.validate();
  if (!(tol > 0.0) || max_iter < 1) throw std::invalid_argument("picard: need tol > 0, max_iter >= 1");
  const int steps = step_count(T, h);
  const double hh = T / steps;
  const PicardMap map(s, cfg, hh, steps, dealias);

  PicardResult res;
  res.report.R = picard_radius(s);
  res.report.T = T;
  res.report.h = hh;

  SpectralPath current = map.linear_path();
  int above_one = 0;
  for (int k = 1; k <= max_iter; ++k) {
    SpectralPath next = map.apply(current);
    const double d = path_distance(next, current);
    res.report.iterations = k;
    if (!res.report.distances.empty() && res.report.distances.back() > 0.0) {
      const double ratio = d / res.report.distances.back();
      res.report.contraction_ratios.push_back(ratio);
      above_one = ratio >= 1.0 ? above_one + 1 : 0;
    }
    res.report.distances.push_back(d);
    res.report.final_distance = d;
    current = std::move(next);
    if (d <= tol) {
      res.report.converged = true;
      break;
    }
    if (above_one >= 3) {
      res.report.diverged = true;
      res.report.note = "contraction ratio >= 1 for 3 consecutive iterations; shrink T";
      break;
    }
  }
  if (!res.report.converged && !res.report.diverged) res.report.note = "iteration limit reached";
  res.path = map.states(current);
  return res;
}

double picard_first_ratio(const WaveState& s, const CouplingConfig& cfg, double T, int steps,
                          bool dealias) {
  const PicardMap map(s, cfg, T / steps, steps, dealias);
  const SpectralPath p0 = map.linear_path();
  const SpectralPath p1 = map.apply(p0);
  const double d1 = path_distance(p1, p0);
  if (d1 == 0.0) return 0.0;
  const SpectralPath p2 = map.apply(p1);
  return path_distance(p2, p1) / d1;
}

double picard_time(const WaveState& s, const CouplingConfig& cfg, double target_ratio,
                   double trial_T, int steps) {
  if (!(target_ratio > 0.0 && target_ratio < 1.0))
    throw std::invalid_argument("picard_time: target ratio must be in (0,1)");
  if (!(trial_T > 0.0) || steps < 1) throw std::invalid_argument("picard_time: bad trial");
  const double lo_ok = 0.5 * target_ratio;
  const double aim = target_ratio / std::sqrt(2.0);  // geometric centre of the window
  auto inside = [&](double r) { return r >= lo_ok && r <= target_ratio; };

  double T = trial_T;
  double r = picard_first_ratio(s, cfg, T, steps);
  if (r == 0.0 || inside(r)) return T;

  // Bracket the centre of the window, then bisect geometrically.
  double lo = 0.0, hi = 0.0;
  if (r > aim) {
    hi = T;
    while (true) {
      T *= 0.5;
      if (T < 1e-8) throw std::runtime_error("picard_time: T underflow guard (1e-8) reached");
      r = picard_first_ratio(s, cfg, T, steps);
      if (inside(r)) return T;
      if (r <= aim) break;
      hi = T;
    }
    lo = T;
  } else {
    lo = T;
    while (true) {
      T *= 2.0;
      if (T > 1e6) throw std::runtime_error("picard_time: no admissible T below 1e6");
      r = picard_first_ratio(s, cfg, T, steps);
      if (inside(r)) return T;
      if (r > aim) break;
      lo = T;
    }
    hi = T;
  }
  for (int it = 0; it < 200; ++it) {
    T = std::sqrt(lo * hi);
    r = picard_first_ratio(s, cfg, T, steps);
    if (inside(r)) return T;
    (r > aim ? hi : lo) = T;
  }
  throw std::runtime_error("picard_time: bisection did not enter the target window");
}

double h1_l2_distance(const WaveState& a, const WaveState& b) {
  double du = 0.0, dv = 0.0;
  for (std::size_t i = 0; i < a.components(); ++i) {
    const double x = norm_h1(a.u[i] - b.u[i]);
    const double y = norm_l2(a.v[i] - b.v[i]);
    du += x * x;
    dv += y * y;
  }
  return std::sqrt(du) + std::sqrt(dv);
}

double sup_h1_distance(const std::vector<WaveState>& a, const std::vector<WaveState>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_h1_distance: path lengths differ");
  double d = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) d = std::max(d, h1_l2_distance(a[n], b[n]));
  return d;
}

}  // namespace liouwave
