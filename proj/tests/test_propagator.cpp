#include <gtest/gtest.h>

#include "liouwave/error.hpp"
#include "liouwave/oracle.hpp"
#include "liouwave/propagator.hpp"
#include "test_util.hpp"

using namespace liouwave;
using lwtest::kPi;

namespace {

double state_diff(const WaveState& a, const WaveState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.components(); ++i)
    d = std::max({d, lwtest::max_abs_diff(a.u[i], b.u[i]), lwtest::max_abs_diff(a.v[i], b.v[i])});
  return d;
}

}  // namespace

TEST(ApplyCos, ZeroTimeIdentityAndSincZero) {
  auto g = make_torus_grid(16, 16);
  const Spectrum s = to_spectral(random_smooth_field(g, 1, 1.0, 4) + ScalarField(g, 2.0));
  const Spectrum c = apply_cos(g, 0.0, s);
  const Spectrum z = apply_sinc(g, 0.0, s);
  for (std::size_t m = 0; m < s.size(); ++m) {
    EXPECT_EQ(c.modes[m], s.modes[m]);
    EXPECT_EQ(z.modes[m], Complex(0.0, 0.0));
  }
}

TEST(ApplyCos, UnitModeAtPiFlipsSign) {
  auto g = make_torus_grid(16, 16);
  const Spectrum c = apply_cos(g, kPi, to_spectral(lwtest::cos_x1(g)));
  EXPECT_LE(lwtest::max_abs_diff(to_physical(c), lwtest::cos_x1(g, -1.0)), 1e-15);
}

TEST(ApplySinc, ZeroModeFactorIsT) {
  auto g = make_torus_grid(16, 16);
  const Spectrum z = apply_sinc(g, 3.0, to_spectral(ScalarField(g, 1.0)));
  EXPECT_NEAR(z.modes[0].real(), 3.0, 1e-15);
}

TEST(LinearFlow, EigenmodeExact) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = wave_state_new(g, {lwtest::cos_x1(g)}, {ScalarField(g)});
  for (double t : {0.3, 2.0, 17.5}) {
    const WaveState r = linear_flow(s, t);
    EXPECT_LE(lwtest::max_abs_diff(r.u[0], lwtest::cos_x1(g, std::cos(t))), 1e-14);
    EXPECT_LE(lwtest::max_abs_diff(r.v[0], lwtest::cos_x1(g, -std::sin(t))), 1e-14);
  }
}

TEST(LinearFlow, GroupLaw) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = lwtest::random_state(g, 1, 3, 1.0, 1.0, 8);
  const WaveState a = linear_flow(linear_flow(s, 0.7), 1.9);
  const WaveState b = linear_flow(s, 2.6);
  EXPECT_LE(state_diff(a, b), 1e-12);
}

TEST(LinearFlow, SineVelocityQuarterPeriod) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = wave_state_new(g, {ScalarField(g)}, {lwtest::cos_x1(g)});
  const WaveState r = linear_flow(s, kPi / 2);
  EXPECT_LE(lwtest::max_abs_diff(r.u[0], lwtest::cos_x1(g)), 1e-15);
  EXPECT_LE(r.v[0].max_abs(), 1e-15);
}

TEST(DuhamelStep, ZeroForceIsLinearFlow) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = lwtest::random_state(g, 1, 5, 1.0, 1.0, 6);
  for (auto scheme : {Scheme::Frozen, Scheme::Symmetric}) {
    const WaveState a = duhamel_step(s, 0.05, CouplingConfig::sinh_gordon(0.0, 0.0), scheme);
    EXPECT_LE(state_diff(a, linear_flow(s, 0.05)), 1e-15);
  }
}

TEST(DuhamelStep, ZeroStateStationary) {
  auto g = make_torus_grid(16, 16);
  WaveState s = zero_state(g, 1);
  const DuhamelStepper step(g, 0.01, Scheme::Symmetric);
  const RhsEval f = make_rhs_eval(CouplingConfig::sinh_gordon(9.0, 5.0), true);
  for (int n = 0; n < 100; ++n) s = step.step(s, f);
  EXPECT_EQ(s.u[0].max_abs(), 0.0);
  EXPECT_EQ(s.v[0].max_abs(), 0.0);
}

TEST(DuhamelStep, DynamicRangeErrorPropagates) {
  auto g = make_torus_grid(16, 16);
  WaveState s = zero_state(g, 1);
  s.u[0](3, 3) = std::numeric_limits<double>::infinity();
  const RhsEval f = make_rhs_eval(CouplingConfig::sinh_gordon(1.0, 1.0), true);
  EXPECT_THROW(duhamel_step(s, 0.01, f), DynamicRangeError);
}

TEST(DuhamelStep, SecondOrderAgainstOracle) {
  auto g = make_torus_grid(16, 16);
  const WaveState s = lwtest::random_state(g, 1, 7, 0.5, 0.5, 3);
  const auto cfg = CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi);
  const WaveState ref = oracle::dense_evolve(s, 1.0, cfg, 8000);
  std::vector<double> err;
  for (double h : {0.04, 0.02, 0.01}) {
    StepperConfig sc;
    sc.h = h;
    sc.sample_every = 1000;
    err.push_back(norm_l2(evolve(s, 1.0, sc, cfg).final_state.u[0] - ref.u[0]));
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    EXPECT_GT(err[i - 1] / err[i], 3.0);
    EXPECT_LT(err[i - 1] / err[i], 5.0);
  }
}

TEST(DuhamelStep, TimeSymmetryForSmoothStates) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = lwtest::random_state(g, 1, 9, 0.5, 0.5, 4);
  const RhsEval f = make_rhs_eval(CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi), true);
  const double h = 1e-3;
  const WaveState back = duhamel_step(duhamel_step(s, h, f), -h, f);
  EXPECT_LE(state_diff(back, s), 1e-10);
}

TEST(Evolve, LinearMatchesEigenmodeAtEverySample) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = wave_state_new(g, {lwtest::cos_x1(g)}, {ScalarField(g)});
  StepperConfig sc;
  sc.h = 0.05;
  sc.sample_every = 4;
  EvolveOptions eo;
  eo.keep_snapshots = true;
  const Trajectory tr = evolve(s, 5.0, sc, CouplingConfig::sinh_gordon(0.0, 0.0), eo);
  EXPECT_EQ(tr.status, RunStatus::Completed);
  ASSERT_EQ(tr.snapshots.size(), 26u);
  for (const auto& st : tr.snapshots)
    EXPECT_LE(lwtest::max_abs_diff(st.u[0], lwtest::cos_x1(g, std::cos(st.t))), 1e-12);
}

TEST(Evolve, SampleTimesAreExactMultiples) {
  auto g = make_torus_grid(16, 16);
  StepperConfig sc;
  sc.h = 0.1;
  sc.sample_every = 3;
  const Trajectory tr = evolve(zero_state(g, 1), 1.0, sc, CouplingConfig::sinh_gordon(1.0, 1.0));
  const std::vector<double> want{0.0, 0.30000000000000004, 0.6000000000000001, 0.9, 1.0};
  ASSERT_EQ(tr.times().size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(tr.times()[i], want[i], 1e-15);
  EXPECT_EQ(tr.steps, 10u);
}

TEST(Evolve, MeanConservation) {
  auto g = make_torus_grid(32, 32);
  WaveState s = lwtest::random_state(g, 1, 11, 1.0, 0.5, 4);
  s.u[0] += 0.75;
  StepperConfig sc;
  sc.h = 5e-3;
  sc.sample_every = 20;
  const Trajectory tr = evolve(s, 5.0, sc, CouplingConfig::asymmetric_sinh(6.0, 4.0, 2.0));
  ASSERT_EQ(tr.status, RunStatus::Completed);
  for (const auto& r : tr.samples) {
    EXPECT_LE(std::abs(r.means[0] - 0.75), 1e-12);
    EXPECT_LE(std::abs(r.velocity_means[0]), 1e-12);
  }
}

TEST(Evolve, EnergyDriftSmallAndSecondOrder) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = lwtest::random_state(g, 1, 13, 1.0, 0.5, 4);
  const auto cfg = CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi);
  auto drift = [&](double h) {
    StepperConfig sc;
    sc.h = h;
    sc.sample_every = static_cast<std::size_t>(std::lround(0.01 / h));
    const Trajectory tr = evolve(s, 2.0, sc, cfg);
    double d = 0.0;
    for (const auto& r : tr.samples) d = std::max(d, std::abs(r.E - tr.samples[0].E));
    return d / (1.0 + std::abs(tr.samples[0].E));
  };
  const double d1 = drift(0.0025), d2 = drift(0.00125);
  EXPECT_LE(d1, 1e-6);
  EXPECT_GT(d1 / d2, 3.0);
  EXPECT_LT(d1 / d2, 5.0);
}

TEST(Evolve, SupercriticalBubbleRaisesAlarmWithReport) {
  auto g = make_torus_grid(64, 64);
  const ScalarField u = bubble_field(g, {kPi, kPi}, 32.0);
  const WaveState s = wave_state_new(g, {u}, {ScalarField(g)});
  StepperConfig sc;
  sc.h = 1e-3;
  EvolveOptions eo;
  BlowupThresholds th;
  th.grad_l2 = 10.0;
  eo.blowup = th;
  const Trajectory tr = evolve(s, 0.1, sc, CouplingConfig::mean_field(10 * kPi), eo);
  EXPECT_EQ(tr.status, RunStatus::BlowUpAlarm);
  ASSERT_TRUE(tr.alarm.has_value());
  ASSERT_FALSE(tr.alarm->reports.empty());
  EXPECT_EQ(tr.alarm->reports[0].points.size(), 1u);
  EXPECT_GE(tr.alarm->reports[0].covered, 0.9);
}

TEST(Evolve, StopConditionsBecomeStatuses) {
  auto g = make_torus_grid(16, 16);
  const WaveState s = lwtest::random_state(g, 1, 15, 1.0, 0.5, 4);
  StepperConfig sc;
  sc.h = 0.01;
  sc.stop.max_steps = 5;
  Trajectory tr = evolve(s, 1.0, sc, CouplingConfig::sinh_gordon(1.0, 1.0));
  EXPECT_EQ(tr.status, RunStatus::MaxSteps);
  EXPECT_EQ(tr.steps, 5u);

  sc.stop.max_steps = 1000;
  sc.stop.max_abs_u = 0.5;
  tr = evolve(s, 1.0, sc, CouplingConfig::sinh_gordon(1.0, 1.0));
  EXPECT_EQ(tr.status, RunStatus::BlowUpAlarm);
  EXPECT_EQ(to_string(tr.status), "blow-up-alarm");
}

TEST(Evolve, RejectsBadArguments) {
  auto g = make_torus_grid(16, 16);
  StepperConfig sc;
  sc.h = -1.0;
  EXPECT_THROW(evolve(zero_state(g, 1), 1.0, sc, CouplingConfig::sinh_gordon(1, 1)), std::invalid_argument);
  sc.h = 0.1;
  EXPECT_THROW(evolve(zero_state(g, 2), 1.0, sc, CouplingConfig::sinh_gordon(1, 1)), std::invalid_argument);
  EXPECT_THROW(evolve(zero_state(g, 1), 0.0, sc, CouplingConfig::sinh_gordon(1, 1)), std::invalid_argument);
}

TEST(Evolve, ResumeReproducesTrajectoryBitForBit) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = lwtest::random_state(g, 1, 17, 1.0, 0.5, 4);
  const auto cfg = CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi);
  StepperConfig sc;
  sc.h = 0.01;
  sc.sample_every = 5;
  std::optional<WaveState> mid;
  EvolveOptions eo;
  eo.checkpoint_every = 50;
  eo.on_checkpoint = [&](const WaveState& st, std::size_t k) {
    if (k == 100) mid = st;
  };
  const Trajectory full = evolve(s, 2.0, sc, cfg, eo);
  ASSERT_TRUE(mid.has_value());
  EvolveOptions ro;
  ro.time_origin = 0.0;
  ro.first_step = 100;
  ro.record_initial = false;
  const Trajectory rest = evolve(*mid, 2.0, sc, cfg, ro);
  ASSERT_EQ(rest.samples.size(), 20u);
  for (std::size_t i = 0; i < rest.samples.size(); ++i) {
    const auto& a = full.samples[full.samples.size() - rest.samples.size() + i];
    const auto& b = rest.samples[i];
    EXPECT_EQ(a.t, b.t);
    EXPECT_EQ(a.E, b.E);
    EXPECT_EQ(a.grad_l2, b.grad_l2);
  }
  EXPECT_EQ(full.final_state.u[0].values, rest.final_state.u[0].values);
}
