#include <gtest/gtest.h>

#include "liouwave/fields.hpp"
#include "liouwave/functionals.hpp"
#include "test_util.hpp"

using namespace liouwave;

TEST(WaveState, ZeroDataHasZeroKinetic) {
  auto g = make_torus_grid(16, 16);
  const WaveState s = wave_state_new(g, {ScalarField(g)}, {ScalarField(g)});
  const FunctionalReport r = functional_report(s, CouplingConfig::sinh_gordon(4 * lwtest::kPi, 1.0));
  EXPECT_EQ(r.kinetic, 0.0);
  EXPECT_EQ(s.components(), 1u);
}

TEST(WaveState, MeanZeroVelocityUnchanged) {
  auto g = make_torus_grid(16, 16);
  const ScalarField v = lwtest::cos_x1(g);
  const WaveState s = wave_state_new(g, {ScalarField(g)}, {v});
  EXPECT_LE(lwtest::max_abs_diff(s.v[0], v), 1e-15);
  EXPECT_LE(std::abs(mean(s.v[0])), 1e-12);
}

TEST(WaveState, NonzeroMeanVelocityRejected) {
  auto g = make_torus_grid(16, 16);
  EXPECT_THROW(wave_state_new(g, {ScalarField(g)}, {ScalarField(g, 1.0)}), std::invalid_argument);
}

TEST(WaveState, RoundOffMeanRepairedAndRecorded) {
  auto g = make_torus_grid(16, 16);
  ScalarField v = lwtest::cos_x1(g);
  v += 1e-11;
  const WaveState s = wave_state_new(g, {ScalarField(g)}, {v});
  EXPECT_LE(std::abs(mean(s.v[0])), 1e-15);
  ASSERT_EQ(s.velocity_mean_removed.size(), 1u);
  EXPECT_DOUBLE_EQ(s.velocity_mean_removed[0], mean(v));
  EXPECT_NEAR(s.velocity_mean_removed[0], 1e-11, 1e-15);
}

TEST(WaveState, RejectsMismatchedInput) {
  auto g = make_torus_grid(16, 16);
  auto h = make_torus_grid(8, 8);
  EXPECT_THROW(wave_state_new(g, {ScalarField(g)}, {}), std::invalid_argument);
  EXPECT_THROW(wave_state_new(g, {ScalarField(h)}, {ScalarField(h)}), std::invalid_argument);
  ScalarField bad(g);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(wave_state_new(g, {bad}, {ScalarField(g)}), std::invalid_argument);
}

TEST(Dealias, BandLimitedUnchanged) {
  auto g = make_torus_grid(32, 32);
  const ScalarField f = random_smooth_field(g, 3, 1.0, 10);
  EXPECT_LE(lwtest::max_abs_diff(dealias(f), f), 1e-14);
}

TEST(Dealias, HighModeZeroed) {
  auto g = make_torus_grid(32, 32);
  const ScalarField f = sample(g, [](double x1, double) { return std::cos(15.0 * x1); });
  EXPECT_LE(dealias(f).max_abs(), 1e-13);
}

TEST(Dealias, Idempotent) {
  auto g = make_torus_grid(32, 32);
  ScalarField f = sample(g, [](double x1, double x2) { return std::exp(std::sin(x1) * std::cos(3 * x2)); });
  const ScalarField once = dealias(f);
  EXPECT_EQ(dealias(once).values, dealias(once).values);
  EXPECT_LE(lwtest::max_abs_diff(dealias(once), once), 1e-15);
}

TEST(RandomField, DeterministicMeanZeroAndScaled) {
  auto g = make_torus_grid(32, 32);
  const ScalarField a = random_smooth_field(g, 42, 0.7, 4);
  const ScalarField b = random_smooth_field(g, 42, 0.7, 4);
  const ScalarField c = random_smooth_field(g, 43, 0.7, 4);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  EXPECT_LE(std::abs(mean(a)), 1e-15);
  EXPECT_NEAR(a.max_abs(), 0.7, 1e-12);
}
