#include <gtest/gtest.h>

#include "liouwave/picard.hpp"
#include "liouwave/propagator.hpp"
#include "test_util.hpp"

using namespace liouwave;
using lwtest::kPi;

namespace {

WaveState small_data(const GridRef& g, double amp) { return lwtest::random_state(g, 1, 7, amp, 0.5 * amp, 3); }

}  // namespace

TEST(PicardRadius, Examples) {
  auto g = make_torus_grid(32, 32);
  EXPECT_EQ(picard_radius(wave_state_new(g, {ScalarField(g)}, {ScalarField(g)})), 0.0);
  // ‖cos x1‖²_{H¹} = 2π² + 2π², so R = 3 · 2π.
  const WaveState c = wave_state_new(g, {lwtest::cos_x1(g)}, {ScalarField(g)});
  EXPECT_NEAR(picard_radius(c), 6 * kPi, 1e-11);
  const WaveState c2 = wave_state_new(g, {lwtest::cos_x1(g, 2.0)}, {lwtest::cos_x1(g, 2.0)});
  EXPECT_NEAR(picard_radius(c2), 2 * 6 * kPi + 3 * 2 * std::sqrt(2.0) * kPi, 1e-10);
}

TEST(PicardSolve, ZeroDataConvergesImmediately) {
  auto g = make_torus_grid(16, 16);
  const WaveState z = wave_state_new(g, {ScalarField(g)}, {ScalarField(g)});
  const PicardResult pr = picard_solve(z, CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi), 0.1, 1e-2, 1e-12, 10);
  EXPECT_TRUE(pr.report.converged);
  EXPECT_EQ(pr.report.iterations, 1);
  for (const auto& w : pr.path) EXPECT_LT(w.u[0].max_abs(), 1e-15);
}

TEST(PicardSolve, SmallDataMatchesEvolve) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = small_data(g, 0.2);
  const auto cfg = CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi);
  const double T = 0.05, h = 1e-3;
  const PicardResult pr = picard_solve(s, cfg, T, h, 1e-12, 50);
  ASSERT_TRUE(pr.report.converged);
  EXPECT_LT(pr.report.iterations, 10);
  for (double r : pr.report.contraction_ratios) EXPECT_LT(r, 1.0);

  StepperConfig sc;
  sc.h = h;
  sc.sample_every = 1;
  EvolveOptions eo;
  eo.keep_snapshots = true;
  const Trajectory tr = evolve(s, T, sc, cfg, eo);
  ASSERT_EQ(tr.snapshots.size(), pr.path.size());
  EXPECT_LE(sup_h1_distance(pr.path, tr.snapshots), 1e-8);
}

TEST(PicardSolve, RatioShrinksWithT) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = small_data(g, 0.2);
  const auto cfg = CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi);
  const double r_full = picard_first_ratio(s, cfg, 0.05);
  const double r_half = picard_first_ratio(s, cfg, 0.025);
  EXPECT_LT(r_half, r_full);
  EXPECT_LT(r_full, 1.0);
}

TEST(PicardSolve, ReportsDivergenceOnLongInterval) {
  auto g = make_torus_grid(16, 16);
  const WaveState s = small_data(g, 1.5);
  const PicardResult pr =
      picard_solve(s, CouplingConfig::sinh_gordon(200 * kPi, 200 * kPi), 4.0, 0.02, 1e-12, 40);
  EXPECT_TRUE(pr.report.diverged);
  EXPECT_FALSE(pr.report.note.empty());
}

TEST(PicardSolve, IteratesPreserveMean) {
  auto g = make_torus_grid(16, 16);
  const WaveState s = small_data(g, 0.3);
  const PicardResult pr = picard_solve(s, CouplingConfig::sinh_gordon(2 * kPi, 3 * kPi), 0.2, 1e-2, 1e-12, 50);
  const double m0 = mean(pr.path.front().u[0]);
  for (const auto& w : pr.path) EXPECT_NEAR(mean(w.u[0]), m0, 1e-13);
}

TEST(PicardSolve, RejectsBadArguments) {
  auto g = make_torus_grid(16, 16);
  const WaveState s = small_data(g, 0.3);
  const auto cfg = CouplingConfig::sinh_gordon(kPi, kPi);
  EXPECT_THROW(picard_solve(s, cfg, 0.0, 1e-3, 1e-10, 5), std::invalid_argument);
  EXPECT_THROW(picard_solve(s, cfg, 1.0, 1e-3, 0.0, 5), std::invalid_argument);
  EXPECT_THROW(picard_time(s, cfg, 1.0), std::invalid_argument);
}

TEST(PicardTime, ZeroDataReturnsTrial) {
  auto g = make_torus_grid(16, 16);
  const WaveState z = wave_state_new(g, {ScalarField(g)}, {ScalarField(g)});
  EXPECT_EQ(picard_time(z, CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi), 0.5, 0.75), 0.75);
}

TEST(PicardTime, ReturnedTLandsInWindow) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = small_data(g, 1.0);
  const auto cfg = CouplingConfig::sinh_gordon(40 * kPi, 40 * kPi);
  for (double target : {0.3, 0.5, 0.9}) {
    const double T = picard_time(s, cfg, target);
    const double r = picard_first_ratio(s, cfg, T);
    EXPECT_GE(r, 0.5 * target);
    EXPECT_LE(r, target);
  }
}

TEST(PicardTime, DoublingTargetRoughlyDoublesT) {
  auto g = make_torus_grid(32, 32);
  const WaveState s = small_data(g, 1.0);
  const auto cfg = CouplingConfig::sinh_gordon(4 * kPi, 4 * kPi);
  const double t1 = picard_time(s, cfg, 0.5);
  const double t2 = picard_time(s, cfg, 0.99);
  EXPECT_GE(t2 / t1, 1.5);
  EXPECT_LE(t2 / t1, 3.0);
}

TEST(PicardTime, LargerDataGivesSmallerT) {
  // Strong coupling: the window is reached at short times, where the ratio
  // grows with the amplitude of the data.
  auto g = make_torus_grid(32, 32);
  const auto cfg = CouplingConfig::sinh_gordon(40 * kPi, 40 * kPi);
  double prev = picard_time(small_data(g, 1.0), cfg, 0.5);
  for (double amp : {2.0, 4.0, 8.0}) {
    const double T = picard_time(small_data(g, amp), cfg, 0.5);
    EXPECT_LT(T, prev) << "amplitude " << amp;
    prev = T;
  }
}
