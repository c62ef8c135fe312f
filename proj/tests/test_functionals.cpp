#include <gtest/gtest.h>

#include "liouwave/blowup.hpp"
#include "liouwave/error.hpp"
#include "liouwave/functionals.hpp"
#include "test_util.hpp"

using namespace liouwave;
using lwtest::kArea;
using lwtest::kPi;

TEST(FunctionalJ, ZeroField) {
  auto g = make_torus_grid(32, 32);
  EXPECT_NEAR(functional_J_sg(ScalarField(g), 3.0, 5.0), -8.0 * std::log(kArea), 1e-13);
}

TEST(FunctionalJ, TranslationInvariant) {
  auto g = make_torus_grid(32, 32);
  const ScalarField u = random_smooth_field(g, 1, 2.0, 5);
  ScalarField v = u;
  v += 3.25;
  EXPECT_NEAR(functional_J_sg(u, 9.0, 4.0), functional_J_sg(v, 9.0, 4.0), 1e-12);
  EXPECT_NEAR(mt_residual(u, MtFlavor::Sinh), mt_residual(v, MtFlavor::Sinh), 1e-12);
  EXPECT_NEAR(mt_residual(u, MtFlavor::Standard), mt_residual(v, MtFlavor::Standard), 1e-12);
}

TEST(FunctionalJ, CoerciveTrendAtEightPi) {
  auto g = make_torus_grid(64, 64);
  std::vector<double> J;
  for (int s = 1; s <= 8; ++s) J.push_back(functional_J_sg(lwtest::cos_x1(g, s), 8 * kPi, 8 * kPi));
  // The Dirichlet part is s²π²; the log terms grow only linearly in s.
  EXPECT_GT(J.back(), 0.0);
  for (std::size_t i = 4; i < J.size(); ++i) EXPECT_GT(J[i], J[i - 1]);
  for (int s = 1; s <= 8; ++s) {
    const double dir = 0.5 * s * s * 2 * kPi * kPi;
    EXPECT_LT(J[s - 1] - dir, 0.0);
  }
}

TEST(FunctionalJ, StrictlyDecreasingInRho1) {
  auto g = make_torus_grid(32, 32);
  const ScalarField u = random_smooth_field(g, 3, 1.0, 4);
  ASSERT_GT(log_integral_exp(u - ScalarField(g, mean(u)), Sign::Plus), std::log(kArea));
  double prev = functional_J_sg(u, 0.0, 2.0);
  for (double r : {1.0, 5.0, 20.0, 40.0}) {
    const double j = functional_J_sg(u, r, 2.0);
    EXPECT_LT(j, prev);
    prev = j;
  }
}

TEST(Energy, ZeroStates) {
  auto g = make_torus_grid(16, 16);
  EXPECT_NEAR(energy_sg(zero_state(g, 1), 2.0, 3.0), -5.0 * std::log(kArea), 1e-13);
  const auto A2 = cartan_matrix(MatrixKind::A, 2);
  EXPECT_NEAR(energy_toda(zero_state(g, 2), {2.0, 3.0}, A2), -5.0 * std::log(kArea), 1e-13);
}

TEST(Energy, KineticPlusJIdentity) {
  auto g = make_torus_grid(32, 32);
  const auto cfg = CouplingConfig::sinh_gordon(5.0, 7.0);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const WaveState s = lwtest::random_state(g, 1, 100 + 2 * k, 2.0, 1.0);
    const FunctionalReport r = functional_report(s, cfg);
    EXPECT_NEAR(r.E, r.kinetic + r.J, 1e-10 * (1.0 + std::abs(r.E)));
    EXPECT_NEAR(r.kinetic, 0.5 * norm_l2(s.v[0]) * norm_l2(s.v[0]), 1e-10);
  }
}

TEST(Energy, TodaDirichletUsesInverseEntries) {
  auto g = make_torus_grid(32, 32);
  const ScalarField w = random_smooth_field(g, 12, 1.0, 4);
  const auto A2 = cartan_matrix(MatrixKind::A, 2);
  const double J = functional_J_toda({w, ScalarField(g)}, {0.0, 0.0}, A2);
  const double gw = seminorm_h1(w);
  EXPECT_NEAR(J, 0.5 * (2.0 / 3.0) * gw * gw, 1e-12);
}

TEST(Energy, SingularCouplingRejected) {
  auto g = make_torus_grid(16, 16);
  const auto m = custom_matrix(2, {1, 1, 1, 1});
  EXPECT_THROW(energy_toda(zero_state(g, 2), {1.0, 1.0}, m), SingularCouplingError);
  try {
    energy_toda(zero_state(g, 2), {1.0, 1.0}, m);
  } catch (const SingularCouplingError& e) {
    EXPECT_STREQ(e.what(), "energy undefined for singular coupling");
  }
  const auto cfg = CouplingConfig::toda({1.0, 1.0}, m);
  const FunctionalReport r = functional_report(zero_state(g, 2), cfg);
  EXPECT_FALSE(r.energy_defined);
  EXPECT_TRUE(std::isnan(r.E));
}

TEST(Energy, JensenBounds) {
  auto g = make_torus_grid(32, 32);
  const auto cfg = CouplingConfig::sinh_gordon(5.0, 7.0);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const FunctionalReport r = functional_report(lwtest::random_state(g, 1, 500 + 2 * k, 3.0, 1.0), cfg);
    EXPECT_GE(r.log_plus, std::log(kArea) - 1e-13);
    EXPECT_GE(r.log_minus, std::log(kArea) - 1e-13);
  }
}

TEST(GradJ, ZeroFieldGivesZero) {
  auto g = make_torus_grid(16, 16);
  EXPECT_LE(grad_J({ScalarField(g)}, CouplingConfig::sinh_gordon(4.0, 9.0))[0].max_abs(), 1e-15);
}

TEST(GradJ, MeanFieldMatchesSinhGordonWithZeroRho2) {
  auto g = make_torus_grid(32, 32);
  const ScalarField u = random_smooth_field(g, 31, 1.5, 5);
  const auto a = grad_J({u}, CouplingConfig::mean_field(6.0))[0];
  const auto b = grad_J({u}, CouplingConfig::sinh_gordon(6.0, 0.0))[0];
  EXPECT_LE(lwtest::max_abs_diff(a, b), 1e-14);
}

namespace {

// Central difference ratio between ε = 1e-3 and 1e-4 for J along φ. The
// directions have amplitude 10 so the ε² truncation term at ε = 1e-4 sits
// well above the round-off of J/ε.
void check_fd(const std::vector<ScalarField>& u, const std::vector<ScalarField>& phi,
              const CouplingConfig& cfg) {
  auto J = [&](double eps) {
    std::vector<ScalarField> w = u;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += eps * phi[i];
    if (cfg.family == Family::Toda) return functional_J_toda(w, cfg.rho, *cfg.matrix);
    return functional_J(w[0], cfg);
  };
  const auto grad = grad_J(u, cfg);
  double exact = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) exact += inner(grad[i], phi[i]);
  const double e3 = std::abs((J(1e-3) - J(-1e-3)) / 2e-3 - exact);
  const double e4 = std::abs((J(1e-4) - J(-1e-4)) / 2e-4 - exact);
  EXPECT_GT(e3 / e4, 80.0);
  EXPECT_LT(e3 / e4, 120.0);
}

}  // namespace

TEST(GradJ, FiniteDifferenceSecondOrderScalar) {
  auto g = make_torus_grid(32, 32);
  const ScalarField u = random_smooth_field(g, 40, 1.5, 4);
  const ScalarField phi = random_smooth_field(g, 41, 10.0, 4);
  check_fd({u}, {phi}, CouplingConfig::sinh_gordon(6.0, 9.0));
  check_fd({u}, {phi}, CouplingConfig::asymmetric_sinh(6.0, 9.0, 2.0));
}

TEST(GradJ, FiniteDifferenceSecondOrderToda) {
  auto g = make_torus_grid(32, 32);
  std::vector<ScalarField> u{random_smooth_field(g, 50, 1.5, 4), random_smooth_field(g, 51, 1.5, 4)};
  std::vector<ScalarField> phi{random_smooth_field(g, 52, 10.0, 4), random_smooth_field(g, 53, 10.0, 4)};
  check_fd(u, phi, CouplingConfig::toda({5.0, 7.0}, cartan_matrix(MatrixKind::A, 2)));
  check_fd(u, phi, CouplingConfig::toda({5.0, 7.0}, cartan_matrix(MatrixKind::G2, 2)));
}

TEST(MtResidual, ZeroField) {
  auto g = make_torus_grid(32, 32);
  EXPECT_NEAR(mt_residual(ScalarField(g), MtFlavor::Standard), -8 * kPi * std::log(kArea), 1e-12);
  EXPECT_NEAR(mt_residual(ScalarField(g), MtFlavor::Sinh), -16 * kPi * std::log(kArea), 1e-12);
}

TEST(MtResidual, ImprovedFormReducesToStandard) {
  auto g = make_torus_grid(32, 32);
  const ScalarField u = random_smooth_field(g, 60, 1.0, 4);
  const double g2 = seminorm_h1(u) * seminorm_h1(u);
  EXPECT_NEAR(mt_residual_improved(u, 1, 0, 0.25), mt_residual(u, MtFlavor::Standard) + 0.125 * g2, 1e-11);
  EXPECT_NEAR(mt_residual_improved(u, 1, 1, 0.25), mt_residual(u, MtFlavor::Sinh) + 0.125 * g2, 1e-11);
  EXPECT_THROW(mt_residual_improved(u, 1, 1, 0.0), std::invalid_argument);
}

TEST(MtResidual, BubbleFamilyBoundedWhileSupercriticalJFalls) {
  auto g = make_torus_grid(128, 128);
  std::vector<double> J, R;
  for (double lam : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
    const ScalarField u = bubble_field(g, {kPi, kPi}, lam);
    J.push_back(functional_J_sg(u, 10 * kPi, 0.0));
    R.push_back(mt_residual(u, MtFlavor::Sinh));
  }
  for (std::size_t i = 1; i < J.size(); ++i) EXPECT_LT(J[i], J[i - 1]);
  const double rmin = *std::min_element(R.begin(), R.end());
  // The sinh residual stays near its λ = 2 value while J drops by tens.
  EXPECT_GT(rmin, R.front() - 10.0);
  EXPECT_LT(J.back(), J.front() - 30.0);
}
