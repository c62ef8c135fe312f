#pragma once

#include <vector>

#include "liouwave/fields.hpp"
#include "liouwave/rhs.hpp"

namespace liouwave {

/// Energy bookkeeping at one time slice.
///
/// For scalar families: kinetic = ½‖v‖², dirichlet = ½‖∇u‖²,
/// log_plus = log∫h1 e^{u−ū}, log_minus = log∫h2 e^{−a(u−ū)}.
/// For Toda the quadratic terms use S = diag(d)A⁻¹ and log_plus/log_minus are
/// the maxima over components of log∫e^{±(u_j−ū_j)}.
struct FunctionalReport {
  double t = 0.0;
  double kinetic = 0.0;
  double dirichlet = 0.0;
  double log_plus = 0.0;
  double log_minus = 0.0;
  /// Per-component log∫h_j e^{u_j−ū_j} (Toda); single entry otherwise.
  std::vector<double> log_components;
  double J = 0.0;
  double E = 0.0;
  double mt_residual = 0.0;
  std::vector<double> means;
  std::vector<double> velocity_means;
  /// max_j ‖∇u_j‖_{L²}.
  double grad_l2 = 0.0;
  /// False for couplings without an energy (singular or non-symmetrizable).
  bool energy_defined = true;
};

/// ½∫|∇u|² − ρ1 log∫e^{u−ū} − ρ2 log∫e^{−u+ū}.
double functional_J_sg(const ScalarField& u, double rho1, double rho2);

/// Scalar-family functional honouring weights and the asymmetry exponent:
/// ½∫|∇u|² − ρ1 log∫h1 e^{u−ū} − (ρ2/a) log∫h2 e^{−a(u−ū)}.
double functional_J(const ScalarField& u, const CouplingConfig& cfg);

/// ½ Σ S_ij⟨∇u_i,∇u_j⟩ − Σ d_i ρ_i log∫h_i e^{u_i−ū_i}; S = A⁻¹ for symmetric A.
double functional_J_toda(const std::vector<ScalarField>& u, const std::vector<double>& rho,
                         const CouplingMatrix& m,
                         const std::vector<ScalarField>& weights = {});

double energy_sg(const WaveState& s, double rho1, double rho2);
double energy_toda(const WaveState& s, const std::vector<double>& rho, const CouplingMatrix& m);
/// Family dispatch.
double energy(const WaveState& s, const CouplingConfig& cfg);

/// L² gradient of J: −Δu − rhs(u) for scalar families, and the S-contracted
/// analogue −Σ_j S_ij Δu_j − d_i ρ_i(h_i e^{u_i}/∫h_i e^{u_i} − 1/|M|) for Toda.
std::vector<ScalarField> grad_J(const std::vector<ScalarField>& u, const CouplingConfig& cfg);

enum class MtFlavor { Standard, Sinh, Toda };

/// Standard: ½∫|∇u|² − 8π log∫e^{u−ū}.
/// Sinh: ½∫|∇u|² − 8π(log∫e^{u−ū} + log∫e^{−u+ū}).
double mt_residual(const ScalarField& u, MtFlavor flavor);
/// Toda: ½Σ a^{ij}⟨∇u_i,∇u_j⟩ − 4π Σ log∫e^{u_i−ū_i}, i.e. the Toda functional at
/// ρ_i = 4π (with the symmetrizer weights for non-symmetric matrices).
double mt_residual_toda(const std::vector<ScalarField>& u, const CouplingMatrix& m);
/// Improved (k, l) form: (1+ε)/2 ∫|∇u|² − 8kπ log∫e^{u−ū} − 8lπ log∫e^{−u+ū}.
double mt_residual_improved(const ScalarField& u, int k, int l, double eps);

FunctionalReport functional_report(const WaveState& s, const CouplingConfig& cfg);

}  // namespace liouwave
