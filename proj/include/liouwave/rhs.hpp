#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liouwave/fields.hpp"
#include "liouwave/surface.hpp"

namespace liouwave {

enum class Family { MeanField, SinhGordon, AsymmetricSinh, Toda };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

enum class MatrixKind { A, B, C, G2, Custom };

std::string to_string(MatrixKind k);
MatrixKind matrix_kind_from_string(const std::string& s);

/// Coupling matrix of a Toda system, row-major n x n.
struct CouplingMatrix {
  MatrixKind kind = MatrixKind::A;
  int n = 0;
  std::vector<double> a;
  /// Positive symmetrizer with d_i a_ij = d_j a_ji, normalized to min d_i = 1.
  /// Empty when none exists.
  std::vector<double> d;
  /// A^{-1}; empty when singular.
  std::vector<double> inverse;

  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  double inv(int i, int j) const { return inverse[static_cast<std::size_t>(i) * n + j]; }
  bool invertible() const { return !inverse.empty(); }
  bool symmetrizable() const { return !d.empty(); }
  /// Energy quadratic form S = diag(d) A^{-1} (symmetric); requires both of the above.
  bool has_energy() const { return invertible() && symmetrizable(); }
  double energy_form(int i, int j) const { return d[i] * inv(i, j); }
};

/// Cartan matrices A_n, B_n, C_n and G_2 (n must be 2).
CouplingMatrix cartan_matrix(MatrixKind kind, int n);
/// Arbitrary square matrix; symmetrizer and inverse computed when they exist.
CouplingMatrix custom_matrix(int n, std::vector<double> entries);

struct CouplingConfig {
  Family family = Family::SinhGordon;
  /// (rho) for mean field, (rho1, rho2) for sinh families, (rho_1..rho_n) for Toda.
  std::vector<double> rho;
  /// Asymmetry exponent of the e^{-a u} term.
  double a = 1.0;
  /// Optional strictly positive weights h_i (h_1, h_2 scalar; one per component for Toda).
  std::vector<ScalarField> weights;
  std::optional<CouplingMatrix> matrix;

  std::size_t components() const;
  double rho1() const { return rho.empty() ? 0.0 : rho[0]; }
  /// Coefficient of the e^{-a u} term (0 for mean field).
  double rho2() const;
  double effective_a() const { return family == Family::AsymmetricSinh ? a : 1.0; }
  const ScalarField* weight(std::size_t i) const {
    return i < weights.size() ? &weights[i] : nullptr;
  }
  /// Weight bound C with 1/C <= h_i <= C over all weights (1 when unweighted).
  double weight_bound() const;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  static CouplingConfig mean_field(double rho);
  static CouplingConfig sinh_gordon(double rho1, double rho2);
  static CouplingConfig asymmetric_sinh(double rho1, double rho2, double a);
  static CouplingConfig toda(std::vector<double> rho, CouplingMatrix m);
};

/// ρ1 (h1 e^u/∫h1 e^u − 1/|M|) − ρ2 (h2 e^{−au}/∫h2 e^{−au} − 1/|M|), exact zero mean.
ScalarField rhs_scalar(const ScalarField& u, const CouplingConfig& cfg);

/// Component i: Σ_j a_ij ρ_j (e^{u_j}/∫e^{u_j} − 1/|M|), exact zero mean.
std::vector<ScalarField> rhs_toda(const std::vector<ScalarField>& u, const CouplingConfig& cfg);

/// Dispatches on the family.
std::vector<ScalarField> rhs(const std::vector<ScalarField>& u, const CouplingConfig& cfg);

/// Spectral images of rhs(u) with the zero mode set to exactly 0, optionally
/// two-thirds dealiased. This is what the integrators consume.
std::vector<Spectrum> rhs_modes(const std::vector<ScalarField>& u, const CouplingConfig& cfg,
                                bool dealias);

}  // namespace liouwave
