#pragma once

// Discrete flat 2-torus: grid geometry, FFT pair, quadrature and norms.
//
// Fields are stored row-major with point (i1, i2) at x = (i1*L1/n1, i2*L2/n2).
// Spectra use the real-to-complex half layout: n1 rows by n2/2+1 columns,
// coefficients normalized so that f == 1 has mode (0,0) equal to 1.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace liouwave {

using Complex = std::complex<double>;

class SpectralGrid;
using GridRef = std::shared_ptr<const SpectralGrid>;

class SpectralGrid {
 public:
  SpectralGrid(int n1, int n2, double L1, double L2);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  double L1() const { return L1_; }
  double L2() const { return L2_; }
  double area() const { return L1_ * L2_; }
  double cell_area() const { return area() / static_cast<double>(points()); }
  std::size_t points() const { return static_cast<std::size_t>(n1_) * n2_; }

  /// Number of stored half-spectrum modes, n1 * (n2/2 + 1).
  std::size_t modes() const { return static_cast<std::size_t>(n1_) * half2(); }
  int half2() const { return n2_ / 2 + 1; }

  /// Signed wavenumbers of a stored mode index.
  int k1_of(std::size_t mode) const;
  int k2_of(std::size_t mode) const;

  /// Laplacian symbol over the stored half spectrum.
  std::span<const double> lap_symbol() const { return lap_; }
  /// Symbol for arbitrary integer wavenumbers.
  double lap_symbol(int k1, int k2) const;

  /// Two-thirds rule: keeps |k1| <= n1/3 and |k2| <= n2/3.
  std::span<const unsigned char> dealias_mask() const { return mask_; }
  bool in_dealias_band(int k1, int k2) const;

  /// Parseval multiplicity of a stored mode (1 on the self-conjugate
  /// columns k2 = 0 and k2 = n2/2, 2 elsewhere).
  double multiplicity(std::size_t mode) const;

  double x1(int i1) const { return i1 * L1_ / n1_; }
  double x2(int i2) const { return i2 * L2_ / n2_; }

  /// Flat distance with period wrapping.
  double torus_distance(double a1, double a2, double b1, double b2) const;

  void forward(std::span<const double> values, std::span<Complex> modes) const;
  void inverse(std::span<const Complex> modes, std::span<double> values) const;

 private:
  int n1_;
  int n2_;
  double L1_;
  double L2_;
  std::vector<double> lap_;
  std::vector<unsigned char> mask_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// Validates sizes/periods and builds the grid.
GridRef make_torus_grid(int n1, int n2, double L1, double L2);
inline GridRef make_torus_grid(int n1, int n2) {
  return make_torus_grid(n1, n2, 6.283185307179586, 6.283185307179586);
}

/// Real values on the grid.
struct ScalarField {
  GridRef grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(GridRef g, double fill = 0.0);
  ScalarField(GridRef g, std::vector<double> v);

  double& operator()(int i1, int i2) { return values[index(i1, i2)]; }
  double operator()(int i1, int i2) const { return values[index(i1, i2)]; }
  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i1) * grid->n2() + i2;
  }
  std::size_t size() const { return values.size(); }
  bool all_finite() const;
  double max_abs() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  ScalarField& operator+=(double c);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Samples fn(x1, x2) at the grid points.
template <class Fn>
ScalarField sample(const GridRef& grid, Fn&& fn) {
  ScalarField f(grid);
  for (int i1 = 0; i1 < grid->n1(); ++i1)
    for (int i2 = 0; i2 < grid->n2(); ++i2) f(i1, i2) = fn(grid->x1(i1), grid->x2(i2));
  return f;
}

/// Half-layout Fourier coefficients.
struct Spectrum {
  GridRef grid;
  std::vector<Complex> modes;

  Spectrum() = default;
  explicit Spectrum(GridRef g) : grid(std::move(g)), modes(grid->modes()) {}

  /// Coefficient of e^{i(k1 x1' + k2 x2')} for any signed wavenumbers,
  /// using Hermitian symmetry for k2 < 0.
  Complex at(int k1, int k2) const;
  std::size_t size() const { return modes.size(); }
};

Spectrum to_spectral(const ScalarField& f);
ScalarField to_physical(const Spectrum& s);

double integrate(const ScalarField& f);
double mean(const ScalarField& f);
double norm_l2(const ScalarField& f);
double seminorm_h1(const ScalarField& f);
double norm_h1(const ScalarField& f);

/// ∫ f conj(g) style inner products evaluated on spectra.
double spectral_l2_sq(const Spectrum& s);
double spectral_h1_semi_sq(const Spectrum& s);
/// ⟨∇a, ∇b⟩_{L²} evaluated spectrally.
double spectral_grad_dot(const Spectrum& a, const Spectrum& b);
double spectral_l2_dot(const Spectrum& a, const Spectrum& b);

/// L² inner product by quadrature.
double inner(const ScalarField& a, const ScalarField& b);

enum class Sign : int { Plus = 1, Minus = -1 };

/// log ∫ w e^{scale * f}, overflow safe. `weight` must be strictly positive.
double log_integral_exp(const ScalarField& f, double scale,
                        const ScalarField* weight = nullptr);
double log_integral_exp(const ScalarField& f, Sign sign,
                        std::optional<ScalarField> weight = std::nullopt);

/// Normalized exponential w e^{scale f} / ∫ w e^{scale f} and its log normalizer.
struct NormalizedExp {
  ScalarField density;
  double log_normalizer;
};
NormalizedExp normalized_exp(const ScalarField& f, double scale,
                             const ScalarField* weight = nullptr);

/// Applies LIOUWAVE_THREADS to the transform backend; called once lazily.
void configure_transform_threads();

}  // namespace liouwave
