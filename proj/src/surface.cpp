#include "liouwave/surface.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "liouwave/error.hpp"

namespace liouwave {

namespace {

// FFTW planning is not thread safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int signed_k(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

void configure_transform_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    int threads = 1;
    if (const char* env = std::getenv("LIOUWAVE_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) threads = v;
    }
    fftw_init_threads();
    fftw_plan_with_nthreads(threads);
  });
}

struct SpectralGrid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

SpectralGrid::SpectralGrid(int n1, int n2, double L1, double L2)
    : n1_(n1), n2_(n2), L1_(L1), L2_(L2), plans_(std::make_unique<Plans>()) {
  const std::size_t nm = modes();
  lap_.resize(nm);
  mask_.resize(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    int k1 = k1_of(m);
    int k2 = k2_of(m);
    lap_[m] = lap_symbol(k1, k2);
    mask_[m] = in_dealias_band(k1, k2) ? 1 : 0;
  }

  configure_transform_threads();
  std::vector<double> rbuf(points());
  std::vector<Complex> cbuf(nm);
  auto* cptr = reinterpret_cast<fftw_complex*>(cbuf.data());
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->r2c = fftw_plan_dft_r2c_2d(n1_, n2_, rbuf.data(), cptr, flags);
  plans_->c2r = fftw_plan_dft_c2r_2d(n1_, n2_, cptr, rbuf.data(), flags);
  if (!plans_->r2c || !plans_->c2r) throw std::runtime_error("FFTW planning failed");
}

SpectralGrid::~SpectralGrid() = default;

int SpectralGrid::k1_of(std::size_t mode) const {
  return signed_k(static_cast<int>(mode / half2()), n1_);
}

int SpectralGrid::k2_of(std::size_t mode) const {
  int j = static_cast<int>(mode % half2());
  return j == n2_ / 2 ? -j : j;
}

double SpectralGrid::lap_symbol(int k1, int k2) const {
  const double w1 = 2.0 * std::numbers::pi * k1 / L1_;
  const double w2 = 2.0 * std::numbers::pi * k2 / L2_;
  return w1 * w1 + w2 * w2;
}

bool SpectralGrid::in_dealias_band(int k1, int k2) const {
  return std::abs(k1) <= n1_ / 3 && std::abs(k2) <= n2_ / 3;
}

double SpectralGrid::multiplicity(std::size_t mode) const {
  int j = static_cast<int>(mode % half2());
  return (j == 0 || j == n2_ / 2) ? 1.0 : 2.0;
}

double SpectralGrid::torus_distance(double a1, double a2, double b1, double b2) const {
  double d1 = std::fmod(std::abs(a1 - b1), L1_);
  double d2 = std::fmod(std::abs(a2 - b2), L2_);
  d1 = std::min(d1, L1_ - d1);
  d2 = std::min(d2, L2_ - d2);
  return std::hypot(d1, d2);
}

void SpectralGrid::forward(std::span<const double> values, std::span<Complex> out) const {
  // r2c does not modify its input under FFTW_ESTIMATE|UNALIGNED, but the API is non-const.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(points());
  for (auto& c : out) c *= scale;
}

void SpectralGrid::inverse(std::span<const Complex> in, std::span<double> values) const {
  // c2r destroys its input.
  std::vector<Complex> tmp(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(tmp.data()),
                       values.data());
}

GridRef make_torus_grid(int n1, int n2, double L1, double L2) {
  if (n1 < 8 || n2 < 8 || n1 % 2 != 0 || n2 % 2 != 0)
    throw std::invalid_argument("grid sizes must be even and >= 8 (got " +
                                std::to_string(n1) + "x" + std::to_string(n2) + ")");
  if (!(L1 > 0.0) || !(L2 > 0.0) || !std::isfinite(L1) || !std::isfinite(L2))
    throw std::invalid_argument("grid periods must be positive and finite");
  return std::make_shared<const SpectralGrid>(n1, n2, L1, L2);
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(GridRef g, double fill)
    : grid(std::move(g)), values(grid->points(), fill) {}

ScalarField::ScalarField(GridRef g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->points())
    throw std::invalid_argument("field size does not match grid");
}

bool ScalarField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}
ScalarField& ScalarField::operator*=(double s) {
  for (double& x : values) x *= s;
  return *this;
}
ScalarField& ScalarField::operator+=(double c) {
  for (double& x : values) x += c;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

Complex Spectrum::at(int k1, int k2) const {
  const int n1 = grid->n1();
  const int n2 = grid->n2();
  bool conj = false;
  int j = ((k2 % n2) + n2) % n2;
  int i = ((k1 % n1) + n1) % n1;
  if (j > n2 / 2) {
    j = n2 - j;
    i = (n1 - i) % n1;
    conj = true;
  }
  Complex c = modes[static_cast<std::size_t>(i) * grid->half2() + j];
  return conj ? std::conj(c) : c;
}

namespace {
void require_finite(const ScalarField& f, const char* what) {
  if (!f.all_finite()) throw std::invalid_argument(std::string(what) + ": non-finite input");
}
}  // namespace

Spectrum to_spectral(const ScalarField& f) {
  require_finite(f, "to_spectral");
  Spectrum s(f.grid);
  f.grid->forward(f.values, s.modes);
  return s;
}

ScalarField to_physical(const Spectrum& s) {
  ScalarField f(s.grid);
  s.grid->inverse(s.modes, f.values);
  return f;
}

double integrate(const ScalarField& f) {
  double acc = 0.0;
  for (double x : f.values) acc += x;
  return f.grid->cell_area() * acc;
}

double mean(const ScalarField& f) { return integrate(f) / f.grid->area(); }

double inner(const ScalarField& a, const ScalarField& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
  return a.grid->cell_area() * acc;
}

double spectral_l2_dot(const Spectrum& a, const Spectrum& b) {
  const auto& g = *a.grid;
  double acc = 0.0;
  for (std::size_t m = 0; m < a.modes.size(); ++m)
    acc += g.multiplicity(m) * (a.modes[m] * std::conj(b.modes[m])).real();
  return g.area() * acc;
}

double spectral_grad_dot(const Spectrum& a, const Spectrum& b) {
  const auto& g = *a.grid;
  auto lap = g.lap_symbol();
  double acc = 0.0;
  for (std::size_t m = 0; m < a.modes.size(); ++m)
    acc += g.multiplicity(m) * lap[m] * (a.modes[m] * std::conj(b.modes[m])).real();
  return g.area() * acc;
}

double spectral_l2_sq(const Spectrum& s) { return spectral_l2_dot(s, s); }
double spectral_h1_semi_sq(const Spectrum& s) { return spectral_grad_dot(s, s); }

double norm_l2(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double seminorm_h1(const ScalarField& f) {
  return std::sqrt(spectral_h1_semi_sq(to_spectral(f)));
}

double norm_h1(const ScalarField& f) {
  return std::sqrt(spectral_h1_semi_sq(to_spectral(f)) + inner(f, f));
}

namespace {

// Exponent values scale*f + log w, their maximum, and validation.
double shifted_exponent(const ScalarField& f, double scale, const ScalarField* weight,
                        std::vector<double>& expo) {
  require_finite(f, "log_integral_exp");
  expo.resize(f.values.size());
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < expo.size(); ++i) {
    double e = scale * f.values[i];
    if (weight) {
      double w = weight->values[i];
      if (!(w > 0.0) || !std::isfinite(w))
        throw std::invalid_argument("log_integral_exp: weight must be strictly positive");
      e += std::log(w);
    }
    expo[i] = e;
    m = std::max(m, e);
  }
  return m;
}

}  // namespace

double log_integral_exp(const ScalarField& f, double scale, const ScalarField* weight) {
  std::vector<double> expo;
  const double m = shifted_exponent(f, scale, weight, expo);
  double acc = 0.0;
  for (double e : expo) acc += std::exp(e - m);
  return m + std::log(f.grid->cell_area() * acc);
}

double log_integral_exp(const ScalarField& f, Sign sign, std::optional<ScalarField> weight) {
  return log_integral_exp(f, static_cast<double>(static_cast<int>(sign)),
                          weight ? &*weight : nullptr);
}

NormalizedExp normalized_exp(const ScalarField& f, double scale, const ScalarField* weight) {
  std::vector<double> expo;
  const double m = shifted_exponent(f, scale, weight, expo);
  ScalarField d(f.grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < expo.size(); ++i) {
    d.values[i] = std::exp(expo[i] - m);
    acc += d.values[i];
  }
  const double z = f.grid->cell_area() * acc;
  if (!(z > 0.0) || !std::isfinite(z)) throw DynamicRangeError();
  const double inv = 1.0 / z;
  for (double& x : d.values) x *= inv;
  return {std::move(d), m + std::log(z)};
}

}  // namespace liouwave
