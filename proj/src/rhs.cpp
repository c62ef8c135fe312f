#include "liouwave/rhs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "liouwave/error.hpp"

namespace liouwave {

std::string to_string(Family f) {
  switch (f) {
    case Family::MeanField: return "mean_field";
    case Family::SinhGordon: return "sinh_gordon";
    case Family::AsymmetricSinh: return "asymmetric_sinh";
    case Family::Toda: return "toda";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "mean_field") return Family::MeanField;
  if (s == "sinh_gordon") return Family::SinhGordon;
  if (s == "asymmetric_sinh") return Family::AsymmetricSinh;
  if (s == "toda") return Family::Toda;
  throw std::invalid_argument("unknown family '" + s +
                              "' (expected mean_field|sinh_gordon|asymmetric_sinh|toda)");
}

std::string to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::A: return "A";
    case MatrixKind::B: return "B";
    case MatrixKind::C: return "C";
    case MatrixKind::G2: return "G2";
    case MatrixKind::Custom: return "custom";
  }
  return "?";
}

MatrixKind matrix_kind_from_string(const std::string& s) {
  if (s == "A") return MatrixKind::A;
  if (s == "B") return MatrixKind::B;
  if (s == "C") return MatrixKind::C;
  if (s == "G2") return MatrixKind::G2;
  if (s == "custom") return MatrixKind::Custom;
  throw std::invalid_argument("unknown matrix kind '" + s + "' (expected A|B|C|G2|custom)");
}

namespace {

void complete_matrix(CouplingMatrix& m) {
  const int n = m.n;
  // Symmetrizer by forward recursion along the sub/super diagonal.
  std::vector<double> d(n, 1.0);
  bool ok = true;
  for (int j = 1; j < n && ok; ++j) {
    const double up = m(j - 1, j);
    const double down = m(j, j - 1);
    if (up == 0.0 && down == 0.0) {
      d[j] = 1.0;
    } else if (up == 0.0 || down == 0.0) {
      ok = false;
    } else {
      d[j] = d[j - 1] * up / down;
      if (!(d[j] > 0.0)) ok = false;
    }
  }
  for (int i = 0; i < n && ok; ++i)
    for (int j = 0; j < n && ok; ++j) {
      const double lhs = d[i] * m(i, j);
      const double rhs = d[j] * m(j, i);
      if (std::abs(lhs - rhs) > 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0)) ok = false;
    }
  if (ok) {
    const double dmin = *std::min_element(d.begin(), d.end());
    for (double& x : d) x /= dmin;
    m.d = std::move(d);
  }

  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = m(i, j);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.isInvertible()) {
    Eigen::MatrixXd inv = lu.inverse();
    m.inverse.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.inverse[static_cast<std::size_t>(i) * n + j] = inv(i, j);
  }
}

}  // namespace

CouplingMatrix cartan_matrix(MatrixKind kind, int n) {
  if (n < 1) throw std::invalid_argument("cartan_matrix: rank must be >= 1");
  if (kind == MatrixKind::G2 && n != 2)
    throw std::invalid_argument("cartan_matrix: G2 has rank 2");
  if (kind == MatrixKind::Custom)
    throw std::invalid_argument("cartan_matrix: use custom_matrix for custom couplings");
  CouplingMatrix m;
  m.kind = kind;
  m.n = n;
  m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
  auto at = [&](int i, int j) -> double& { return m.a[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    at(i, i) = 2.0;
    if (i + 1 < n) at(i, i + 1) = at(i + 1, i) = -1.0;
  }
  if (n >= 2) {
    if (kind == MatrixKind::B) at(n - 2, n - 1) = -2.0;
    if (kind == MatrixKind::C) at(n - 1, n - 2) = -2.0;
    if (kind == MatrixKind::G2) at(1, 0) = -3.0;
  }
  complete_matrix(m);
  return m;
}

CouplingMatrix custom_matrix(int n, std::vector<double> entries) {
  if (n < 1 || entries.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("custom_matrix: need n*n entries");
  for (double x : entries)
    if (!std::isfinite(x)) throw std::invalid_argument("custom_matrix: non-finite entry");
  CouplingMatrix m;
  m.kind = MatrixKind::Custom;
  m.n = n;
  m.a = std::move(entries);
  complete_matrix(m);
  return m;
}

// ---------------------------------------------------------------------------

std::size_t CouplingConfig::components() const {
  return family == Family::Toda ? rho.size() : 1;
}

double CouplingConfig::rho2() const {
  if (family == Family::MeanField) return 0.0;
  return rho.size() > 1 ? rho[1] : 0.0;
}

double CouplingConfig::weight_bound() const {
  double c = 1.0;
  for (const auto& w : weights)
    for (double x : w.values) c = std::max({c, x, 1.0 / x});
  return c;
}

void CouplingConfig::validate() const {
  for (double r : rho)
    if (!std::isfinite(r)) throw std::invalid_argument("rho values must be finite");
  switch (family) {
    case Family::MeanField:
      if (rho.size() != 1) throw std::invalid_argument("mean_field needs exactly one rho");
      break;
    case Family::SinhGordon:
    case Family::AsymmetricSinh:
      if (rho.size() != 2) throw std::invalid_argument(to_string(family) + " needs rho1, rho2");
      break;
    case Family::Toda:
      if (rho.size() < 2) throw std::invalid_argument("toda needs at least two components");
      if (!matrix) throw std::invalid_argument("toda needs a coupling matrix");
      if (matrix->n != static_cast<int>(rho.size()))
        throw std::invalid_argument("toda: matrix rank must equal number of rho values");
      break;
  }
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("asymmetry a must be > 0");
  const std::size_t max_weights = family == Family::Toda ? rho.size()
                                  : family == Family::MeanField ? 1 : 2;
  if (weights.size() > max_weights) throw std::invalid_argument("too many weight fields");
  for (const auto& w : weights)
    for (double x : w.values)
      if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("weights must be strictly positive and finite");
}

CouplingConfig CouplingConfig::mean_field(double rho) {
  CouplingConfig c;
  c.family = Family::MeanField;
  c.rho = {rho};
  return c;
}

CouplingConfig CouplingConfig::sinh_gordon(double rho1, double rho2) {
  CouplingConfig c;
  c.family = Family::SinhGordon;
  c.rho = {rho1, rho2};
  return c;
}

CouplingConfig CouplingConfig::asymmetric_sinh(double rho1, double rho2, double a) {
  CouplingConfig c;
  c.family = Family::AsymmetricSinh;
  c.rho = {rho1, rho2};
  c.a = a;
  return c;
}

CouplingConfig CouplingConfig::toda(std::vector<double> rho, CouplingMatrix m) {
  CouplingConfig c;
  c.family = Family::Toda;
  c.rho = std::move(rho);
  c.matrix = std::move(m);
  return c;
}

// ---------------------------------------------------------------------------

namespace {

NormalizedExp safe_density(const ScalarField& u, double scale, const ScalarField* w) {
  try {
    return normalized_exp(u, scale, w);
  } catch (const std::invalid_argument&) {
    if (!u.all_finite()) throw DynamicRangeError("non-finite state");
    throw;
  }
}

void remove_mean(ScalarField& f) {
  f += -mean(f);
  if (!f.all_finite()) throw DynamicRangeError();
}

}  // namespace

ScalarField rhs_scalar(const ScalarField& u, const CouplingConfig& cfg) {
  if (cfg.family == Family::Toda) throw std::invalid_argument("rhs_scalar: scalar family expected");
  const double inv_area = 1.0 / u.grid->area();
  ScalarField out(u.grid);
  const double r1 = cfg.rho1();
  const double r2 = cfg.rho2();
  if (r1 != 0.0) {
    auto p = safe_density(u, 1.0, cfg.weight(0));
    for (std::size_t i = 0; i < out.size(); ++i)
      out.values[i] += r1 * (p.density.values[i] - inv_area);
  }
  if (r2 != 0.0) {
    auto q = safe_density(u, -cfg.effective_a(), cfg.weight(1));
    for (std::size_t i = 0; i < out.size(); ++i)
      out.values[i] -= r2 * (q.density.values[i] - inv_area);
  }
  remove_mean(out);
  return out;
}

std::vector<ScalarField> rhs_toda(const std::vector<ScalarField>& u, const CouplingConfig& cfg) {
  if (cfg.family != Family::Toda || !cfg.matrix)
    throw std::invalid_argument("rhs_toda: toda family with matrix expected");
  const auto& A = *cfg.matrix;
  const std::size_t n = u.size();
  if (n < 2 || static_cast<int>(n) != A.n || cfg.rho.size() != n)
    throw std::invalid_argument("rhs_toda: component count must match matrix rank");
  const GridRef& g = u.front().grid;
  const double inv_area = 1.0 / g->area();

  std::vector<ScalarField> drive;  // ρ_j (e^{u_j}/∫e^{u_j} − 1/|M|)
  drive.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    ScalarField f(g);
    if (cfg.rho[j] != 0.0) {
      auto p = safe_density(u[j], 1.0, cfg.weight(j));
      for (std::size_t k = 0; k < f.size(); ++k)
        f.values[k] = cfg.rho[j] * (p.density.values[k] - inv_area);
    }
    drive.push_back(std::move(f));
  }
  std::vector<ScalarField> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ScalarField f(g);
    for (std::size_t j = 0; j < n; ++j) {
      const double aij = A(static_cast<int>(i), static_cast<int>(j));
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < f.size(); ++k) f.values[k] += aij * drive[j].values[k];
    }
    remove_mean(f);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ScalarField> rhs(const std::vector<ScalarField>& u, const CouplingConfig& cfg) {
  if (cfg.family == Family::Toda) return rhs_toda(u, cfg);
  if (u.size() != 1) throw std::invalid_argument("rhs: scalar family takes one component");
  return {rhs_scalar(u.front(), cfg)};
}

std::vector<Spectrum> rhs_modes(const std::vector<ScalarField>& u, const CouplingConfig& cfg,
                                bool dealias_on) {
  auto f = rhs(u, cfg);
  std::vector<Spectrum> out;
  out.reserve(f.size());
  for (auto& fi : f) {
    Spectrum s = to_spectral(fi);
    s.modes[0] = 0.0;
    out.push_back(dealias_on ? dealias(std::move(s)) : std::move(s));
  }
  return out;
}

}  // namespace liouwave
