#include "liouwave/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace liouwave::oracle {

namespace {

struct DenseBasis {
  Eigen::MatrixXd Q;       // points x modes, orthonormal columns
  Eigen::VectorXd lambda;  // eigenvalue of −Δ per column
};

int wrap(int k, int n) { return ((k % n) + n) % n; }

DenseBasis real_fourier_basis(const SpectralGrid& g, bool dealias) {
  const int n1 = g.n1(), n2 = g.n2();
  const int N = n1 * n2;
  std::vector<Eigen::VectorXd> cols;
  std::vector<double> lams;
  std::vector<char> seen(static_cast<std::size_t>(N), 0);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  auto add = [&](int k1, int k2, bool sine) {
    Eigen::VectorXd c(N);
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2) {
        const double ph = two_pi * (static_cast<double>(k1) * i1 / n1 + static_cast<double>(k2) * i2 / n2);
        c(i1 * n2 + i2) = sine ? std::sin(ph) : std::cos(ph);
      }
    c.normalize();
    cols.push_back(std::move(c));
    const double w1 = two_pi * k1 / g.L1(), w2 = two_pi * k2 / g.L2();
    lams.push_back(w1 * w1 + w2 * w2);
  };

  for (int k1 = -n1 / 2; k1 < n1 / 2; ++k1)
    for (int k2 = -n2 / 2; k2 < n2 / 2; ++k2) {
      const int idx = wrap(k1, n1) * n2 + wrap(k2, n2);
      if (seen[idx]) continue;
      const int cidx = wrap(-k1, n1) * n2 + wrap(-k2, n2);
      seen[idx] = seen[cidx] = 1;
      if (dealias && !(std::abs(k1) <= n1 / 3 && std::abs(k2) <= n2 / 3)) continue;
      add(k1, k2, false);
      if (cidx != idx) add(k1, k2, true);
    }

  DenseBasis b;
  b.Q.resize(N, static_cast<Eigen::Index>(cols.size()));
  b.lambda.resize(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    b.Q.col(static_cast<Eigen::Index>(j)) = cols[j];
    b.lambda(static_cast<Eigen::Index>(j)) = lams[j];
  }
  return b;
}

}  // namespace

WaveState dense_evolve(const WaveState& s, double T, const CouplingConfig& cfg, long substeps,
                       bool dealias) {
  const GridRef& g = s.grid();
  if (g->n1() > 16 || g->n2() > 16) throw std::invalid_argument("dense_evolve: grid must be <= 16x16");
  if (substeps < 1) throw std::invalid_argument("dense_evolve: substeps must be >= 1");
  const DenseBasis basis = real_fourier_basis(*g, dealias);
  const auto& Q = basis.Q;
  const Eigen::Index ncomp = static_cast<Eigen::Index>(s.components());
  const Eigen::Index N = Q.rows();

  auto to_matrix = [&](const std::vector<ScalarField>& fs) {
    Eigen::MatrixXd X(N, ncomp);
    for (Eigen::Index i = 0; i < ncomp; ++i)
      X.col(i) = Eigen::Map<const Eigen::VectorXd>(fs[i].values.data(), N);
    return X;
  };
  auto to_fields = [&](const Eigen::MatrixXd& X) {
    std::vector<ScalarField> out;
    for (Eigen::Index i = 0; i < ncomp; ++i) {
      ScalarField f(g);
      Eigen::Map<Eigen::VectorXd>(f.values.data(), N) = X.col(i);
      out.push_back(std::move(f));
    }
    return out;
  };

  Eigen::MatrixXd C = Q.transpose() * to_matrix(s.u);
  Eigen::MatrixXd W = Q.transpose() * to_matrix(s.v);

  // (C, W)' = (W, −ΛC + Qᵀ f(QC))
  auto accel = [&](const Eigen::MatrixXd& c) {
    Eigen::MatrixXd a = Q.transpose() * to_matrix(rhs(to_fields(Q * c), cfg));
    a -= basis.lambda.asDiagonal() * c;
    return a;
  };

  const double dt = (T - s.t) / static_cast<double>(substeps);
  for (long n = 0; n < substeps; ++n) {
    const Eigen::MatrixXd k1c = W;
    const Eigen::MatrixXd k1w = accel(C);
    const Eigen::MatrixXd k2c = W + 0.5 * dt * k1w;
    const Eigen::MatrixXd k2w = accel(C + 0.5 * dt * k1c);
    const Eigen::MatrixXd k3c = W + 0.5 * dt * k2w;
    const Eigen::MatrixXd k3w = accel(C + 0.5 * dt * k2c);
    const Eigen::MatrixXd k4c = W + dt * k3w;
    const Eigen::MatrixXd k4w = accel(C + dt * k3c);
    C += (dt / 6.0) * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
    W += (dt / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  }

  WaveState out;
  out.t = T;
  out.u = to_fields(Q * C);
  out.v = to_fields(Q * W);
  out.velocity_mean_removed = s.velocity_mean_removed;
  return out;
}

double direct_ball_mass(const ScalarField& dens, std::array<double, 2> center, double r) {
  const auto& g = *dens.grid;
  double acc = 0.0;
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2)
      if (g.torus_distance(g.x1(i1), g.x2(i2), center[0], center[1]) <= r) acc += dens(i1, i2);
  return acc * g.cell_area();
}

}  // namespace liouwave::oracle
