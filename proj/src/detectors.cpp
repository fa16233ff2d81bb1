#include "catgate/detectors.hpp"

#include "catgate/states.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace catgate {

std::pair<VecXr, VecXr> gauss_legendre(int n) {
  if (n < 1) throw dimension_error("quadrature order must be >= 1");
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights come
  // from the first component of each eigenvector.
  MatXr jac = MatXr::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k - 1, k) = b;
    jac(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<MatXr> es(jac);
  VecXr nodes = es.eigenvalues();
  VecXr weights(n);
  for (int k = 0; k < n; ++k)
    weights[k] = 2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
  return {nodes, weights};
}

std::vector<MatXr> loss_kraus(double eta, int D) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw dimension_error("eta must lie in [0, 1]");
  if (D < 1) throw dimension_error("cutoff must be >= 1");
  std::vector<MatXr> kraus(D, MatXr::Zero(D, D));
  for (int n = 0; n < D; ++n) {
    for (int k = 0; k <= n; ++k) {
      // sqrt( C(n,k) eta^{n-k} (1-eta)^k ), evaluated in log space.
      double log_amp2 = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                        std::lgamma(n - k + 1.0);
      if (n - k > 0) {
        if (eta == 0.0) continue;
        log_amp2 += (n - k) * std::log(eta);
      }
      if (k > 0) {
        if (eta == 1.0) continue;
        log_amp2 += k * std::log(1.0 - eta);
      }
      kraus[k](n - k, n) = std::exp(0.5 * log_amp2);
    }
  }
  return kraus;
}

DensityOperator loss_channel(const DensityOperator& rho, double eta) {
  if (rho.modes() != 1) throw dimension_error("loss_channel expects one mode");
  int D = rho.dims[0];
  MatXc out = MatXc::Zero(D, D);
  for (const auto& a : loss_kraus(eta, D))
    out += a * rho.m * a.transpose();
  DensityOperator r{std::move(out), rho.dims};
  r.trace_deficit = rho.trace_deficit;
  r.truncation_warning = rho.truncation_warning;
  return r;
}

MatXc loss_adjoint(const MatXc& effect, double eta) {
  if (effect.rows() != effect.cols())
    throw dimension_error("effect must be square");
  int D = static_cast<int>(effect.rows());
  MatXc out = MatXc::Zero(D, D);
  for (const auto& a : loss_kraus(eta, D))
    out += a.transpose() * effect * a;
  return out;
}

FockOperator apd_click_povm(double eta, double p_dark, int D) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw dimension_error("eta must lie in [0, 1]");
  if (!(p_dark >= 0.0 && p_dark <= 1.0))
    throw dimension_error("p_dark must lie in [0, 1]");
  MatXc m = MatXc::Zero(D, D);
  for (int n = 0; n < D; ++n)
    m(n, n) = 1.0 - (1.0 - p_dark) * std::pow(1.0 - eta, n);
  return FockOperator{std::move(m), {D}, OpKind::povm};
}

FockOperator apd_no_click_povm(double eta, double p_dark, int D) {
  FockOperator click = apd_click_povm(eta, p_dark, D);
  return FockOperator{MatXc::Identity(D, D) - click.m, {D}, OpKind::povm};
}

FockOperator homodyne_window_povm(const Window& w, double eta, int D,
                                  int n_nodes) {
  if (n_nodes < 8) throw dimension_error("homodyne POVM needs >= 8 nodes");
  if (!(w.delta > 0.0)) throw dimension_error("window width must be > 0");
  // The window covers [x0 - delta/2, x0 + delta/2]: delta is the full width.
  auto [nodes, weights] = gauss_legendre(n_nodes);
  double half = 0.5 * w.delta;
  MatXc ideal = MatXc::Zero(D, D);
  for (int k = 0; k < n_nodes; ++k) {
    double x = w.x0 + half * nodes[k];
    VecXr psi = quadrature_amplitudes(x, D);
    ideal += (half * weights[k]) * (psi * psi.transpose());
  }
  MatXc m = (eta < 1.0) ? loss_adjoint(ideal, eta) : ideal;
  // Clip the tiny negative eigenvalues quadrature can introduce.
  m = 0.5 * (m + MatXc(m.adjoint()));
  return FockOperator{std::move(m), {D}, OpKind::povm};
}

}  // namespace catgate
