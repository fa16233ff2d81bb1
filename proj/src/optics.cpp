#include "catgate/optics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace catgate {

BeamSplitterSpec BeamSplitterSpec::from_t(double t, std::pair<int, int> modes) {
  if (!(t >= 0.0 && t <= 1.0)) throw dimension_error("t must lie in [0, 1]");
  return BeamSplitterSpec{t, std::sqrt(1.0 - t * t), modes};
}

BeamSplitterSpec BeamSplitterSpec::from_reflectance(double r_sq,
                                                    std::pair<int, int> modes) {
  if (!(r_sq >= 0.0 && r_sq <= 1.0))
    throw dimension_error("reflectance must lie in [0, 1]");
  return BeamSplitterSpec{std::sqrt(1.0 - r_sq), std::sqrt(r_sq), modes};
}

FockOperator annihilation(int D) {
  if (D < 1) throw dimension_error("cutoff must be >= 1");
  MatXc a = MatXc::Zero(D, D);
  for (int n = 1; n < D; ++n) a(n - 1, n) = std::sqrt(double(n));
  return FockOperator{std::move(a), {D}, OpKind::annihilation};
}

FockOperator number_op(int D) {
  MatXc n = MatXc::Zero(D, D);
  for (int k = 0; k < D; ++k) n(k, k) = double(k);
  return FockOperator{std::move(n), {D}, OpKind::generic};
}

MatXc exp_anti_hermitian(const MatXc& g) {
  MatXc h = cxd{0.0, 1.0} * g;  // Hermitian if g is anti-Hermitian
  if (hermiticity_defect(h) > 1e-12 * (1.0 + h.cwiseAbs().maxCoeff()))
    throw dimension_error("generator is not anti-Hermitian");
  Eigen::SelfAdjointEigenSolver<MatXc> es(h);
  VecXc phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases[k] = std::exp(cxd{0.0, -es.eigenvalues()[k]});
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// Exponentiate a single-mode anti-Hermitian generator on a padded space and
// crop to D x D. The crop is not exactly unitary; the defect lives at the top
// levels only.
FockOperator padded_unitary(const MatXc& gen_padded, int D) {
  MatXc u = exp_anti_hermitian(gen_padded);
  return FockOperator{u.topLeftCorner(D, D), {D}, OpKind::unitary};
}

}  // namespace

FockOperator displacement(cxd alpha, int D) {
  int Dp = D + k_unitary_pad;
  MatXc a = annihilation(Dp).m;
  MatXc g = alpha * a.adjoint() - std::conj(alpha) * a;
  return padded_unitary(g, D);
}

FockOperator squeeze(double s, int D) {
  int Dp = D + k_unitary_pad;
  MatXc a = annihilation(Dp).m;
  MatXc a2 = a * a;
  MatXc g = 0.5 * s * (a2 - a2.adjoint());
  return padded_unitary(g, D);
}

FockOperator beam_splitter(const BeamSplitterSpec& spec,
                           const std::vector<int>& mode_dims) {
  auto [ia, ib] = spec.modes;
  if (ia < 0 || ib < 0 || ia >= static_cast<int>(mode_dims.size()) ||
      ib >= static_cast<int>(mode_dims.size()) || ia == ib)
    throw dimension_error("beam-splitter mode pair out of range");
  if (std::abs(spec.t * spec.t + spec.r * spec.r - 1.0) > 1e-12)
    throw dimension_error("beam splitter requires t^2 + r^2 = 1");
  int Da = mode_dims[ia], Db = mode_dims[ib];
  double theta = std::atan2(spec.r, spec.t);

  // Two-mode generator theta (a b^dag - a^dag b) on the bare pair space. Total
  // photon number is conserved even after truncation, so the exponential is
  // exactly unitary.
  MatXc a = tensor(annihilation(Da), identity_op({Db})).m;
  MatXc b = tensor(identity_op({Da}), annihilation(Db)).m;
  MatXc g = theta * (a * b.adjoint() - a.adjoint() * b);
  MatXc u2 = exp_anti_hermitian(g);

  if (mode_dims.size() == 2 && ia == 0 && ib == 1)
    return FockOperator{std::move(u2), mode_dims, OpKind::unitary};
  return embed_two_mode(u2, OpKind::unitary, mode_dims, ia, ib);
}

FockOperator subtraction_operator(double t, double r, std::pair<int, int> modes,
                                  const std::vector<int>& mode_dims) {
  auto [ia, ib] = modes;
  if (ia < 0 || ib < 0 || ia >= static_cast<int>(mode_dims.size()) ||
      ib >= static_cast<int>(mode_dims.size()) || ia == ib)
    throw dimension_error("subtraction-operator mode pair out of range");
  if (std::abs(t * t + r * r - 1.0) > 1e-12)
    throw dimension_error("subtraction operator requires t^2 + r^2 = 1");
  MatXc op_a = r * annihilation(mode_dims[ia]).m;
  MatXc op_b = t * annihilation(mode_dims[ib]).m;
  FockOperator ea = embed_single_mode(op_a, OpKind::generic, mode_dims, ia);
  FockOperator eb = embed_single_mode(op_b, OpKind::generic, mode_dims, ib);
  return FockOperator{ea.m + eb.m, mode_dims, OpKind::generic};
}

}  // namespace catgate
