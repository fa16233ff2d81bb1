#pragma once
// Mode operators and linear-optics unitaries on truncated Fock spaces.
//
// Unitaries generated by anti-Hermitian operators are exponentiated exactly
// (eigendecomposition of the Hermitian form). Displacement and squeeze are
// built on a padded space and cropped back so that truncation bites only at
// the cutoff, not inside the generator.

#include "catgate/fock.hpp"

#include <utility>

namespace catgate {

// Beam splitter exp(theta (a b^dag - a^dag b)) with t = cos(theta),
// r = sin(theta), acting on the ordered mode pair (0-based indices into the
// joint mode list). Transmitted amplitude t keeps a photon in its mode:
// |1,0> -> t|1,0> + r|0,1>.
struct BeamSplitterSpec {
  double t = 0.0;
  double r = 0.0;
  std::pair<int, int> modes{0, 1};

  static BeamSplitterSpec from_t(double t, std::pair<int, int> modes = {0, 1});
  static BeamSplitterSpec from_reflectance(double r_sq,
                                           std::pair<int, int> modes = {0, 1});
};

FockOperator annihilation(int D);
FockOperator number_op(int D);

// exp(alpha a^dag - conj(alpha) a), padded by k_unitary_pad levels and cropped.
FockOperator displacement(cxd alpha, int D);

// S(s) = exp((s/2)(a^2 - a^dag^2)); s > 0 squeezes x.
FockOperator squeeze(double s, int D);

inline constexpr int k_unitary_pad = 8;

// Two-mode beam-splitter unitary. With two entries in `mode_dims` and the
// default pair this is the bare two-mode matrix; otherwise the operator is
// embedded into the joint space described by `mode_dims`.
FockOperator beam_splitter(const BeamSplitterSpec& spec,
                           const std::vector<int>& mode_dims);

// Effective photon-subtraction combination r a_i + t b_j for a weak tap
// followed by interference: acts on the joint space of `mode_dims`.
FockOperator subtraction_operator(double t, double r, std::pair<int, int> modes,
                                  const std::vector<int>& mode_dims);

// exp(G) for anti-Hermitian G (defect checked), via the Hermitian form iG.
MatXc exp_anti_hermitian(const MatXc& g);

}  // namespace catgate
