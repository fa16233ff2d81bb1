#pragma once
// State factory: coherent states, even/odd cat states, squeezed vacuum and
// squeezed thermal resource states, and position-quadrature amplitudes.
//
// Conventions (fixed project-wide):
//   x = (a + a^dag)/sqrt(2), vacuum variance 1/2;
//   <x|alpha> = pi^{-1/4} exp(-(x - sqrt(2) alpha)^2 / 2) for real alpha;
//   S(s) = exp((s/2)(a^2 - a^dag^2)), s > 0 squeezes x (V = e^{-2s}).

#include "catgate/fock.hpp"

namespace catgate {

// Coherent-state qubit u|alpha> + v|-alpha> parametrized on the Bloch sphere:
// u = cos(theta), v = sin(theta) e^{i phi}.
struct CsqSpec {
  double alpha = 0.8;
  double theta = 0.0;
  double phi = 0.0;

  cxd u() const { return {std::cos(theta), 0.0}; }
  cxd v() const { return std::sin(theta) * std::exp(cxd{0.0, phi}); }
};

// Squeezed thermal resource: s is the squeezing parameter (V = e^{-2s}),
// nbar the mean thermal occupation before squeezing.
struct ResourceSpec {
  double s = 0.2993;
  double nbar = 0.1;
};

inline double squeeze_db(double s) { return 10.0 * std::log10(std::exp(2.0 * s)); }
inline double squeeze_from_db(double db) { return db * std::log(10.0) / 20.0; }

FockKet coherent(double alpha, int D);
FockKet coherent(cxd alpha, int D);

// Normalized cat state (|alpha> + sign |-alpha>), sign in {+1, -1}.
FockKet cat(double alpha, int sign, int D);

// Closed-form squeezed vacuum S(s)|0>.
FockKet squeezed_vacuum(double s, int D);

DensityOperator thermal(double nbar, int D);

// S(s) rho_th(nbar) S(s)^dag, renormalized to unit trace.
DensityOperator squeezed_thermal(const ResourceSpec& spec, int D);

// Coherent-state-qubit ket for a given Bloch point, normalized.
FockKet csq_ket(const CsqSpec& spec, int D);

// Position-representation amplitudes psi_n(x) for n = 0..D-1.
VecXr quadrature_amplitudes(double x, int D);

}  // namespace catgate
