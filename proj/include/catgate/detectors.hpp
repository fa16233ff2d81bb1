#pragma once
// Measurement models: lossy avalanche photodiode (click / no-click POVM),
// finite-efficiency loss channel in Kraus form, and the windowed homodyne
// conditioning POVM built by Gauss-Legendre quadrature over the window.

#include "catgate/fock.hpp"

#include <vector>

namespace catgate {

// Heralding window on the x quadrature: [x0 - delta/2, x0 + delta/2]
// (delta is the full window width).
struct Window {
  // Default pinned to the balanced position produced by balance_window at the
  // default GateParams (success probabilities of the two basis inputs equal).
  double x0 = 0.333733081074874;
  double delta = 0.02;
};

struct DetectorSpec {
  double eta_apd = 0.25;
  double p_dark = 20.0 / 815000.0;
  double eta_hd = 0.77;
  Window window{};
};

// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1].
std::pair<VecXr, VecXr> gauss_legendre(int n);

// Kraus operators A_k of the transmissivity-eta loss channel, k = 0..D-1.
std::vector<MatXr> loss_kraus(double eta, int D);

DensityOperator loss_channel(const DensityOperator& rho, double eta);

// Heisenberg picture: Lambda_eta^dag(E) = sum_k A_k^dag E A_k.
MatXc loss_adjoint(const MatXc& effect, double eta);

// Click POVM element I - (1 - p_dark)(1 - eta)^n (diagonal).
FockOperator apd_click_povm(double eta, double p_dark, int D);
FockOperator apd_no_click_povm(double eta, double p_dark, int D);

// Windowed homodyne POVM with detection efficiency eta folded in:
// Lambda_eta^dag( integral over the window of |x><x| dx ).
FockOperator homodyne_window_povm(const Window& w, double eta, int D,
                                  int n_nodes = 8);

}  // namespace catgate
