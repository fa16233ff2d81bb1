#pragma once
// Figures of merit and paper-level experiments: fidelity, optimal-target
// search, Wigner functions (exact displaced-parity evaluation), gate-fidelity
// curves with squeezing optimization, Bloch-sphere sweeps, and the
// teleportation-style process fidelity.

#include "catgate/fock.hpp"
#include "catgate/gate.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace catgate {

// <target| rho |target>, clamped to [0, 1].
double fidelity(const DensityOperator& rho, const FockKet& target);
double overlap_fidelity(const FockKet& a, const FockKet& b);

struct TargetFit {
  double alpha_star = 0.0;
  double f_star = 0.0;
};

// Maximizes fidelity(rho, cat_sign(alpha')) over alpha' in [lo, hi]
// (coarse scan + golden-section refinement to 1e-3).
TargetFit best_target_alpha(const DensityOperator& rho, int sign, double lo,
                            double hi);
// Same against the Hadamard image of an arbitrary CSQ Bloch point.
TargetFit best_target_fit(const DensityOperator& rho, const CsqSpec& spec,
                          double lo, double hi);

// Wigner function, normalized so that its integral over phase space is 1.
// Evaluated exactly for the truncated state via closed-form displacement
// matrix elements (associated Laguerre polynomials), so no additional
// truncation error is introduced at large |x + ip|.
double wigner(const DensityOperator& rho, double x, double p);
MatXr wigner_grid(const DensityOperator& rho, const VecXr& xs, const VecXr& ps,
                  int threads = 1);

// Exact matrix elements <m'|D(gamma)|m> on a D-dimensional truncation.
MatXc displacement_matrix_exact(cxd gamma, int D);

struct CurvePoint {
  double alpha = 0.0;
  double f_ideal = 0.0;      // ideal (cat) resource
  double f_squeezed = 0.0;   // squeezed resource, maximized over s
  double s_opt_db = 0.0;     // maximizing squeezing, in dB
};

// Gate-fidelity curves versus CSQ amplitude. The fidelity at each amplitude
// is the Bloch-sphere-uniform mean over input qubits (12-node Gauss-Legendre
// in the polar direction x 24 azimuthal points) at the |Z Y| = 1 heralding
// point; the squeezed-resource curve maximizes this mean over the squeezing
// parameter. Beam-splitter transmittance is the gate default t^2 = 1/4.
std::vector<CurvePoint> fidelity_curve(const VecXr& alphas, int D = 24);

struct BlochGrid {
  VecXr thetas;  // inclusive grid on [0, pi/2]
  VecXr phis;    // half-open grid on [0, 2 pi)
  MatXr f;       // fidelity vs ideal Hadamard image at nominal alpha
  MatXr ps;      // success probability
  double mean_f = 0.0;
  double mean_ps = 0.0;
  double min_f = 0.0;
  double max_f = 0.0;
  std::vector<std::pair<int, int>> flagged;  // degenerate-conditioning cells
};

BlochGrid bloch_sweep(const GateParams& params, int n_theta, int n_phi,
                      int threads = 1);

// Fidelity of the gate acting on half of |alpha,alpha> + |-alpha,-alpha>
// against the ideal image |alpha>|cat+> + |-alpha>|cat->. With ideal_channel
// the simulated gate is replaced by the exact Hadamard map (harness check).
double process_fidelity(const GateParams& params, bool ideal_channel = false);

// Golden-section maximization on [lo, hi]; returns (argmax, max).
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double lo, double hi, double tol);

VecXr linspace(double lo, double hi, int n);

}  // namespace catgate
