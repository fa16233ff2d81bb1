#pragma once
// The probabilistic Hadamard gate for coherent-state qubits, in three levels
// of modeling: analytic ideal-resource output, analytic squeezed-resource
// output, and the full realistic four-mode conditioned simulation.
//
// Mode layout of the simulation (0-based): 0 = displaced input, 1 = vacuum
// tap of the input, 2 = vacuum tap of the resource routed to the APD,
// 3 = resource / output. The input tap pairs modes (0,1), the resource tap
// pairs (3,2), the central beam splitter pairs (1,2); the resource tap is
// applied first, then the input tap, then the central beam splitter. The
// homodyne window conditions mode 0, the APD click conditions mode 2, and the
// output is mode 3 after tracing everything else out.
//
// Sign convention for the resource: ResourceSpec::s in GateParams is the
// squeezing magnitude, and the gate squeezes the resource along p (i.e. it
// applies S(-s) to the thermal state), which is the orientation that makes
// the gate act as a Hadamard. The analytic helpers below take a signed s.

#include "catgate/detectors.hpp"
#include "catgate/fock.hpp"
#include "catgate/states.hpp"

#include <array>
#include <vector>

namespace catgate {

struct GateParams {
  double alpha = 0.8;
  double t_bs_sq = 0.25;    // central beam-splitter transmittance
  double r_abs1_sq = 0.015; // input-tap reflectance (power)
  double r_abs2_sq = 0.075; // resource-tap reflectance (power)
  ResourceSpec resource{0.2993, 0.025};
  DetectorSpec detectors{};
  std::array<int, 4> dims{16, 4, 4, 16};
};

struct GateResult {
  DensityOperator rho_out;       // conditioned single-mode output, trace 1
  double p_success = 0.0;        // P(click AND x in window) per accepted pulse
  double p_apd = 0.0;            // P(click) irrespective of the homodyne window
  double fidelity_vs_ideal = 0.0;  // vs the ideal Hadamard image at nominal alpha
  double target_alpha_opt = 0.0;   // cat amplitude maximizing the fidelity
};

struct BalanceResult {
  bool feasible = false;
  Window window{};
  double ratio = 0.0;    // P_S(theta=0) / P_S(theta=pi/2) at the window
  double p_plus = 0.0;   // P_S for input |alpha>  (theta = 0)
  double p_minus = 0.0;  // P_S for input |-alpha> (theta = pi/2)
};

// ---------------------------------------------------------------------------
// Analytic gate outputs
// ---------------------------------------------------------------------------

// Ideal-resource output: u cat+ + Y1 (u + v Z) cat-, normalized, with
// Y1 = (t/2r) sqrt(N-/N+) and Z(x) = exp(4 alpha^2 - 2 sqrt(2) alpha x).
FockKet ideal_output(const CsqSpec& spec, double t, double r, double x, int D);

// Squeezed-resource output: u S(s)|0> + Y2 (u + v Z) S(s) a^dag |0>,
// normalized, with Y2 = -t sinh(s)/(2 r alpha). s is signed; s < 0 squeezes p.
FockKet squeezed_resource_output(const CsqSpec& spec, double t, double r,
                                 double s, double x, int D);

double y1_coefficient(double t, double r, double alpha);
double y2_coefficient(double t, double r, double s, double alpha);

// Solves |Z(x) Y2| = 1: x = (4 alpha^2 + ln|Y2|)/(2 sqrt(2) alpha).
// Requires 0 < |Y2| <= 1; |Y2| > 1 means no heralding point with Z >= 1 and
// is reported as infeasible by throwing conditioning_error.
double optimal_heralding_x(double t, double r, double s, double alpha);

// Ideal Hadamard image of a CSQ: u cat+ + v cat- (normalized cats at
// target_alpha), normalized. Leakage past the cutoff is not checked here so
// the map stays total; callers that care inspect the cutoff themselves.
FockKet hadamard_target(const CsqSpec& spec, double target_alpha, int D);

// ---------------------------------------------------------------------------
// Full conditioned simulation
// ---------------------------------------------------------------------------

// Precomputes the unitary part of the four-mode circuit for one parameter set
// (per-branch evolved basis tensors over the resource's thermal ensemble) so
// that heralding effects, Kraus families and state outputs can be evaluated
// cheaply for many inputs and window positions.
class GateEngine {
 public:
  explicit GateEngine(const GateParams& params);
  // Testing hook: override the APD conditioning diagonal (e.g. a
  // single-photon projector) instead of the click POVM.
  GateEngine(const GateParams& params, const VecXr& apd_diag);

  const GateParams& params() const { return params_; }

  // Mode-0 ket after displacement: u|2 alpha> + v|0>, normalized. Sets
  // *truncation_warning when the cutoff leaks.
  VecXc displaced_input(const CsqSpec& spec,
                        bool* truncation_warning = nullptr) const;

  // Heralding effect on the input mode: E = <U^dag (Pi_HD x Pi_click) U>
  // contracted over vacuum ancillas and the resource ensemble.
  MatXc joint_effect(const Window& w) const;
  // Same with an arbitrary mode-0 effect instead of the window POVM.
  MatXc joint_effect_with(const MatXc& hd_effect) const;

  // APD-click-only effect (no homodyne condition).
  const MatXc& apd_effect() const { return apd_effect_; }

  // Kraus family of the heralded channel (input mode ket -> unnormalized
  // output mode ket); sum_K K^dag K equals joint_effect to tolerance.
  std::vector<MatXc> kraus_family(const Window& w) const;
  std::vector<MatXc> kraus_family_with(const MatXc& hd_effect) const;

 private:
  void build();

  GateParams params_;
  bool apd_override_ = false;
  VecXr apd_diag_;                // click weights per mode-2 photon number
  std::vector<double> weights_;   // resource eigenbranch weights (sum 1)
  std::vector<MatXc> branch_;     // per branch: joint_dim x D0 evolved columns
  MatXc apd_effect_;
};

GateResult simulate_gate(const GateParams& params, const CsqSpec& spec);
// Engine-reusing variant for sweeps.
GateResult simulate_gate(const GateEngine& engine, const CsqSpec& spec);

// Independent slow path: dense joint-space evaluation of the same
// conditioning, used to cross-check the engine (intended for reduced cutoffs).
GateResult gate_dense_reference(const GateParams& params, const CsqSpec& spec);

// Searches x0 (at fixed half-width delta) such that the success probabilities
// of the two basis inputs agree within 5%; scans x0 in [0, 3].
BalanceResult balance_window(const GateParams& params, double delta);
BalanceResult balance_window(const GateParams& params);

}  // namespace catgate
