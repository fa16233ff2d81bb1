#pragma once
// Synthetic homodyne data generation (inverse-CDF sampling from the exact
// quadrature distribution) and iterative maximum-likelihood state
// reconstruction (RhoR scheme) with optional detector-efficiency correction.

#include "catgate/fock.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace catgate {

struct dataset_parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureRecord {
  double theta = 0.0;  // local-oscillator phase
  double x = 0.0;      // quadrature outcome
};

struct QuadratureDataset {
  std::vector<QuadratureRecord> records;
  double eta = 1.0;         // detection efficiency assumed at acquisition
  std::uint64_t seed = 0;   // acquisition seed (metadata)
};

// Default local-oscillator phases: k*pi/12 for k = 0..11.
VecXr default_phases(int n = 12);

// Draws n_per_phase samples per phase from p(x|theta) =
// tr(loss_eta(rho) |x_theta><x_theta|), tabulated on [-6, 6] with step 0.01
// and inverted by linear interpolation. Deterministic for a given seed.
QuadratureDataset sample_homodyne(const DensityOperator& rho,
                                  const VecXr& phases, int n_per_phase,
                                  double eta, std::uint64_t seed);

struct ReconstructionReport {
  DensityOperator rho_hat;
  std::vector<double> loglik;  // per-iteration log-likelihood trace
  bool converged = false;
  int iterations = 0;
  int floored_bins = 0;  // bins regularized against vanishing probability
};

// Iterates rho <- N[R(rho) rho R(rho)], R = sum_i f_i Pi_i / p_i(rho), with
// POVM elements from binned (theta, x) records (bin width 0.1 on [-6, 6]).
// eta_correction < 1 folds the loss-map adjoint into each bin POVM so the
// pre-loss state is reconstructed; eta_correction = 1 reconstructs the
// detected (lossy) state.
ReconstructionReport maxlik_reconstruct(const QuadratureDataset& data, int D,
                                        double eta_correction,
                                        int max_iter = 2000,
                                        double tol = 1e-10);

// Text round trip. Format: header line
//   # catgate-quadrature v1, eta=<float>, seed=<int>
// followed by one record per line: theta<TAB>x. Malformed lines are rejected
// with line-numbered errors.
void write_dataset(const QuadratureDataset& data, std::ostream& os);
QuadratureDataset read_dataset(std::istream& is);

}  // namespace catgate
