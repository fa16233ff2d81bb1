#pragma once
// Dense complex linear algebra over truncated single- and multi-mode Fock
// spaces: tensor products, partial traces, operator application, and
// truncation-error accounting.
//
// Mode ordering is fixed throughout: for mode cutoffs (D1, ..., Dk) the joint
// index of |n1 n2 ... nk> is ((n1*D2 + n2)*D3 + ...)*Dk + nk, i.e. the first
// mode varies slowest. All multimode constructors use this layout.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace catgate {

using cxd   = std::complex<double>;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;
using VecXr = Eigen::VectorXd;
using MatXr = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error taxonomy. All domain failures are exceptions; numerical tolerance
// violations that merely indicate imprecision set flags instead (see
// DensityOperator::truncation_warning).
// ---------------------------------------------------------------------------

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested object exceeds the configured dense-matrix memory budget.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A constructed state leaks more probability past the cutoff than allowed.
struct truncation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Conditioning on an (almost) impossible outcome.
struct conditioning_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal consistency failure (e.g. a non-monotone tabulated CDF).
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Dense-matrix memory budget: largest allocation allowed for a single joint
// operator/state matrix.
inline constexpr std::size_t k_matrix_budget_bytes = std::size_t{1} << 29;  // 512 MiB

// Leakage threshold for constructed physical states (population at the top
// two Fock levels).
inline constexpr double k_leakage_tol = 1e-6;

inline std::size_t joint_dim(const std::vector<int>& dims) {
  std::size_t d = 1;
  for (int di : dims) {
    if (di < 1) throw dimension_error("mode cutoff must be >= 1");
    d *= static_cast<std::size_t>(di);
  }
  return d;
}

inline void check_matrix_budget(std::size_t rows, std::size_t cols) {
  if (rows != 0 && rows * cols * sizeof(cxd) > k_matrix_budget_bytes)
    throw capacity_error("dense matrix of " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " exceeds the memory budget");
}

enum class OpKind { unitary, annihilation, povm, generic };

// ---------------------------------------------------------------------------
// Value types
// ---------------------------------------------------------------------------

// Pure state over one or more truncated modes.
struct FockKet {
  VecXc amps;
  std::vector<int> dims;

  FockKet() = default;
  FockKet(VecXc a, std::vector<int> d) : amps(std::move(a)), dims(std::move(d)) {
    if (static_cast<std::size_t>(amps.size()) != joint_dim(dims))
      throw dimension_error("ket length does not match mode cutoffs");
  }

  int modes() const { return static_cast<int>(dims.size()); }
  double norm2() const { return amps.squaredNorm(); }

  FockKet normalized() const {
    double n2 = norm2();
    if (!(n2 > 0.0)) throw dimension_error("cannot normalize a zero ket");
    return FockKet{amps / std::sqrt(n2), dims};
  }
};

// Operator tagged with its algebraic role; single- or multi-mode.
struct FockOperator {
  MatXc m;
  std::vector<int> dims;
  OpKind kind = OpKind::generic;

  FockOperator() = default;
  FockOperator(MatXc mat, std::vector<int> d, OpKind k)
      : m(std::move(mat)), dims(std::move(d)), kind(k) {
    auto n = joint_dim(dims);
    if (static_cast<std::size_t>(m.rows()) != n ||
        static_cast<std::size_t>(m.cols()) != n)
      throw dimension_error("operator shape does not match mode cutoffs");
  }
};

// Mixed state with truncation bookkeeping. `trace_deficit` accumulates
// probability lost past the cutoffs; `truncation_warning` is raised whenever a
// constructed state populates the top two levels of any mode beyond tolerance.
struct DensityOperator {
  MatXc m;
  std::vector<int> dims;
  double trace_deficit = 0.0;
  bool truncation_warning = false;

  DensityOperator() = default;
  DensityOperator(MatXc mat, std::vector<int> d)
      : m(std::move(mat)), dims(std::move(d)) {
    auto n = joint_dim(dims);
    if (static_cast<std::size_t>(m.rows()) != n ||
        static_cast<std::size_t>(m.cols()) != n)
      throw dimension_error("density matrix shape does not match mode cutoffs");
  }

  int modes() const { return static_cast<int>(dims.size()); }
  double trace_re() const { return m.trace().real(); }
};

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

FockKet basis_ket(int n, int D);
FockKet tensor(const FockKet& a, const FockKet& b);
FockOperator tensor(const FockOperator& a, const FockOperator& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
DensityOperator projector(const FockKet& psi);
FockOperator identity_op(const std::vector<int>& dims);

// Embed a single-mode operator at `mode` (0-based) into the joint space.
FockOperator embed_single_mode(const MatXc& op1, OpKind kind,
                               const std::vector<int>& dims, int mode);

// Embed a two-mode operator acting on the ordered pair (mode_a, mode_b); the
// operator's row index is n_a * D_b + n_b.
FockOperator embed_two_mode(const MatXc& op2, OpKind kind,
                            const std::vector<int>& dims, int mode_a,
                            int mode_b);

// ---------------------------------------------------------------------------
// Core operations
// ---------------------------------------------------------------------------

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<int>& keep);
DensityOperator apply_unitary(const FockOperator& U, const DensityOperator& rho);
FockKet apply(const FockOperator& op, const FockKet& psi);
cxd expect(const DensityOperator& rho, const FockOperator& op);

// In-place application of a two-mode operator to a multimode ket; the fast
// path used by the conditioned-gate simulation.
void apply_two_mode_inplace(const MatXc& op2, VecXc& amps,
                            const std::vector<int>& dims, int mode_a,
                            int mode_b);
void apply_single_mode_inplace(const MatXc& op1, VecXc& amps,
                               const std::vector<int>& dims, int mode);

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

// Population of the top two Fock levels of every mode (leakage monitor).
double top_levels_population(const FockKet& psi);
double top_levels_population(const DensityOperator& rho);

double hermiticity_defect(const MatXc& m);
double min_eigenvalue(const MatXc& hermitian);

}  // namespace catgate
