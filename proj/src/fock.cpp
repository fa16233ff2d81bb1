#include "catgate/fock.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace catgate {

namespace {

std::vector<std::size_t> strides_of(const std::vector<int>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * static_cast<std::size_t>(dims[i + 1]);
  return s;
}

void check_mode(const std::vector<int>& dims, int mode) {
  if (mode < 0 || mode >= static_cast<int>(dims.size()))
    throw dimension_error("mode index out of range");
}

}  // namespace

FockKet basis_ket(int n, int D) {
  if (D < 1 || n < 0 || n >= D) throw dimension_error("basis level out of range");
  VecXc a = VecXc::Zero(D);
  a[n] = 1.0;
  return FockKet{std::move(a), {D}};
}

FockKet tensor(const FockKet& a, const FockKet& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  check_matrix_budget(static_cast<std::size_t>(a.amps.size()) * b.amps.size(), 1);
  VecXc out(a.amps.size() * b.amps.size());
  for (Eigen::Index i = 0; i < a.amps.size(); ++i)
    out.segment(i * b.amps.size(), b.amps.size()) = a.amps[i] * b.amps;
  return FockKet{std::move(out), std::move(dims)};
}

namespace {

MatXc kron(const MatXc& a, const MatXc& b) {
  check_matrix_budget(static_cast<std::size_t>(a.rows()) * b.rows(),
                      static_cast<std::size_t>(a.cols()) * b.cols());
  MatXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

FockOperator tensor(const FockOperator& a, const FockOperator& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  OpKind kind = (a.kind == b.kind) ? a.kind : OpKind::generic;
  return FockOperator{kron(a.m, b.m), std::move(dims), kind};
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  DensityOperator out{kron(a.m, b.m), std::move(dims)};
  out.trace_deficit = a.trace_deficit + b.trace_deficit;
  out.truncation_warning = a.truncation_warning || b.truncation_warning;
  return out;
}

DensityOperator projector(const FockKet& psi) {
  check_matrix_budget(psi.amps.size(), psi.amps.size());
  return DensityOperator{psi.amps * psi.amps.adjoint(), psi.dims};
}

FockOperator identity_op(const std::vector<int>& dims) {
  auto n = joint_dim(dims);
  check_matrix_budget(n, n);
  return FockOperator{MatXc::Identity(n, n), dims, OpKind::unitary};
}

FockOperator embed_single_mode(const MatXc& op1, OpKind kind,
                               const std::vector<int>& dims, int mode) {
  check_mode(dims, mode);
  if (op1.rows() != dims[mode] || op1.cols() != dims[mode])
    throw dimension_error("embedded operator does not match the mode cutoff");
  auto n = joint_dim(dims);
  check_matrix_budget(n, n);
  MatXc out = MatXc::Zero(n, n);
  auto strides = strides_of(dims);
  std::size_t sm = strides[mode];
  int Dm = dims[mode];
  // Enumerate joint indices with the embedded mode held at level zero, then
  // fill the Dm x Dm block attached to each such base index.
  for (std::size_t base = 0; base < n; ++base) {
    if ((base / sm) % static_cast<std::size_t>(Dm) != 0) continue;
    for (int r = 0; r < Dm; ++r)
      for (int c = 0; c < Dm; ++c)
        out(base + static_cast<std::size_t>(r) * sm,
            base + static_cast<std::size_t>(c) * sm) = op1(r, c);
  }
  return FockOperator{std::move(out), dims, kind};
}

FockOperator embed_two_mode(const MatXc& op2, OpKind kind,
                            const std::vector<int>& dims, int mode_a,
                            int mode_b) {
  check_mode(dims, mode_a);
  check_mode(dims, mode_b);
  if (mode_a == mode_b) throw dimension_error("two-mode embed needs distinct modes");
  int Da = dims[mode_a], Db = dims[mode_b];
  if (op2.rows() != static_cast<Eigen::Index>(Da) * Db || op2.cols() != op2.rows())
    throw dimension_error("embedded operator does not match the pair cutoffs");
  auto n = joint_dim(dims);
  check_matrix_budget(n, n);
  MatXc out = MatXc::Zero(n, n);
  auto strides = strides_of(dims);
  std::size_t sa = strides[mode_a], sb = strides[mode_b];
  for (std::size_t base = 0; base < n; ++base) {
    if ((base / sa) % static_cast<std::size_t>(Da) != 0) continue;
    if ((base / sb) % static_cast<std::size_t>(Db) != 0) continue;
    for (int ra = 0; ra < Da; ++ra)
      for (int rb = 0; rb < Db; ++rb)
        for (int ca = 0; ca < Da; ++ca)
          for (int cb = 0; cb < Db; ++cb)
            out(base + ra * sa + rb * sb, base + ca * sa + cb * sb) =
                op2(ra * Db + rb, ca * Db + cb);
  }
  return FockOperator{std::move(out), dims, kind};
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<int>& keep) {
  const auto& dims = rho.dims;
  std::vector<bool> kept(dims.size(), false);
  std::vector<int> out_dims;
  for (int k : keep) {
    check_mode(dims, k);
    if (kept[k]) throw dimension_error("duplicate mode in partial trace");
    kept[k] = true;
  }
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (kept[i]) out_dims.push_back(dims[i]);
  // `keep` must be given in mode order so the output layout is unambiguous.
  if (!std::is_sorted(keep.begin(), keep.end()))
    throw dimension_error("keep list must be sorted");

  auto n = joint_dim(dims);
  auto n_out = joint_dim(out_dims.empty() ? std::vector<int>{1} : out_dims);
  check_matrix_budget(n_out, n_out);

  // Decompose each joint index into its kept part and traced part.
  std::vector<std::size_t> kept_index(n, 0), traced_index(n, 0);
  auto strides = strides_of(dims);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t ki = 0, ti = 0;
    for (std::size_t mode = 0; mode < dims.size(); ++mode) {
      std::size_t level = (idx / strides[mode]) % static_cast<std::size_t>(dims[mode]);
      if (kept[mode])
        ki = ki * dims[mode] + level;
      else
        ti = ti * dims[mode] + level;
    }
    kept_index[idx] = ki;
    traced_index[idx] = ti;
  }

  MatXc out = MatXc::Zero(n_out, n_out);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (traced_index[i] == traced_index[j])
        out(kept_index[i], kept_index[j]) += rho.m(i, j);

  DensityOperator r{std::move(out),
                    out_dims.empty() ? std::vector<int>{1} : out_dims};
  r.trace_deficit = rho.trace_deficit;
  r.truncation_warning = rho.truncation_warning;
  return r;
}

DensityOperator apply_unitary(const FockOperator& U, const DensityOperator& rho) {
  if (U.dims != rho.dims) throw dimension_error("operator/state cutoff mismatch");
  DensityOperator out{U.m * rho.m * U.m.adjoint(), rho.dims};
  out.trace_deficit = rho.trace_deficit;
  out.truncation_warning = rho.truncation_warning;
  return out;
}

FockKet apply(const FockOperator& op, const FockKet& psi) {
  if (op.dims != psi.dims) throw dimension_error("operator/state cutoff mismatch");
  return FockKet{op.m * psi.amps, psi.dims};
}

cxd expect(const DensityOperator& rho, const FockOperator& op) {
  if (op.dims != rho.dims) throw dimension_error("operator/state cutoff mismatch");
  return (rho.m * op.m).trace();
}

void apply_single_mode_inplace(const MatXc& op1, VecXc& amps,
                               const std::vector<int>& dims, int mode) {
  check_mode(dims, mode);
  int Dm = dims[mode];
  if (op1.rows() != Dm || op1.cols() != Dm)
    throw dimension_error("operator does not match the mode cutoff");
  auto strides = strides_of(dims);
  std::size_t sm = strides[mode];
  std::size_t n = joint_dim(dims);
  VecXc sub(Dm);
  for (std::size_t base = 0; base < n; ++base) {
    if ((base / sm) % static_cast<std::size_t>(Dm) != 0) continue;
    for (int r = 0; r < Dm; ++r) sub[r] = amps[base + r * sm];
    sub = op1 * sub;
    for (int r = 0; r < Dm; ++r) amps[base + r * sm] = sub[r];
  }
}

void apply_two_mode_inplace(const MatXc& op2, VecXc& amps,
                            const std::vector<int>& dims, int mode_a,
                            int mode_b) {
  check_mode(dims, mode_a);
  check_mode(dims, mode_b);
  if (mode_a == mode_b) throw dimension_error("two-mode apply needs distinct modes");
  int Da = dims[mode_a], Db = dims[mode_b];
  if (op2.rows() != static_cast<Eigen::Index>(Da) * Db || op2.cols() != op2.rows())
    throw dimension_error("operator does not match the pair cutoffs");
  auto strides = strides_of(dims);
  std::size_t sa = strides[mode_a], sb = strides[mode_b];
  std::size_t n = joint_dim(dims);
  VecXc sub(static_cast<Eigen::Index>(Da) * Db);
  for (std::size_t base = 0; base < n; ++base) {
    if ((base / sa) % static_cast<std::size_t>(Da) != 0) continue;
    if ((base / sb) % static_cast<std::size_t>(Db) != 0) continue;
    for (int ra = 0; ra < Da; ++ra)
      for (int rb = 0; rb < Db; ++rb)
        sub[ra * Db + rb] = amps[base + ra * sa + rb * sb];
    sub = op2 * sub;
    for (int ra = 0; ra < Da; ++ra)
      for (int rb = 0; rb < Db; ++rb)
        amps[base + ra * sa + rb * sb] = sub[ra * Db + rb];
  }
}

double top_levels_population(const FockKet& psi) {
  auto strides = strides_of(psi.dims);
  std::size_t n = joint_dim(psi.dims);
  double pop = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    for (std::size_t mode = 0; mode < psi.dims.size(); ++mode) {
      int level = static_cast<int>((idx / strides[mode]) %
                                   static_cast<std::size_t>(psi.dims[mode]));
      if (level >= psi.dims[mode] - 2) {
        pop += std::norm(psi.amps[idx]);
        break;
      }
    }
  }
  return pop;
}

double top_levels_population(const DensityOperator& rho) {
  auto strides = strides_of(rho.dims);
  std::size_t n = joint_dim(rho.dims);
  double pop = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    for (std::size_t mode = 0; mode < rho.dims.size(); ++mode) {
      int level = static_cast<int>((idx / strides[mode]) %
                                   static_cast<std::size_t>(rho.dims[mode]));
      if (level >= rho.dims[mode] - 2) {
        pop += rho.m(idx, idx).real();
        break;
      }
    }
  }
  return pop;
}

double hermiticity_defect(const MatXc& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const MatXc& hermitian) {
  Eigen::SelfAdjointEigenSolver<MatXc> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace catgate
