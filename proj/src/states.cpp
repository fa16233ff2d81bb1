#include "catgate/states.hpp"

#include "catgate/optics.hpp"

#include <cmath>

namespace catgate {

namespace {

// Enforce the leakage budget on a freshly built pure state, then renormalize.
FockKet finalize_pure(VecXc amps, int D, const char* what) {
  double total = amps.squaredNorm();
  if (!(total > 0.0)) throw truncation_error(std::string(what) + ": zero norm");
  double top = 0.0;
  for (int n = std::max(0, D - 2); n < D; ++n) top += std::norm(amps[n]);
  if (top / total > k_leakage_tol)
    throw truncation_error(std::string(what) +
                           ": population beyond the cutoff exceeds tolerance");
  return FockKet{amps / std::sqrt(total), {D}};
}

}  // namespace

FockKet coherent(cxd alpha, int D) {
  if (D < 1) throw dimension_error("cutoff must be >= 1");
  VecXc amps(D);
  amps[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < D; ++n) amps[n] = amps[n - 1] * alpha / std::sqrt(double(n));
  return finalize_pure(std::move(amps), D, "coherent");
}

FockKet coherent(double alpha, int D) { return coherent(cxd{alpha, 0.0}, D); }

FockKet cat(double alpha, int sign, int D) {
  if (sign != 1 && sign != -1) throw dimension_error("cat sign must be +1 or -1");
  FockKet plus = coherent(alpha, D);
  FockKet minus = coherent(-alpha, D);
  VecXc amps = plus.amps + double(sign) * minus.amps;
  return finalize_pure(std::move(amps), D, "cat");
}

FockKet squeezed_vacuum(double s, int D) {
  if (D < 1) throw dimension_error("cutoff must be >= 1");
  // S(s)|0> = cosh(s)^{-1/2} sum_m (-tanh s)^m sqrt((2m)!)/(2^m m!) |2m>,
  // generated by the two-step recurrence below.
  VecXc amps = VecXc::Zero(D);
  amps[0] = 1.0 / std::sqrt(std::cosh(s));
  for (int n = 0; n + 2 < D; n += 2)
    amps[n + 2] = -std::tanh(s) * std::sqrt((n + 1.0) / (n + 2.0)) * amps[n];
  return finalize_pure(std::move(amps), D, "squeezed_vacuum");
}

DensityOperator thermal(double nbar, int D) {
  if (nbar < 0.0) throw dimension_error("nbar must be >= 0");
  if (D < 1) throw dimension_error("cutoff must be >= 1");
  MatXc m = MatXc::Zero(D, D);
  double total = 0.0;
  for (int n = 0; n < D; ++n) {
    double p = std::pow(nbar / (1.0 + nbar), n) / (1.0 + nbar);
    m(n, n) = p;
    total += p;
  }
  DensityOperator rho{m / total, {D}};
  rho.trace_deficit = 1.0 - total;
  double top = (m(D - 1, D - 1).real() + (D >= 2 ? m(D - 2, D - 2).real() : 0.0)) / total;
  rho.truncation_warning = top > k_leakage_tol;
  return rho;
}

DensityOperator squeezed_thermal(const ResourceSpec& spec, int D) {
  DensityOperator th = thermal(spec.nbar, D);
  FockOperator S = squeeze(spec.s, D);
  DensityOperator rho = apply_unitary(S, th);
  double tr = rho.trace_re();
  rho.trace_deficit += 1.0 - tr + th.trace_deficit;
  rho.m /= tr;
  rho.truncation_warning =
      rho.truncation_warning || top_levels_population(rho) > k_leakage_tol;
  return rho;
}

FockKet csq_ket(const CsqSpec& spec, int D) {
  FockKet plus = coherent(spec.alpha, D);
  FockKet minus = coherent(-spec.alpha, D);
  VecXc amps = spec.u() * plus.amps + spec.v() * minus.amps;
  return finalize_pure(std::move(amps), D, "csq_ket");
}

VecXr quadrature_amplitudes(double x, int D) {
  if (D < 1) throw dimension_error("cutoff must be >= 1");
  VecXr psi(D);
  psi[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (D > 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int n = 1; n + 1 < D; ++n)
    psi[n + 1] = std::sqrt(2.0 / (n + 1.0)) * x * psi[n] -
                 std::sqrt(n / (n + 1.0)) * psi[n - 1];
  return psi;
}

}  // namespace catgate
