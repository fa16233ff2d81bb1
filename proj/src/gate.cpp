#include "catgate/gate.hpp"

#include "catgate/analysis.hpp"
#include "catgate/optics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace catgate {

namespace {

constexpr double k_branch_weight_floor = 1e-14;
constexpr double k_effect_eig_floor = 1e-14;
constexpr double k_degenerate_ps = 1e-300;
constexpr double k_z_log_cap = 300.0;  // keeps exp(Z) finite in double

// Unchecked coherent amplitudes (no leakage throw); used for internal state
// assembly where a warning flag is preferred over a hard error.
VecXc coherent_amps(double alpha, int D) {
  VecXc amps(D);
  amps[0] = std::exp(-0.5 * alpha * alpha);
  for (int n = 1; n < D; ++n) amps[n] = amps[n - 1] * alpha / std::sqrt(double(n));
  return amps;
}

VecXc cat_amps(double alpha, int sign, int D) {
  VecXc plus = coherent_amps(alpha, D);
  VecXc minus = coherent_amps(-alpha, D);
  VecXc amps = plus + double(sign) * minus;
  return amps / amps.norm();
}

double top_two_fraction(const VecXc& amps) {
  int D = static_cast<int>(amps.size());
  double top = 0.0;
  for (int n = std::max(0, D - 2); n < D; ++n) top += std::norm(amps[n]);
  return top / amps.squaredNorm();
}

void validate(const GateParams& p) {
  auto ratio_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!(p.alpha > 0.0)) throw dimension_error("alpha must be > 0");
  if (!ratio_ok(p.t_bs_sq) || !ratio_ok(p.r_abs1_sq) || !ratio_ok(p.r_abs2_sq))
    throw dimension_error("beam-splitter ratios must lie in [0, 1]");
  if (!(p.resource.nbar >= 0.0)) throw dimension_error("nbar must be >= 0");
  for (int d : p.dims)
    if (d < 2) throw dimension_error("mode cutoffs must be >= 2");
}

double z_factor(double alpha, double x) {
  double lz = 4.0 * alpha * alpha - 2.0 * std::sqrt(2.0) * alpha * x;
  return std::exp(std::min(lz, k_z_log_cap));
}

}  // namespace

double y1_coefficient(double t, double r, double alpha) {
  if (!(r > 0.0)) throw dimension_error("Y1 requires r > 0");
  if (!(alpha > 0.0)) throw dimension_error("Y1 requires alpha > 0");
  double e = std::exp(-2.0 * alpha * alpha);
  double n_minus = 2.0 * (1.0 - e), n_plus = 2.0 * (1.0 + e);
  return (t / (2.0 * r)) * std::sqrt(n_minus / n_plus);
}

double y2_coefficient(double t, double r, double s, double alpha) {
  if (!(r > 0.0)) throw dimension_error("Y2 requires r > 0");
  if (!(alpha > 0.0)) throw dimension_error("Y2 requires alpha > 0");
  return -t * std::sinh(s) / (2.0 * r * alpha);
}

FockKet ideal_output(const CsqSpec& spec, double t, double r, double x, int D) {
  if (std::abs(t * t + r * r - 1.0) > 1e-12)
    throw dimension_error("ideal_output requires t^2 + r^2 = 1");
  if (!(spec.alpha > 0.0)) throw dimension_error("ideal_output requires alpha > 0");
  double y1 = y1_coefficient(t, r, spec.alpha);
  cxd w = y1 * (spec.u() + spec.v() * z_factor(spec.alpha, x));
  VecXc amps = spec.u() * cat_amps(spec.alpha, +1, D) +
               w * cat_amps(spec.alpha, -1, D);
  double n = amps.norm();
  if (!(n > 0.0)) throw conditioning_error("ideal_output: zero-norm output");
  return FockKet{amps / n, {D}};
}

FockKet squeezed_resource_output(const CsqSpec& spec, double t, double r,
                                 double s, double x, int D) {
  if (std::abs(t * t + r * r - 1.0) > 1e-12)
    throw dimension_error("squeezed_resource_output requires t^2 + r^2 = 1");
  double y2 = y2_coefficient(t, r, s, spec.alpha);
  MatXc S = squeeze(s, D).m;
  VecXc s0 = S.col(0);          // S(s)|0>
  VecXc s1 = S.col(1);          // S(s) a^dag |0>
  cxd w = y2 * (spec.u() + spec.v() * z_factor(spec.alpha, x));
  VecXc amps = spec.u() * s0 + w * s1;
  double n = amps.norm();
  if (!(n > 0.0)) throw conditioning_error("squeezed_resource_output: zero norm");
  return FockKet{amps / n, {D}};
}

double optimal_heralding_x(double t, double r, double s, double alpha) {
  double y2 = y2_coefficient(t, r, s, alpha);
  if (y2 == 0.0) throw dimension_error("optimal_heralding_x requires Y2 != 0");
  double ay = std::abs(y2);
  if (ay > 1.0)
    throw conditioning_error(
        "optimal_heralding_x: |Y2| > 1, no heralding point with Z >= 1");
  return (4.0 * alpha * alpha + std::log(ay)) / (2.0 * std::sqrt(2.0) * alpha);
}

FockKet hadamard_target(const CsqSpec& spec, double target_alpha, int D) {
  VecXc amps = spec.u() * cat_amps(target_alpha, +1, D) +
               spec.v() * cat_amps(target_alpha, -1, D);
  double n = amps.norm();
  if (!(n > 0.0)) throw conditioning_error("hadamard_target: zero-norm target");
  return FockKet{amps / n, {D}};
}

// ---------------------------------------------------------------------------
// GateEngine
// ---------------------------------------------------------------------------

GateEngine::GateEngine(const GateParams& params) : params_(params) { build(); }

GateEngine::GateEngine(const GateParams& params, const VecXr& apd_diag)
    : params_(params), apd_override_(true), apd_diag_(apd_diag) {
  if (apd_diag.size() != params.dims[2])
    throw dimension_error("APD override diagonal does not match mode-2 cutoff");
  build();
}

void GateEngine::build() {
  validate(params_);
  const auto& p = params_;
  std::vector<int> dims(p.dims.begin(), p.dims.end());
  int D0 = dims[0], D2 = dims[2], D3 = dims[3];
  std::size_t n = joint_dim(dims);
  check_matrix_budget(n, static_cast<std::size_t>(D0));

  if (!apd_override_) {
    FockOperator click =
        apd_click_povm(p.detectors.eta_apd, p.detectors.p_dark, D2);
    apd_diag_ = click.m.diagonal().real();
  }

  // Resource ensemble: squeezed (along p) thermal eigenbranches.
  MatXc S = squeeze(-p.resource.s, D3).m;
  VecXr th = thermal(p.resource.nbar, D3).m.diagonal().real();
  weights_.clear();
  std::vector<int> kept;
  for (int k = 0; k < D3; ++k) {
    if (th[k] <= k_branch_weight_floor && k > 0) break;
    kept.push_back(k);
  }

  // Circuit unitaries on the bare mode pairs.
  MatXc u_abs2 =
      beam_splitter(BeamSplitterSpec::from_reflectance(p.r_abs2_sq),
                    {dims[3], dims[2]})
          .m;
  MatXc u_abs1 =
      beam_splitter(BeamSplitterSpec::from_reflectance(p.r_abs1_sq),
                    {dims[0], dims[1]})
          .m;
  MatXc u_bs = beam_splitter(BeamSplitterSpec::from_t(std::sqrt(p.t_bs_sq)),
                             {dims[1], dims[2]})
                   .m;

  branch_.clear();
  double ensemble_trace = 0.0;
  std::size_t stride0 = n / static_cast<std::size_t>(D0);
  for (int k : kept) {
    VecXc chi = S.col(k);
    ensemble_trace += th[k] * chi.squaredNorm();
    MatXc T(n, D0);
    VecXc psi(n);
    for (int n0 = 0; n0 < D0; ++n0) {
      psi.setZero();
      // |n0, 0, 0, chi> in the joint layout (mode 0 slowest, mode 3 fastest).
      for (int d = 0; d < D3; ++d)
        psi[static_cast<std::size_t>(n0) * stride0 + d] = chi[d];
      apply_two_mode_inplace(u_abs2, psi, dims, 3, 2);
      apply_two_mode_inplace(u_abs1, psi, dims, 0, 1);
      apply_two_mode_inplace(u_bs, psi, dims, 1, 2);
      T.col(n0) = psi;
    }
    branch_.push_back(std::move(T));
    weights_.push_back(th[k]);
  }
  for (double& w : weights_) w /= ensemble_trace;

  // Click-only effect on the input mode.
  apd_effect_ = MatXc::Zero(D0, D0);
  std::size_t d3 = static_cast<std::size_t>(D3);
  for (std::size_t b = 0; b < branch_.size(); ++b) {
    MatXc weighted = branch_[b];
    for (std::size_t row = 0; row < n; ++row)
      weighted.row(row) *= apd_diag_[static_cast<int>((row / d3) % D2)];
    apd_effect_ += weights_[b] * (branch_[b].adjoint() * weighted);
  }
  apd_effect_ = 0.5 * (apd_effect_ + MatXc(apd_effect_.adjoint()));
}

VecXc GateEngine::displaced_input(const CsqSpec& spec,
                                  bool* truncation_warning) const {
  int D0 = params_.dims[0];
  // D(alpha) maps u|a> + v|-a> to u|2a> + v|0>.
  VecXc amps = spec.u() * coherent_amps(2.0 * spec.alpha, D0);
  amps[0] += spec.v();
  double n2 = amps.squaredNorm();
  if (!(n2 > 0.0)) throw dimension_error("displaced input has zero norm");
  if (truncation_warning)
    *truncation_warning = top_two_fraction(amps) > k_leakage_tol;
  return amps / std::sqrt(n2);
}

MatXc GateEngine::joint_effect(const Window& w) const {
  MatXc pi_hd = homodyne_window_povm(w, params_.detectors.eta_hd,
                                     params_.dims[0], 8)
                    .m;
  return joint_effect_with(pi_hd);
}

MatXc GateEngine::joint_effect_with(const MatXc& hd_effect) const {
  const auto& p = params_;
  std::vector<int> dims(p.dims.begin(), p.dims.end());
  int D0 = dims[0], D2 = dims[2], D3 = dims[3];
  std::size_t n = joint_dim(dims);
  std::size_t d3 = static_cast<std::size_t>(D3);
  MatXc e = MatXc::Zero(D0, D0);
  VecXc col(n);
  for (std::size_t b = 0; b < branch_.size(); ++b) {
    MatXc m = branch_[b];
    for (std::size_t row = 0; row < n; ++row)
      m.row(row) *= apd_diag_[static_cast<int>((row / d3) % D2)];
    for (int j = 0; j < D0; ++j) {
      col = m.col(j);
      apply_single_mode_inplace(hd_effect, col, dims, 0);
      m.col(j) = col;
    }
    e += weights_[b] * (branch_[b].adjoint() * m);
  }
  return 0.5 * (e + MatXc(e.adjoint()));
}

std::vector<MatXc> GateEngine::kraus_family(const Window& w) const {
  MatXc pi_hd = homodyne_window_povm(w, params_.detectors.eta_hd,
                                     params_.dims[0], 8)
                    .m;
  return kraus_family_with(pi_hd);
}

std::vector<MatXc> GateEngine::kraus_family_with(const MatXc& hd_effect) const {
  const auto& p = params_;
  std::vector<int> dims(p.dims.begin(), p.dims.end());
  int D0 = dims[0], D1 = dims[1], D2 = dims[2], D3 = dims[3];

  Eigen::SelfAdjointEigenSolver<MatXc> es(hd_effect);
  std::vector<MatXc> family;
  MatXc k(D3, D0);
  for (std::size_t b = 0; b < branch_.size(); ++b) {
    const MatXc& T = branch_[b];
    for (int h = 0; h < D0; ++h) {
      double mu = es.eigenvalues()[h];
      if (mu <= k_effect_eig_floor) continue;
      VecXc hvec = es.eigenvectors().col(h);
      for (int c = 0; c < D2; ++c) {
        double sigma = apd_diag_[c];
        if (sigma <= 0.0) continue;
        for (int m1 = 0; m1 < D1; ++m1) {
          double coef = std::sqrt(weights_[b] * mu * sigma);
          k.setZero();
          for (int a = 0; a < D0; ++a) {
            cxd ha = std::conj(hvec[a]);
            if (ha == cxd{0.0, 0.0}) continue;
            std::size_t base =
                ((static_cast<std::size_t>(a) * D1 + m1) * D2 + c) * D3;
            for (int n0 = 0; n0 < D0; ++n0)
              for (int d = 0; d < D3; ++d) k(d, n0) += ha * T(base + d, n0);
          }
          family.push_back(coef * k);
        }
      }
    }
  }
  return family;
}

// ---------------------------------------------------------------------------
// Simulation entry points
// ---------------------------------------------------------------------------

namespace {

GateResult condition_output(const GateEngine& engine, const CsqSpec& spec,
                            const MatXc& joint, const std::vector<MatXc>& kraus) {
  const GateParams& p = engine.params();
  bool warn = false;
  VecXc psi = engine.displaced_input(spec, &warn);

  double ps_effect = (psi.adjoint() * joint * psi).value().real();
  if (!(ps_effect > k_degenerate_ps))
    throw conditioning_error("success probability vanished; cannot condition");

  int D3 = p.dims[3];
  MatXc rho = MatXc::Zero(D3, D3);
  double ps_kraus = 0.0;
  for (const auto& k : kraus) {
    VecXc out = k * psi;
    ps_kraus += out.squaredNorm();
    rho += out * out.adjoint();
  }
  rho /= ps_kraus;

  GateResult res;
  res.rho_out = DensityOperator{std::move(rho), {D3}};
  res.rho_out.truncation_warning =
      warn || top_levels_population(res.rho_out) > k_leakage_tol;
  res.p_success = ps_effect;
  res.p_apd = (psi.adjoint() * engine.apd_effect() * psi).value().real();

  FockKet target = hadamard_target(spec, p.alpha, D3);
  res.fidelity_vs_ideal = fidelity(res.rho_out, target);
  auto fit = best_target_fit(res.rho_out, spec, 0.25 * p.alpha, 2.0 * p.alpha);
  res.target_alpha_opt = fit.alpha_star;
  return res;
}

}  // namespace

GateResult simulate_gate(const GateEngine& engine, const CsqSpec& spec) {
  const Window& w = engine.params().detectors.window;
  return condition_output(engine, spec, engine.joint_effect(w),
                          engine.kraus_family(w));
}

GateResult simulate_gate(const GateParams& params, const CsqSpec& spec) {
  GateEngine engine(params);
  return simulate_gate(engine, spec);
}

GateResult gate_dense_reference(const GateParams& p, const CsqSpec& spec) {
  validate(p);
  std::vector<int> dims(p.dims.begin(), p.dims.end());
  int D0 = dims[0], D3 = dims[3];
  std::size_t n = joint_dim(dims);
  check_matrix_budget(n, n);

  // Input ket on mode 0 (same displaced construction as the engine).
  VecXc psi0 = spec.u() * coherent_amps(2.0 * spec.alpha, D0);
  psi0[0] += spec.v();
  psi0 /= psi0.norm();

  DensityOperator rho_in =
      tensor(tensor(DensityOperator{psi0 * psi0.adjoint(), {D0}},
                    projector(basis_ket(0, dims[1]))),
             tensor(projector(basis_ket(0, dims[2])),
                    squeezed_thermal({-p.resource.s, p.resource.nbar}, D3)));

  FockOperator u_abs2 = beam_splitter(
      BeamSplitterSpec::from_reflectance(p.r_abs2_sq, {3, 2}), dims);
  FockOperator u_abs1 = beam_splitter(
      BeamSplitterSpec::from_reflectance(p.r_abs1_sq, {0, 1}), dims);
  FockOperator u_bs = beam_splitter(
      BeamSplitterSpec::from_t(std::sqrt(p.t_bs_sq), {1, 2}), dims);
  FockOperator u_all{u_bs.m * u_abs1.m * u_abs2.m, dims, OpKind::unitary};

  DensityOperator evolved = apply_unitary(u_all, rho_in);

  FockOperator pi_hd = embed_single_mode(
      homodyne_window_povm(p.detectors.window, p.detectors.eta_hd, D0, 8).m,
      OpKind::povm, dims, 0);
  FockOperator pi_click = embed_single_mode(
      apd_click_povm(p.detectors.eta_apd, p.detectors.p_dark, dims[2]).m,
      OpKind::povm, dims, 2);
  MatXc effect = pi_hd.m * pi_click.m;

  double ps = (evolved.m * effect).trace().real();
  if (!(ps > k_degenerate_ps))
    throw conditioning_error("success probability vanished; cannot condition");
  DensityOperator out =
      partial_trace(DensityOperator{evolved.m * effect, dims}, {3});
  out.m /= out.m.trace().real();

  GateResult res;
  res.rho_out = std::move(out);
  res.p_success = ps;
  res.p_apd = (evolved.m * pi_click.m).trace().real();
  FockKet target = hadamard_target(spec, p.alpha, D3);
  res.fidelity_vs_ideal = fidelity(res.rho_out, target);
  auto fit = best_target_fit(res.rho_out, spec, 0.25 * p.alpha, 2.0 * p.alpha);
  res.target_alpha_opt = fit.alpha_star;
  return res;
}

// ---------------------------------------------------------------------------
// Window balancing
// ---------------------------------------------------------------------------

BalanceResult balance_window(const GateParams& params) {
  return balance_window(params, params.detectors.window.delta);
}

BalanceResult balance_window(const GateParams& params, double delta) {
  if (!(delta > 0.0)) throw dimension_error("window half-width must be > 0");
  GateEngine engine(params);
  CsqSpec plus{params.alpha, 0.0, 0.0};
  CsqSpec minus{params.alpha, M_PI / 2.0, 0.0};
  VecXc psi_p = engine.displaced_input(plus);
  VecXc psi_m = engine.displaced_input(minus);

  auto probs = [&](double x0) -> std::pair<double, double> {
    MatXc e = engine.joint_effect(Window{x0, delta});
    return {(psi_p.adjoint() * e * psi_p).value().real(),
            (psi_m.adjoint() * e * psi_m).value().real()};
  };
  auto result_at = [&](double x0) {
    auto [pp, pm] = probs(x0);
    BalanceResult r;
    r.window = Window{x0, delta};
    r.p_plus = pp;
    r.p_minus = pm;
    r.ratio = pp / pm;
    r.feasible = pm > k_degenerate_ps && std::abs(r.ratio - 1.0) <= 0.05;
    return r;
  };

  constexpr double k_x_hi = 3.0;
  constexpr int k_grid = 31;
  double prev_x = 0.0, prev_g = 0.0;
  bool have_prev = false;
  for (int i = 0; i < k_grid; ++i) {
    double x = k_x_hi * i / (k_grid - 1);
    auto [pp, pm] = probs(x);
    if (!(pp > k_degenerate_ps) || !(pm > k_degenerate_ps)) {
      have_prev = false;
      continue;
    }
    double g = std::log(pp / pm);
    // Lowest x wins when the tolerance is already met (e.g. symmetric setups).
    if (std::abs(pp / pm - 1.0) <= 0.05 && !have_prev) return result_at(x);
    if (have_prev && std::signbit(g) != std::signbit(prev_g)) {
      double lo = prev_x, hi = x, glo = prev_g;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        auto [mp, mm] = probs(mid);
        double gm = std::log(mp / mm);
        if (std::signbit(gm) == std::signbit(glo)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      return result_at(0.5 * (lo + hi));
    }
    if (have_prev && std::abs(pp / pm - 1.0) <= 0.05) return result_at(x);
    prev_x = x;
    prev_g = g;
    have_prev = true;
  }
  BalanceResult r;  // infeasible report
  r.feasible = false;
  r.window = Window{0.0, delta};
  return r;
}

}  // namespace catgate
