#include "catgate/analysis.hpp"

#include "catgate/detectors.hpp"
#include "catgate/optics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace catgate {

namespace {

constexpr double k_degenerate_ps = 1e-300;

void parallel_rows(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, threads);
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  int count = std::min(threads, n);
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Generalized Laguerre polynomial L_m^{(d)}(y).
double laguerre(int m, int d, double y) {
  if (m == 0) return 1.0;
  double lm1 = 1.0, l = 1.0 + d - y;
  for (int k = 1; k < m; ++k) {
    double lp = ((2.0 * k + 1.0 + d - y) * l - (k + d) * lm1) / (k + 1.0);
    lm1 = l;
    l = lp;
  }
  return l;
}

}  // namespace

VecXr linspace(double lo, double hi, int n) {
  if (n < 1) throw dimension_error("linspace needs n >= 1");
  VecXr v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

double fidelity(const DensityOperator& rho, const FockKet& target) {
  if (rho.dims != target.dims)
    throw dimension_error("fidelity: state/target cutoff mismatch");
  double f = (target.amps.adjoint() * rho.m * target.amps).value().real();
  return std::clamp(f, 0.0, 1.0);
}

double overlap_fidelity(const FockKet& a, const FockKet& b) {
  if (a.dims != b.dims) throw dimension_error("overlap: cutoff mismatch");
  return std::clamp(std::norm(cxd((a.amps.adjoint() * b.amps).value())), 0.0,
                    1.0);
}

std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double lo, double hi, double tol) {
  if (!(hi > lo)) return {lo, f(lo)};
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double mid = 0.5 * (a + b), fm = f(mid);
  if (fc > fm && fc >= fd) return {c, fc};
  if (fd > fm) return {d, fd};
  return {mid, fm};
}

TargetFit best_target_fit(const DensityOperator& rho, const CsqSpec& spec,
                          double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo))
    throw dimension_error("best_target_fit: invalid amplitude range");
  int D = rho.dims[0];
  auto f = [&](double a) {
    return fidelity(rho, hadamard_target(spec, a, D));
  };
  // Coarse scan to bracket the global maximum, then golden refinement.
  constexpr int k_scan = 25;
  double best_x = lo, best_f = -1.0;
  for (int i = 0; i < k_scan; ++i) {
    double x = lo + (hi - lo) * i / (k_scan - 1);
    double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  double h = (hi - lo) / (k_scan - 1);
  auto [xs, fs] = golden_max(f, std::max(lo, best_x - h),
                             std::min(hi, best_x + h), 1e-3);
  TargetFit fit;
  fit.alpha_star = xs;
  fit.f_star = fs;
  return fit;
}

TargetFit best_target_alpha(const DensityOperator& rho, int sign, double lo,
                            double hi) {
  if (sign != 1 && sign != -1)
    throw dimension_error("best_target_alpha: sign must be +1 or -1");
  CsqSpec spec{1.0, sign == 1 ? 0.0 : M_PI / 2.0, 0.0};
  return best_target_fit(rho, spec, lo, hi);
}

// ---------------------------------------------------------------------------
// Wigner
// ---------------------------------------------------------------------------

MatXc displacement_matrix_exact(cxd gamma, int D) {
  if (D < 1) throw dimension_error("cutoff must be >= 1");
  double y = std::norm(gamma);
  double e = std::exp(-0.5 * y);
  MatXc m(D, D);
  for (int ket = 0; ket < D; ++ket) {
    // Upper part (bra >= ket): sqrt(ket!/bra!) gamma^(bra-ket) L_ket^(d)(y).
    double ratio = 1.0;  // sqrt(ket!/bra!)
    cxd pw = 1.0;        // gamma^(bra-ket)
    for (int bra = ket; bra < D; ++bra) {
      int d = bra - ket;
      if (d > 0) {
        ratio /= std::sqrt(double(bra));
        pw *= gamma;
      }
      m(bra, ket) = e * pw * ratio * laguerre(ket, d, y);
    }
    // Lower part via <m'|D(gamma)|m> = conj(<m|D(-gamma)|m'>).
    ratio = 1.0;
    cxd pw2 = 1.0;
    for (int bra = ket - 1; bra >= 0; --bra) {
      int d = ket - bra;
      ratio /= std::sqrt(double(ket - d + 1));
      pw2 *= -gamma;
      m(bra, ket) = std::conj(e * pw2 * ratio) * laguerre(bra, d, y);
    }
  }
  return m;
}

double wigner(const DensityOperator& rho, double x, double p) {
  if (rho.modes() != 1) throw dimension_error("wigner expects a single mode");
  int D = rho.dims[0];
  cxd beta{x / std::sqrt(2.0), p / std::sqrt(2.0)};
  if (beta == cxd{0.0, 0.0}) {
    double w = 0.0;
    for (int n = 0; n < D; ++n)
      w += (n % 2 == 0 ? 1.0 : -1.0) * rho.m(n, n).real();
    return w / M_PI;
  }
  MatXc dm = displacement_matrix_exact(2.0 * beta, D);
  // W = (1/pi) tr(rho D(2 beta) P), P the photon-number parity.
  cxd tr = 0.0;
  for (int m = 0; m < D; ++m) {
    double parity = (m % 2 == 0) ? 1.0 : -1.0;
    for (int mp = 0; mp < D; ++mp) tr += rho.m(m, mp) * parity * dm(mp, m);
  }
  return tr.real() / M_PI;
}

MatXr wigner_grid(const DensityOperator& rho, const VecXr& xs, const VecXr& ps,
                  int threads) {
  MatXr w(xs.size(), ps.size());
  parallel_rows(static_cast<int>(xs.size()), threads, [&](int i) {
    for (Eigen::Index j = 0; j < ps.size(); ++j)
      w(i, j) = wigner(rho, xs[i], ps[j]);
  });
  return w;
}

// ---------------------------------------------------------------------------
// Fidelity curves
// ---------------------------------------------------------------------------

namespace {

struct SphereGrid {
  VecXr cos_nodes, cos_weights;  // Gauss-Legendre over cos(Bloch polar angle)
  VecXr phis;
};

SphereGrid sphere_grid() {
  SphereGrid g;
  std::tie(g.cos_nodes, g.cos_weights) = gauss_legendre(12);
  g.phis = VecXr(24);
  for (int j = 0; j < 24; ++j) g.phis[j] = 2.0 * M_PI * j / 24.0;
  return g;
}

// Mean of f over the Bloch sphere (uniform measure), with theta = acos(c)/2.
double sphere_mean(const SphereGrid& g, double alpha,
                   const std::function<double(const CsqSpec&)>& f) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < g.cos_nodes.size(); ++i) {
    double theta = 0.5 * std::acos(std::clamp(g.cos_nodes[i], -1.0, 1.0));
    double row = 0.0;
    for (Eigen::Index j = 0; j < g.phis.size(); ++j)
      row += f(CsqSpec{alpha, theta, g.phis[j]});
    acc += 0.5 * g.cos_weights[i] * row / double(g.phis.size());
  }
  return acc;
}

double herald_x(double abs_y, double alpha) {
  return (4.0 * alpha * alpha + std::log(abs_y)) /
         (2.0 * std::sqrt(2.0) * alpha);
}

}  // namespace

std::vector<CurvePoint> fidelity_curve(const VecXr& alphas, int D) {
  const double t = 0.5, r = std::sqrt(0.75);
  SphereGrid grid = sphere_grid();
  std::vector<CurvePoint> out;
  out.reserve(alphas.size());

  for (Eigen::Index ia = 0; ia < alphas.size(); ++ia) {
    double alpha = alphas[ia];
    if (!(alpha > 0.0)) throw dimension_error("curve amplitudes must be > 0");
    CurvePoint pt;
    pt.alpha = alpha;

    VecXc catp = cat(alpha, +1, D).amps;
    VecXc catm = cat(alpha, -1, D).amps;

    // Ideal (cat) resource at the |Z Y1| = 1 heralding point.
    double y1 = y1_coefficient(t, r, alpha);
    double x1 = herald_x(y1, alpha);
    pt.f_ideal = sphere_mean(grid, alpha, [&](const CsqSpec& spec) {
      cxd w = y1 * (spec.u() + spec.v() * std::exp(4.0 * alpha * alpha -
                                                   2.0 * std::sqrt(2.0) *
                                                       alpha * x1));
      // Output u cat+ + w cat-; cats are parity-orthogonal.
      cxd ov = std::conj(spec.u()) * spec.u() + std::conj(spec.v()) * w;
      double n_out = std::norm(spec.u()) + std::norm(w);
      double n_tgt = std::norm(spec.u()) + std::norm(spec.v());
      return std::norm(ov) / (n_out * n_tgt);
    });

    // Squeezed resource, maximized over the squeeze magnitude. The resource
    // is squeezed along p, for which Y2 > 0; feasibility requires |Y2| <= 1.
    auto mean_f_at = [&](double s_mag) {
      double y2 = y2_coefficient(t, r, -s_mag, alpha);
      double x2 = herald_x(std::abs(y2), alpha);
      double z = std::exp(4.0 * alpha * alpha -
                          2.0 * std::sqrt(2.0) * alpha * x2);
      // Closed-form squeezed columns: s0 = S(-s)|0>, s1 = S(-s) a^dag |0>.
      // Raw truncated recurrence (no leakage check): the search legitimately
      // probes large s where the cutoff truncates, and the overlap formula
      // below carries explicit norms for exactly that reason.
      VecXc s0 = VecXc::Zero(D);
      {
        double th = std::tanh(-s_mag);
        s0[0] = 1.0 / std::sqrt(std::cosh(s_mag));
        for (int n = 0; n + 2 < D; n += 2)
          s0[n + 2] = -th * std::sqrt((n + 1.0) / (n + 2.0)) * s0[n].real();
      }
      VecXc s1 = VecXc::Zero(D);
      for (int n = 1; n < D; ++n)
        s1[n] = std::cosh(s_mag) * std::sqrt(double(n)) * s0[n - 1];
      for (int n = 0; n + 1 < D; ++n)
        s1[n] += -std::sinh(s_mag) * std::sqrt(n + 1.0) * s0[n + 1];
      cxd ip_pp = catp.dot(s0), ip_pm = catp.dot(s1);
      cxd ip_mp = catm.dot(s0), ip_mm = catm.dot(s1);
      double n0 = s0.squaredNorm(), n1 = s1.squaredNorm();
      return sphere_mean(grid, alpha, [&](const CsqSpec& spec) {
        cxd w = y2 * (spec.u() + spec.v() * z);
        cxd ov = std::conj(spec.u()) * (spec.u() * ip_pp + w * ip_pm) +
                 std::conj(spec.v()) * (spec.u() * ip_mp + w * ip_mm);
        double n_out =
            std::norm(spec.u()) * n0 + std::norm(w) * n1 +
            2.0 * (std::conj(spec.u()) * w * s0.dot(s1)).real();
        double n_tgt = std::norm(spec.u()) + std::norm(spec.v());
        if (!(n_out > 0.0)) return 0.0;
        return std::norm(ov) / (n_out * n_tgt);
      });
    };
    double cap = std::asinh(2.0 * r * alpha / t);
    double hi = std::min(1.5, 0.999 * cap);
    auto [s_opt, f_sq] = golden_max(mean_f_at, 1e-4, hi, 1e-5);
    pt.f_squeezed = f_sq;
    pt.s_opt_db = squeeze_db(s_opt);
    out.push_back(pt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bloch sweep
// ---------------------------------------------------------------------------

BlochGrid bloch_sweep(const GateParams& params, int n_theta, int n_phi,
                      int threads) {
  if (n_theta < 1 || n_phi < 1) throw dimension_error("grid must be nonempty");
  GateEngine engine(params);
  const Window& w = params.detectors.window;
  MatXc joint = engine.joint_effect(w);
  std::vector<MatXc> kraus = engine.kraus_family(w);
  int D3 = params.dims[3];

  BlochGrid grid;
  grid.thetas = linspace(0.0, M_PI / 2.0, n_theta);
  grid.phis = VecXr(n_phi);
  for (int j = 0; j < n_phi; ++j) grid.phis[j] = 2.0 * M_PI * j / n_phi;
  grid.f = MatXr::Zero(n_theta, n_phi);
  grid.ps = MatXr::Zero(n_theta, n_phi);

  std::vector<std::vector<std::pair<int, int>>> flagged_rows(n_theta);
  parallel_rows(n_theta, threads, [&](int i) {
    for (int j = 0; j < n_phi; ++j) {
      CsqSpec spec{params.alpha, grid.thetas[i], grid.phis[j]};
      VecXc psi = engine.displaced_input(spec);
      double ps = (psi.adjoint() * joint * psi).value().real();
      if (!(ps > k_degenerate_ps)) {
        grid.f(i, j) = std::numeric_limits<double>::quiet_NaN();
        grid.ps(i, j) = 0.0;
        flagged_rows[i].emplace_back(i, j);
        continue;
      }
      FockKet target = hadamard_target(spec, params.alpha, D3);
      double num = 0.0, den = 0.0;
      for (const auto& k : kraus) {
        VecXc out = k * psi;
        den += out.squaredNorm();
        num += std::norm(cxd((target.amps.adjoint() * out).value()));
      }
      grid.f(i, j) = std::clamp(num / den, 0.0, 1.0);
      grid.ps(i, j) = ps;
    }
  });
  for (auto& rows : flagged_rows)
    grid.flagged.insert(grid.flagged.end(), rows.begin(), rows.end());

  double sum_f = 0.0, sum_ps = 0.0;
  double mn = 2.0, mx = -1.0;
  int valid = 0;
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) {
      if (std::isnan(grid.f(i, j))) continue;
      sum_f += grid.f(i, j);
      sum_ps += grid.ps(i, j);
      mn = std::min(mn, grid.f(i, j));
      mx = std::max(mx, grid.f(i, j));
      ++valid;
    }
  if (valid > 0) {
    grid.mean_f = sum_f / valid;
    grid.mean_ps = sum_ps / valid;
    grid.min_f = mn;
    grid.max_f = mx;
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Process fidelity
// ---------------------------------------------------------------------------

double process_fidelity(const GateParams& params, bool ideal_channel) {
  int D0 = params.dims[0], D3 = params.dims[3];
  auto raw_coherent = [](double a, int D) {
    VecXc v(D);
    v[0] = std::exp(-0.5 * a * a);
    for (int n = 1; n < D; ++n) v[n] = v[n - 1] * a / std::sqrt(double(n));
    return v;
  };
  VecXc c_p = raw_coherent(params.alpha, D0);
  VecXc c_m = raw_coherent(-params.alpha, D0);
  VecXc c_2a = raw_coherent(2.0 * params.alpha, D0);
  VecXc vac = VecXc::Zero(D0);
  vac[0] = 1.0;

  // Entangled input with the gate arm already displaced: |a>|2a> + |-a>|0>.
  MatXc a2 = c_p * c_2a.transpose() + c_m * vac.transpose();
  a2 /= a2.norm();

  VecXc catp = hadamard_target(CsqSpec{params.alpha, 0.0, 0.0}, params.alpha,
                               D3)
                   .amps;
  VecXc catm = hadamard_target(CsqSpec{params.alpha, M_PI / 2.0, 0.0},
                               params.alpha, D3)
                   .amps;
  MatXc t2 = c_p * catp.transpose() + c_m * catm.transpose();
  t2 /= t2.norm();

  std::vector<MatXc> family;
  if (ideal_channel) {
    MatXc b(D0, 2);
    b.col(0) = c_2a;
    b.col(1) = vac;
    MatXc tc(D3, 2);
    tc.col(0) = catp;
    tc.col(1) = catm;
    family.push_back(tc * (b.adjoint() * b).inverse() * b.adjoint());
  } else {
    GateEngine engine(params);
    family = engine.kraus_family(params.detectors.window);
  }

  double num = 0.0, den = 0.0;
  for (const auto& k : family) {
    MatXc out = a2 * k.transpose();
    den += out.squaredNorm();
    num += std::norm(cxd((t2.conjugate().cwiseProduct(out)).sum()));
  }
  if (!(den > k_degenerate_ps))
    throw conditioning_error("process fidelity: success probability vanished");
  return std::clamp(num / den, 0.0, 1.0);
}

}  // namespace catgate
