// Acceptance gate: seven end-to-end criteria with pinned tolerances. Each
// criterion prints exactly one "[criterion N] PASS/FAIL — ..." line with the
// measured values, then asserts the same conditions so the binary's exit code
// reflects the gate. The CLI binary path is taken as the first positional
// argument (used by the determinism checks of criterion 7).
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catgate/analysis.hpp"
#include "catgate/detectors.hpp"
#include "catgate/fock.hpp"
#include "catgate/gate.hpp"
#include "catgate/optics.hpp"
#include "catgate/states.hpp"
#include "catgate/tomography.hpp"

using namespace catgate;

namespace fs = std::filesystem;

namespace {

std::string g_cli;     // path to catgate-cli, optional
fs::path g_scratch;

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

void report(int n, bool ok, const std::string& detail) {
  std::printf("[criterion %d] %s — %s\n", n, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  std::string cmd = "'" + g_cli + "' " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("criterion 1: optimized fidelity curve endpoints") {
  VecXr alphas(2);
  alphas << 0.01, 0.8;
  auto pts = fidelity_curve(alphas);
  double f_small = pts[0].f_squeezed;
  double f_op = pts[1].f_squeezed;
  double s_db = pts[1].s_opt_db;

  bool c_limit = (1.0 - f_small) <= 1e-3;
  bool c_op = std::abs(f_op - 0.97) <= 0.01;
  bool c_sq = std::abs(s_db - 2.6) <= 0.3;
  report(1, c_limit && c_op && c_sq,
         strf("F_sq(0.01)=%.6f (1 within 1e-3); F_sq(0.8)=%.6f (0.97±0.01); "
              "s_opt=%.4f dB (2.6±0.3)",
              f_small, f_op, s_db));
  CHECK(c_limit);
  CHECK(c_op);
  CHECK(c_sq);
}

TEST_CASE("criterion 2: realistic pole fidelities") {
  GateParams p;  // frozen realistic parameter set
  GateResult plus = simulate_gate(p, CsqSpec{p.alpha, 0.0, 0.0});
  GateResult minus = simulate_gate(p, CsqSpec{p.alpha, M_PI_2, 0.0});

  bool c_plus = std::abs(plus.fidelity_vs_ideal - 0.88) <= 0.05;
  bool c_minus = std::abs(minus.fidelity_vs_ideal - 0.67) <= 0.05;
  report(2, c_plus && c_minus,
         strf("F(+)=%.6f (0.88±0.05); F(-)=%.6f (0.67±0.05); "
              "P_S=%.3e/%.3e",
              plus.fidelity_vs_ideal, minus.fidelity_vs_ideal, plus.p_success,
              minus.p_success));
  CHECK(c_plus);
  CHECK(c_minus);
}

TEST_CASE("criterion 3: Bloch-sphere sweep aggregates") {
  GateParams p;
  BlochGrid g = bloch_sweep(p, 33, 33, 1);
  double ratio = g.ps(0, 0) / g.ps(32, 0);  // even pole over odd pole

  bool c_cover = g.min_f <= 0.70 && g.max_f >= 0.93;
  bool c_within = g.min_f >= 0.62 && g.max_f <= 0.99;
  bool c_mean_f = std::abs(g.mean_f - 0.78) <= 0.05;
  bool c_mean_ps = g.mean_ps >= 7.2e-6 / 3.0 && g.mean_ps <= 7.2e-6 * 3.0;
  bool c_ratio = ratio >= 0.8 && ratio <= 1.25;
  report(3, c_cover && c_within && c_mean_f && c_mean_ps && c_ratio,
         strf("span=[%.6f, %.6f] (must cover [0.70, 0.93], fit [0.62, 0.99]); "
              "mean F=%.6f (0.78±0.05); mean P_S=%.3e (7.2e-6 within x3); "
              "pole P_S ratio=%.4f ([0.8, 1.25])",
              g.min_f, g.max_f, g.mean_f, g.mean_ps, ratio));
  CHECK(c_cover);
  CHECK(c_within);
  CHECK(c_mean_f);
  CHECK(c_mean_ps);
  CHECK(c_ratio);
}

TEST_CASE("criterion 4: process fidelity") {
  GateParams p;
  double f = process_fidelity(p);
  bool ok = std::abs(f - 0.70) <= 0.05;
  report(4, ok, strf("F_process=%.6f (0.70±0.05)", f));
  CHECK(ok);
}

TEST_CASE("criterion 5: Wigner negativity of the odd output") {
  double w_ideal = wigner(projector(cat(0.8, -1, 16)), 0.0, 0.0);
  GateParams p;
  DensityOperator rho = simulate_gate(p, CsqSpec{p.alpha, M_PI_2, 0.0}).rho_out;
  double w_sim = wigner(rho, 0.0, 0.0);

  bool c_ideal = std::abs(w_ideal + 1.0 / M_PI) <= 1e-6;
  bool c_sim = w_sim >= -0.16 && w_sim <= -0.06;
  report(5, c_ideal && c_sim,
         strf("ideal cat W(0,0)=%.9f (-1/pi within 1e-6); simulated odd output "
              "W(0,0)=%.6f ([-0.16, -0.06])",
              w_ideal, w_sim));
  CHECK(c_ideal);
  CHECK(c_sim);
}

TEST_CASE("criterion 6: tomography round trip with loss correction") {
  DensityOperator src = projector(cat(0.75, -1, 16));
  QuadratureDataset data =
      sample_homodyne(src, default_phases(12), 16667, 0.77, 91);  // 2e5 samples
  ReconstructionReport corr = maxlik_reconstruct(data, 12, 0.77, 2000, 1e-10);
  ReconstructionReport raw = maxlik_reconstruct(data, 12, 1.0, 2000, 1e-10);

  FockKet ref = cat(0.75, -1, 12);
  double fc = fidelity(corr.rho_hat, ref);
  double fu = fidelity(raw.rho_hat, ref);
  double wc = wigner(corr.rho_hat, 0.0, 0.0);
  double wu = wigner(raw.rho_hat, 0.0, 0.0);

  bool monotone = true;
  for (std::size_t i = 1; i < corr.loglik.size(); ++i)
    if (corr.loglik[i] < corr.loglik[i - 1] - 1e-9) monotone = false;

  bool c_fid = fc > 0.95;
  bool c_mono = monotone;
  bool c_order = fu < fc && wu > wc;
  report(6, c_fid && c_mono && c_order,
         strf("corrected F=%.6f (>0.95), W(0,0)=%.6f; uncorrected F=%.6f, "
              "W(0,0)=%.6f (strictly worse); likelihood monotone=%d over %d "
              "iterations",
              fc, wc, fu, wu, monotone ? 1 : 0, corr.iterations));
  CHECK(c_fid);
  CHECK(c_mono);
  CHECK(c_order);
}

TEST_CASE("criterion 7: structural properties, weak-tap equivalence, CLI "
          "determinism") {
  // --- algebraic invariants ---
  FockOperator bs = beam_splitter(BeamSplitterSpec::from_t(0.5), {16, 16});
  double unit_defect =
      (bs.m.adjoint() * bs.m - MatXc::Identity(256, 256)).cwiseAbs().maxCoeff();

  DensityOperator rho = apply_unitary(displacement(cxd(0.4, 0.2), 20),
                                      projector(coherent(0.5, 20)));
  double trace_err = std::abs(rho.trace_re() - 1.0);
  double min_eig = min_eigenvalue(rho.m);

  FockKet even = cat(0.8, +1, 16), odd = cat(0.8, -1, 16);
  double parity_leak = 0.0;
  for (int n = 0; n < 16; ++n) {
    if (n % 2 == 1) parity_leak = std::max(parity_leak, std::abs(even.amps[n]));
    if (n % 2 == 0) parity_leak = std::max(parity_leak, std::abs(odd.amps[n]));
  }

  // --- POVM bounds and completeness ---
  FockOperator win = homodyne_window_povm(Window{0.3, 0.02}, 0.77, 16);
  double win_lo = min_eigenvalue(win.m);  // 0 <= Pi
  // Pi <= 1, i.e. I - Pi is PSD
  double win_ub = min_eigenvalue(MatXc(MatXc::Identity(16, 16) - win.m));
  MatXc k_sum = MatXc::Zero(12, 12);
  for (const MatXr& k : loss_kraus(0.77, 12))
    k_sum += (k.transpose() * k).cast<cxd>();
  double kraus_defect =
      (k_sum - MatXc::Identity(12, 12)).cwiseAbs().maxCoeff();
  MatXc apd_sum = apd_click_povm(0.25, 2e-5, 12).m +
                  apd_no_click_povm(0.25, 2e-5, 12).m;
  double apd_defect =
      (apd_sum - MatXc::Identity(12, 12)).cwiseAbs().maxCoeff();

  bool c_struct = unit_defect < 1e-12 && trace_err < 1e-12 &&
                  min_eig > -1e-10 && parity_leak == 0.0 && win_lo > -1e-12 &&
                  win_ub > -1e-12 && kraus_defect < 1e-12 &&
                  apd_defect < 1e-12;

  // --- analytic model vs full simulation at taps 1e-3 ---
  auto equivalence_worst = [&](double taps, bool single_photon) {
    GateParams q;
    q.r_abs1_sq = taps;
    q.r_abs2_sq = taps;
    q.resource.nbar = 0.0;
    q.detectors.eta_apd = 1.0;
    q.detectors.p_dark = 0.0;
    q.detectors.eta_hd = 1.0;
    double x = 0.2;
    q.detectors.window = Window{x, 1e-6};
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 1.0;
    for (int k = 0; k < 10; ++k) {
      CsqSpec sp{q.alpha, u01(rng) * M_PI_2, u01(rng) * 2.0 * M_PI};
      FockKet target = squeezed_resource_output(sp, 0.5, std::sqrt(0.75),
                                                -q.resource.s, x, q.dims[3]);
      DensityOperator out;
      if (single_photon) {
        VecXr diag = VecXr::Zero(q.dims[2]);
        diag[1] = 1.0;
        GateEngine eng(q, diag);
        out = simulate_gate(eng, sp).rho_out;
      } else {
        out = simulate_gate(q, sp).rho_out;
      }
      worst = std::min(worst, fidelity(out, target));
    }
    return worst;
  };
  double equiv_click = equivalence_worst(1e-3, false);
  double equiv_1ph = equivalence_worst(1e-3, true);
  bool c_equiv = equiv_click >= 0.999;

  // --- CLI determinism under a fixed seed ---
  bool c_cli = true;
  std::string cli_note = "cli determinism: skipped (no binary path)";
  if (!g_cli.empty()) {
    fs::path a = g_scratch / "det_a", b = g_scratch / "det_b";
    fs::path cfg = g_scratch / "det.json";
    std::ofstream(cfg) << R"({"alpha":0.8,
        "state":{"kind":"fock","n":1,"d":8},
        "tomo":{"n_per_phase":200}})";
    int rc = 0;
    rc |= run_cli("simulate --out '" + a.string() + "'");
    rc |= run_cli("simulate --out '" + b.string() + "'");
    rc |= run_cli("tomo-sample --config '" + cfg.string() + "' --seed 99 --out '" +
                  a.string() + "'");
    rc |= run_cli("tomo-sample --config '" + cfg.string() + "' --seed 99 --out '" +
                  b.string() + "'");
    bool same = slurp(a / "summary.csv") == slurp(b / "summary.csv") &&
                slurp(a / "rho_out.txt") == slurp(b / "rho_out.txt") &&
                slurp(a / "dataset.txt") == slurp(b / "dataset.txt") &&
                !slurp(a / "dataset.txt").empty();
    c_cli = (rc == 0) && same;
    cli_note = strf("cli determinism: %s", c_cli ? "byte-identical" : "BROKEN");
  }

  report(7, c_struct && c_equiv && c_cli,
         strf("invariants: unitarity=%.1e, trace=%.1e, min_eig=%.1e, "
              "parity_leak=%.1e, povm=[%.1e, %.1e, %.1e, %.1e]; equivalence at "
              "taps 1e-3: click=%.6f (>=0.999), single-photon=%.6f; %s",
              unit_defect, trace_err, min_eig, parity_leak, win_lo, win_ub,
              kraus_defect, apd_defect, equiv_click, equiv_1ph,
              cli_note.c_str()));
  CHECK(c_struct);
  CHECK(c_equiv);
  CHECK(equiv_1ph > equiv_click);
  CHECK(c_cli);
}

int main(int argc, char** argv) {
  std::vector<char*> pass;
  pass.push_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (g_cli.empty() && !a.empty() && a[0] != '-') {
      g_cli = a;
      continue;
    }
    pass.push_back(argv[i]);
  }
  if (!g_cli.empty() && fs::exists(g_cli))
    g_cli = fs::absolute(g_cli).string();
  else
    g_cli.clear();

  std::error_code ec;
  g_scratch = fs::temp_directory_path() /
              ("catgate-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(g_scratch, ec);
  fs::create_directories(g_scratch);

  doctest::Context ctx(static_cast<int>(pass.size()), pass.data());
  int rc = ctx.run();
  fs::remove_all(g_scratch, ec);
  return rc;
}
