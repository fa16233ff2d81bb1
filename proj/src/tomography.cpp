#include "catgate/tomography.hpp"

#include "catgate/detectors.hpp"
#include "catgate/states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace catgate {

namespace {

constexpr double k_x_range = 6.0;
constexpr double k_cdf_step = 0.01;
constexpr double k_bin_width = 0.1;
constexpr double k_prob_floor = 1e-12;

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined behavior of std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// rho rotated into the measured quadrature frame: R(theta) rho R(theta)^dag
// with R = diag(e^{-i n theta}).
MatXc rotated(const MatXc& rho, double theta) {
  int D = static_cast<int>(rho.rows());
  VecXc ph(D);
  for (int n = 0; n < D; ++n) ph[n] = std::exp(cxd{0.0, -n * theta});
  MatXc r = ph.asDiagonal();
  return r * rho * r.adjoint();
}

double prob_density(const MatXc& rho_theta, const VecXr& psi) {
  return (psi.cast<cxd>().adjoint() * rho_theta * psi.cast<cxd>())
      .value()
      .real();
}

}  // namespace

VecXr default_phases(int n) {
  if (n < 1) throw dimension_error("need at least one phase");
  VecXr ph(n);
  for (int k = 0; k < n; ++k) ph[k] = M_PI * k / n;
  return ph;
}

QuadratureDataset sample_homodyne(const DensityOperator& rho,
                                  const VecXr& phases, int n_per_phase,
                                  double eta, std::uint64_t seed) {
  if (rho.modes() != 1) throw dimension_error("sample_homodyne expects one mode");
  if (n_per_phase < 1) throw dimension_error("sample count must be >= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw dimension_error("eta must lie in [0, 1]");
  int D = rho.dims[0];
  DensityOperator lossy = (eta < 1.0) ? loss_channel(rho, eta) : rho;

  const int n_grid = static_cast<int>(std::lround(2.0 * k_x_range / k_cdf_step)) + 1;
  std::vector<VecXr> psis(n_grid);
  for (int i = 0; i < n_grid; ++i)
    psis[i] = quadrature_amplitudes(-k_x_range + i * k_cdf_step, D);

  std::mt19937_64 rng(seed);
  QuadratureDataset data;
  data.eta = eta;
  data.seed = seed;
  data.records.reserve(static_cast<std::size_t>(phases.size()) * n_per_phase);

  std::vector<double> cdf(n_grid), pdf(n_grid);
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    MatXc rho_theta = rotated(lossy.m, phases[k]);
    for (int i = 0; i < n_grid; ++i)
      pdf[i] = std::max(0.0, prob_density(rho_theta, psis[i]));
    cdf[0] = 0.0;
    for (int i = 1; i < n_grid; ++i)
      cdf[i] = cdf[i - 1] + 0.5 * (pdf[i - 1] + pdf[i]) * k_cdf_step;
    double total = cdf[n_grid - 1];
    if (!(total > 0.0)) throw internal_error("quadrature CDF has zero mass");
    for (int i = 1; i < n_grid; ++i)
      if (cdf[i] < cdf[i - 1]) throw internal_error("quadrature CDF not monotone");

    for (int s = 0; s < n_per_phase; ++s) {
      double u = uniform01(rng) * total;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      int i = std::max<int>(1, static_cast<int>(it - cdf.begin()));
      i = std::min(i, n_grid - 1);
      double seg = cdf[i] - cdf[i - 1];
      double frac = seg > 0.0 ? (u - cdf[i - 1]) / seg : 0.0;
      double x = -k_x_range + (i - 1 + frac) * k_cdf_step;
      data.records.push_back({phases[k], x});
    }
  }
  return data;
}

ReconstructionReport maxlik_reconstruct(const QuadratureDataset& data, int D,
                                        double eta_correction, int max_iter,
                                        double tol) {
  if (data.records.empty()) throw dimension_error("dataset is empty");
  if (!(eta_correction > 0.0 && eta_correction <= 1.0))
    throw dimension_error("eta_correction must lie in (0, 1]");
  if (D < 2) throw dimension_error("reconstruction cutoff must be >= 2");

  // Histogram records into (phase, bin) cells; phases keyed by value.
  const int n_bins = static_cast<int>(std::lround(2.0 * k_x_range / k_bin_width));
  std::map<double, std::vector<std::size_t>> by_phase;
  for (std::size_t r = 0; r < data.records.size(); ++r) {
    const auto& rec = data.records[r];
    int bin = static_cast<int>(std::floor((rec.x + k_x_range) / k_bin_width));
    bin = std::clamp(bin, 0, n_bins - 1);
    auto& counts = by_phase[rec.theta];
    if (counts.empty()) counts.assign(n_bins, 0);
    ++counts[bin];
  }
  int n_phases = static_cast<int>(by_phase.size());
  if (n_phases < 8)
    throw dimension_error("reconstruction needs >= 8 distinct phases");

  // Bin POVMs: (1/n_phases) Lambda^dag( integral over bin of |x_th><x_th| ),
  // integrated by 4-point Gauss-Legendre per bin.
  auto [gl_nodes, gl_weights] = gauss_legendre(4);
  struct Cell {
    MatXc povm;
    double freq;
  };
  std::vector<Cell> cells;
  double n_total = static_cast<double>(data.records.size());
  for (const auto& [theta, counts] : by_phase) {
    VecXc ph(D);
    for (int n = 0; n < D; ++n) ph[n] = std::exp(cxd{0.0, -n * theta});
    for (int b = 0; b < n_bins; ++b) {
      if (counts[b] == 0) continue;
      double lo = -k_x_range + b * k_bin_width;
      MatXc ideal = MatXc::Zero(D, D);
      for (int g = 0; g < 4; ++g) {
        double x = lo + 0.5 * k_bin_width * (1.0 + gl_nodes[g]);
        VecXr psi = quadrature_amplitudes(x, D);
        ideal += (0.5 * k_bin_width * gl_weights[g]) *
                 (psi * psi.transpose()).cast<cxd>();
      }
      // Rotate into the lab frame: Pi = R^dag |x_th bin| R.
      MatXc rot = ph.conjugate().asDiagonal() * ideal *
                  MatXc(ph.asDiagonal());
      MatXc corrected = (eta_correction < 1.0)
                            ? loss_adjoint(rot, eta_correction)
                            : rot;
      cells.push_back({corrected / double(n_phases),
                       static_cast<double>(counts[b]) / n_total});
    }
  }

  ReconstructionReport report;
  MatXc rho = MatXc::Identity(D, D) / double(D);
  double prev_ll = -std::numeric_limits<double>::infinity();
  int floored = 0;
  for (int it = 0; it < max_iter; ++it) {
    MatXc r_op = MatXc::Zero(D, D);
    double ll = 0.0;
    for (const auto& cell : cells) {
      double p = (rho * cell.povm).trace().real();
      if (p < k_prob_floor) {
        p = k_prob_floor;
        ++floored;
      }
      r_op += (cell.freq / p) * cell.povm;
      ll += cell.freq * std::log(p);
    }
    report.loglik.push_back(ll);
    report.iterations = it + 1;
    if (it > 0 && ll - prev_ll < tol) {
      report.converged = true;
      break;
    }
    prev_ll = ll;
    MatXc next = r_op * rho * r_op;
    next = 0.5 * (next + MatXc(next.adjoint()));
    next /= next.trace().real();
    rho = next;
  }
  report.floored_bins = floored;
  report.rho_hat = DensityOperator{std::move(rho), {D}};
  return report;
}

void write_dataset(const QuadratureDataset& data, std::ostream& os) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# catgate-quadrature v1, eta=%.12g, seed=%llu\n",
                data.eta, static_cast<unsigned long long>(data.seed));
  os << buf;
  for (const auto& rec : data.records) {
    std::snprintf(buf, sizeof buf, "%.12g\t%.12g\n", rec.theta, rec.x);
    os << buf;
  }
}

QuadratureDataset read_dataset(std::istream& is) {
  QuadratureDataset data;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!have_header) {
      double eta;
      unsigned long long seed;
      if (std::sscanf(line.c_str(), "# catgate-quadrature v1, eta=%lf, seed=%llu",
                      &eta, &seed) != 2)
        throw dataset_parse_error("line " + std::to_string(line_no) +
                                  ": missing or malformed dataset header");
      data.eta = eta;
      data.seed = seed;
      have_header = true;
      continue;
    }
    if (line[0] == '#') continue;
    QuadratureRecord rec;
    char trailing;
    int got = std::sscanf(line.c_str(), "%lf\t%lf %c", &rec.theta, &rec.x,
                          &trailing);
    if (got != 2)
      throw dataset_parse_error("line " + std::to_string(line_no) +
                                ": expected `theta<TAB>x`");
    data.records.push_back(rec);
  }
  if (!have_header)
    throw dataset_parse_error("line 1: missing dataset header");
  return data;
}

}  // namespace catgate
