// Python bindings for the catgate core: state factories, the conditioned gate
// simulation, analysis helpers, and homodyne tomography.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "catgate/analysis.hpp"
#include "catgate/gate.hpp"
#include "catgate/states.hpp"
#include "catgate/tomography.hpp"

namespace py = pybind11;
using namespace catgate;

PYBIND11_MODULE(_core, m) {
  m.doc() = "truncated-Fock-space simulation of a probabilistic Hadamard gate "
            "for coherent-state qubits";

  py::register_exception<dimension_error>(m, "DimensionError");
  py::register_exception<truncation_error>(m, "TruncationError");
  py::register_exception<conditioning_error>(m, "ConditioningError");
  py::register_exception<capacity_error>(m, "CapacityError");

  py::class_<FockKet>(m, "FockKet")
      .def_readonly("amps", &FockKet::amps)
      .def_readonly("dims", &FockKet::dims);

  py::class_<DensityOperator>(m, "DensityOperator")
      .def_readonly("m", &DensityOperator::m)
      .def_readonly("dims", &DensityOperator::dims)
      .def_readonly("trace_deficit", &DensityOperator::trace_deficit)
      .def_readonly("truncation_warning", &DensityOperator::truncation_warning);

  py::class_<CsqSpec>(m, "CsqSpec")
      .def(py::init<>())
      .def(py::init([](double alpha, double theta, double phi) {
             return CsqSpec{alpha, theta, phi};
           }),
           py::arg("alpha"), py::arg("theta") = 0.0, py::arg("phi") = 0.0)
      .def_readwrite("alpha", &CsqSpec::alpha)
      .def_readwrite("theta", &CsqSpec::theta)
      .def_readwrite("phi", &CsqSpec::phi);

  py::class_<ResourceSpec>(m, "ResourceSpec")
      .def(py::init<>())
      .def_readwrite("s", &ResourceSpec::s)
      .def_readwrite("nbar", &ResourceSpec::nbar);

  py::class_<Window>(m, "Window")
      .def(py::init<>())
      .def_readwrite("x0", &Window::x0)
      .def_readwrite("delta", &Window::delta);

  py::class_<DetectorSpec>(m, "DetectorSpec")
      .def(py::init<>())
      .def_readwrite("eta_apd", &DetectorSpec::eta_apd)
      .def_readwrite("p_dark", &DetectorSpec::p_dark)
      .def_readwrite("eta_hd", &DetectorSpec::eta_hd)
      .def_readwrite("window", &DetectorSpec::window);

  py::class_<GateParams>(m, "GateParams")
      .def(py::init<>())
      .def_readwrite("alpha", &GateParams::alpha)
      .def_readwrite("t_bs_sq", &GateParams::t_bs_sq)
      .def_readwrite("r_abs1_sq", &GateParams::r_abs1_sq)
      .def_readwrite("r_abs2_sq", &GateParams::r_abs2_sq)
      .def_readwrite("resource", &GateParams::resource)
      .def_readwrite("detectors", &GateParams::detectors)
      .def_readwrite("dims", &GateParams::dims);

  py::class_<GateResult>(m, "GateResult")
      .def_readonly("rho_out", &GateResult::rho_out)
      .def_readonly("p_success", &GateResult::p_success)
      .def_readonly("p_apd", &GateResult::p_apd)
      .def_readonly("fidelity_vs_ideal", &GateResult::fidelity_vs_ideal)
      .def_readonly("target_alpha_opt", &GateResult::target_alpha_opt);

  py::class_<BalanceResult>(m, "BalanceResult")
      .def_readonly("feasible", &BalanceResult::feasible)
      .def_readonly("window", &BalanceResult::window)
      .def_readonly("ratio", &BalanceResult::ratio)
      .def_readonly("p_plus", &BalanceResult::p_plus)
      .def_readonly("p_minus", &BalanceResult::p_minus);

  py::class_<QuadratureDataset>(m, "QuadratureDataset")
      .def_readonly("eta", &QuadratureDataset::eta)
      .def_readonly("seed", &QuadratureDataset::seed)
      .def_property_readonly("thetas",
                             [](const QuadratureDataset& d) {
                               VecXr v(d.records.size());
                               for (std::size_t i = 0; i < d.records.size(); ++i)
                                 v[static_cast<Eigen::Index>(i)] =
                                     d.records[i].theta;
                               return v;
                             })
      .def_property_readonly("xs", [](const QuadratureDataset& d) {
        VecXr v(d.records.size());
        for (std::size_t i = 0; i < d.records.size(); ++i)
          v[static_cast<Eigen::Index>(i)] = d.records[i].x;
        return v;
      });

  py::class_<ReconstructionReport>(m, "ReconstructionReport")
      .def_readonly("rho_hat", &ReconstructionReport::rho_hat)
      .def_readonly("loglik", &ReconstructionReport::loglik)
      .def_readonly("converged", &ReconstructionReport::converged)
      .def_readonly("iterations", &ReconstructionReport::iterations)
      .def_readonly("floored_bins", &ReconstructionReport::floored_bins);

  // state factories
  m.def("coherent", py::overload_cast<cxd, int>(&coherent), py::arg("alpha"),
        py::arg("d"));
  m.def("cat", &cat, py::arg("alpha"), py::arg("parity"), py::arg("d"));
  m.def("squeezed_vacuum", &squeezed_vacuum, py::arg("s"), py::arg("d"));
  m.def("csq_ket", &csq_ket, py::arg("spec"), py::arg("d"));
  m.def("basis_ket", [](int n, int d) { return basis_ket(n, {d}); },
        py::arg("n"), py::arg("d"));
  m.def("projector", &projector, py::arg("psi"));
  m.def("thermal", &thermal, py::arg("nbar"), py::arg("d"));
  m.def("squeeze_db", &squeeze_db, py::arg("s"));
  m.def("squeeze_from_db", &squeeze_from_db, py::arg("db"));

  // analytic gate maps
  m.def("ideal_output", &ideal_output, py::arg("spec"), py::arg("t"),
        py::arg("r"), py::arg("x"), py::arg("d"));
  m.def("squeezed_resource_output", &squeezed_resource_output, py::arg("spec"),
        py::arg("t"), py::arg("r"), py::arg("s"), py::arg("x"), py::arg("d"));
  m.def("y1_coefficient", &y1_coefficient, py::arg("t"), py::arg("r"),
        py::arg("alpha"));
  m.def("y2_coefficient", &y2_coefficient, py::arg("t"), py::arg("r"),
        py::arg("s"), py::arg("alpha"));
  m.def("optimal_heralding_x", &optimal_heralding_x, py::arg("t"),
        py::arg("r"), py::arg("s"), py::arg("alpha"));
  m.def("hadamard_target", &hadamard_target, py::arg("spec"),
        py::arg("target_alpha"), py::arg("d"));

  // full conditioned simulation
  m.def(
      "simulate_gate",
      [](const GateParams& p, const CsqSpec& spec) {
        return simulate_gate(p, spec);
      },
      py::arg("params"), py::arg("spec"),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "balance_window",
      [](const GateParams& p) { return balance_window(p); }, py::arg("params"),
      py::call_guard<py::gil_scoped_release>());

  // analysis
  m.def("fidelity", py::overload_cast<const DensityOperator&, const FockKet&>(
                        &fidelity),
        py::arg("rho"), py::arg("psi"));
  m.def("wigner", &wigner, py::arg("rho"), py::arg("x"), py::arg("p"));
  m.def("wigner_grid", &wigner_grid, py::arg("rho"), py::arg("xs"),
        py::arg("ps"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "best_target_alpha",
      [](const DensityOperator& rho, int parity, double lo, double hi) {
        auto fit = best_target_alpha(rho, parity, lo, hi);
        return py::make_tuple(fit.alpha_star, fit.f_star);
      },
      py::arg("rho"), py::arg("parity"), py::arg("lo"), py::arg("hi"));
  m.def(
      "fidelity_curve",
      [](const VecXr& alphas, int d) {
        auto pts = fidelity_curve(alphas, d);
        std::vector<std::tuple<double, double, double, double>> out;
        out.reserve(pts.size());
        for (const auto& p : pts)
          out.emplace_back(p.alpha, p.f_ideal, p.f_squeezed, p.s_opt_db);
        return out;
      },
      py::arg("alphas"), py::arg("d") = 24,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "process_fidelity",
      [](const GateParams& p, bool ideal) { return process_fidelity(p, ideal); },
      py::arg("params"), py::arg("ideal_channel") = false,
      py::call_guard<py::gil_scoped_release>());

  // tomography
  m.def("default_phases", &default_phases, py::arg("n") = 12);
  m.def("sample_homodyne", &sample_homodyne, py::arg("rho"), py::arg("phases"),
        py::arg("n_per_phase"), py::arg("eta"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("maxlik_reconstruct", &maxlik_reconstruct, py::arg("data"),
        py::arg("d"), py::arg("eta_correction") = 1.0,
        py::arg("max_iter") = 2000, py::arg("tol") = 1e-10,
        py::call_guard<py::gil_scoped_release>());
}
