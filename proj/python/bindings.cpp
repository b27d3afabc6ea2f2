#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "noonsim/dsl.hpp"
#include "noonsim/dynamics.hpp"
#include "noonsim/experiments.hpp"
#include "noonsim/observables.hpp"
#include "noonsim/oracle.hpp"
#include "noonsim/protocol.hpp"

namespace py = pybind11;
using namespace noonsim;

namespace {

py::array_t<std::complex<double>> amplitudes_array(const JointState& s) {
  const auto m = static_cast<py::ssize_t>(s.modes());
  py::array_t<std::complex<double>> out({py::ssize_t{2}, m, m});
  auto* dst = out.mutable_data();
  const auto src = s.amplitudes();
  std::copy(src.begin(), src.end(), dst);
  return out;
}

JointState state_from_array(py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 3 || a.shape(0) != 2 || a.shape(1) != a.shape(2)) {
    throw std::invalid_argument("amplitudes must have shape (2, cutoff + 1, cutoff + 1)");
  }
  JointState s(static_cast<int>(a.shape(1)) - 1);
  std::copy(a.data(), a.data() + a.size(), s.amplitudes().begin());
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-photon cavity QED simulator core";

  // Exception types live as long as the interpreter; keep raw handles.
  static PyObject* parse_error = py::exception<dsl::ParseError>(m, "ParseError", PyExc_ValueError).release().ptr();
  static PyObject* run_aborted = py::exception<RunAborted>(m, "RunAborted", PyExc_RuntimeError).release().ptr();
  static PyObject* leakage_error = py::exception<LeakageError>(m, "LeakageError", PyExc_RuntimeError).release().ptr();
  static PyObject* impossible = py::exception<ImpossibleOutcome>(m, "ImpossibleOutcome", PyExc_RuntimeError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const dsl::ParseError& e) {
      py::object err = py::handle(parse_error)(e.what());
      err.attr("line") = e.line();
      err.attr("column") = e.column();
      err.attr("token") = e.token();
      PyErr_SetObject(parse_error, err.ptr());
    } catch (const RunAborted& e) {
      py::object err = py::handle(run_aborted)(e.what());
      err.attr("step_index") = e.step_index();
      PyErr_SetObject(run_aborted, err.ptr());
    } catch (const LeakageError& e) {
      py::set_error(leakage_error, e.what());
    } catch (const ImpossibleOutcome& e) {
      py::set_error(impossible, e.what());
    }
  });

  py::enum_<AtomLevel>(m, "AtomLevel").value("Excited", AtomLevel::Excited).value("Ground", AtomLevel::Ground);
  py::enum_<Cavity>(m, "Cavity").value("A", Cavity::A).value("B", Cavity::B);

  py::class_<Params>(m, "Params")
      .def(py::init([](double chi, double delta, int cutoff) {
             Params p{chi, delta, cutoff};
             p.validate();
             return p;
           }),
           py::arg("chi") = 0.0, py::arg("delta") = 0.0, py::arg("cutoff") = kDefaultCutoff)
      .def_readwrite("chi", &Params::chi)
      .def_readwrite("delta", &Params::delta)
      .def_readwrite("cutoff", &Params::cutoff)
      .def(py::self == py::self)
      .def("__repr__", [](const Params& p) {
        return "Params(chi=" + dsl::format_number(p.chi) + ", delta=" + dsl::format_number(p.delta) +
               ", cutoff=" + std::to_string(p.cutoff) + ")";
      });

  py::class_<JointState>(m, "JointState")
      .def(py::init<int>(), py::arg("cutoff"))
      .def_static("from_amplitudes", &state_from_array)
      .def_property_readonly("cutoff", &JointState::cutoff)
      .def_property_readonly("amplitudes", &amplitudes_array)
      .def("amplitude", py::overload_cast<AtomLevel, int, int>(&JointState::amplitude, py::const_))
      .def("norm", &JointState::norm);

  m.def("make_basis_state", &make_basis_state, py::arg("atom"), py::arg("n_a"), py::arg("n_b"), py::arg("cutoff") = kDefaultCutoff);
  m.def("superposition_atom", &superposition_atom, py::arg("n_a"), py::arg("n_b"), py::arg("cutoff") = kDefaultCutoff);
  m.def("inner", &inner);
  m.def("project_atom", [](const JointState& s, AtomLevel outcome) {
    auto proj = project_atom(s, outcome);
    return py::make_tuple(proj.probability, std::move(proj.collapsed));
  });
  m.def("boundary_leakage", &boundary_leakage, py::arg("state"), py::arg("margin"));

  py::class_<PropagatorCoefficients>(m, "PropagatorCoefficients")
      .def_readonly("c_upper", &PropagatorCoefficients::c_upper)
      .def_readonly("c_lower", &PropagatorCoefficients::c_lower)
      .def_readonly("s_val", &PropagatorCoefficients::s_val)
      .def_readonly("global_phase", &PropagatorCoefficients::global_phase);
  m.def("gamma_n", &gamma_n);
  m.def("delta_n", &delta_n);
  m.def("coefficients", &coefficients);
  m.def("evolve_cavity", &evolve_cavity, py::arg("state"), py::arg("cavity"), py::arg("tau"), py::arg("params"));
  m.def("rotate_atom", &rotate_atom, py::arg("state"), py::arg("theta"));

  m.def("build_hamiltonian", [](int cutoff, const Params& p) { return oracle::build_hamiltonian(cutoff, p).matrix; });
  m.def("expm_evolve", &oracle::expm_evolve, py::arg("state"), py::arg("cavity"), py::arg("tau"), py::arg("params"));

  py::class_<NoonTarget>(m, "NoonTarget")
      .def(py::init<int, int>(), py::arg("n_photons") = 4, py::arg("relative_sign") = 1)
      .def_readwrite("n_photons", &NoonTarget::n_photons)
      .def_readwrite("relative_sign", &NoonTarget::relative_sign);
  m.def("atomic_inversion", &atomic_inversion);
  m.def("inversion_trace", [](AtomLevel atom0, int n0, Cavity cavity, const Params& p, double tau_max, int steps) {
    auto series = inversion_trace(atom0, n0, cavity, p, tau_max, steps);
    return py::make_tuple(py::array(py::cast(series.taus)), py::array(py::cast(series.w)));
  });
  m.def("photon_distribution", [](const JointState& s, Cavity cavity) {
    return py::array(py::cast(photon_distribution(s, cavity)));
  });
  m.def("noon_fidelity", &noon_fidelity);
  m.def("make_noon_state", &make_noon_state, py::arg("target"), py::arg("atom") = AtomLevel::Ground,
        py::arg("cutoff") = kDefaultCutoff);

  py::class_<Program>(m, "Program")
      .def(py::init<>())
      .def_readwrite("params", &Program::params)
      .def("__len__", [](const Program& p) { return p.steps.size(); })
      .def("steps", [](const Program& p) {
        std::vector<std::string> out;
        for (const auto& s : p.steps) out.push_back(describe(s));
        return out;
      })
      .def(py::self == py::self)
      .def("__str__", &dsl::format);

  py::class_<Event>(m, "Event")
      .def_readonly("step_index", &Event::step_index)
      .def_readonly("description", &Event::description)
      .def_readonly("probability", &Event::probability)
      .def_readonly("outcome", &Event::outcome);
  py::class_<RunResult>(m, "RunResult")
      .def_readonly("final_state", &RunResult::final_state)
      .def_readonly("events", &RunResult::events)
      .def_readonly("joint_postselect_probability", &RunResult::joint_postselect_probability);

  m.def("run", [](const Program& p) { return run(p); });
  m.def("twotwo_program", &twotwo_program, py::arg("tau"), py::arg("params") = Params{});
  m.def("noon_program", &noon_program, py::arg("tau"), py::arg("params") = Params{});
  m.def("parse", &dsl::parse, py::arg("source"));
  m.def("format", &dsl::format, py::arg("program"));

  py::class_<NoonReport>(m, "NoonReport")
      .def_readonly("tau", &NoonReport::tau)
      .def_readonly("p_ground", &NoonReport::p_ground)
      .def_readonly("p_excited", &NoonReport::p_excited)
      .def_readonly("fidelity_ground", &NoonReport::fidelity_ground)
      .def_readonly("fidelity_excited", &NoonReport::fidelity_excited);
  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("chi", &SweepRow::chi)
      .def_readonly("delta", &SweepRow::delta)
      .def_readonly("fidelity", &SweepRow::fidelity)
      .def_readonly("p_ground", &SweepRow::p_ground);
  py::class_<TauSearchResult>(m, "TauSearchResult")
      .def_readonly("tau_star", &TauSearchResult::tau_star)
      .def_readonly("fidelity", &TauSearchResult::fidelity);
  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("trials", &ValidationReport::trials)
      .def_readonly("compared", &ValidationReport::compared)
      .def_readonly("rejected", &ValidationReport::rejected)
      .def_readonly("max_deviation", &ValidationReport::max_deviation)
      .def_readonly("passed", &ValidationReport::passed);

  m.def("noon_report", &noon_report, py::arg("tau"), py::arg("params") = Params{});
  m.def("sweep_chi", &sweep_chi, py::arg("tau"), py::arg("chi_max"), py::arg("steps"), py::arg("deltas"),
        py::arg("cutoff") = kDefaultCutoff);
  m.def("compensate_detuning", &compensate_detuning, py::arg("tau"), py::arg("chis"), py::arg("delta_lo"),
        py::arg("delta_hi"), py::arg("delta_steps"), py::arg("cutoff") = kDefaultCutoff);
  m.def("find_tau", &find_tau, py::arg("lo"), py::arg("hi"), py::arg("tol"), py::arg("params") = Params{},
        py::arg("grid_points") = kTauGridPoints);
  m.def("validate_oracle", &validate_oracle, py::arg("cutoff"), py::arg("trials"), py::arg("seed"),
        py::arg("max_support") = py::none(), py::arg("at_boundary") = false);

  m.attr("__version__") = NOONSIM_VERSION;
}
