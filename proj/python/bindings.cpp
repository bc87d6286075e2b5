#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tgsm/errors.hpp"
#include "tgsm/scenario.hpp"
#include "tgsm/writers.hpp"

namespace py = pybind11;

namespace {

py::dict report_columns(const std::vector<tgsm::StepReport>& reports) {
  // Same columns as the CSV writer.
  const std::vector<tgsm::StepReport> parsed = tgsm::parse_timeseries(tgsm::format_timeseries(reports));
  py::dict out;
  const auto& cols = tgsm::timeseries_columns();
  std::vector<std::vector<double>> data(cols.size());
  for (const auto& r : parsed) {
    const double row[] = {r.t, r.dt, r.free_energy, r.entropy, r.internal_energy, r.dissipation,
                          r.entropy_production, r.energy_residual, r.entropy_residual, r.external_power,
                          r.theta_min, r.theta_max, r.phi, r.positivity_margin, r.monitor,
                          static_cast<double>(r.picard_iters), r.picard_residual};
    for (std::size_t k = 0; k < cols.size(); ++k) data[k].push_back(row[k]);
  }
  for (std::size_t k = 0; k < cols.size(); ++k) out[py::str(cols[k])] = data[k];
  return out;
}

const char* status_name(tgsm::RunStatus s) {
  switch (s) {
    case tgsm::RunStatus::ok: return "ok";
    case tgsm::RunStatus::solver_abort: return "solver_abort";
    default: return "diagnostic_violation";
  }
}

class Scenario {
 public:
  explicit Scenario(const std::string& name_or_path) : sc_(tgsm::load_scenario(name_or_path)) {}
  static Scenario from_text(const std::string& text, const std::string& name) {
    return Scenario(tgsm::load_scenario_text(text, name), 0);
  }

  const std::string& name() const { return sc_.name; }
  std::vector<std::string> warnings() const { return sc_.warnings; }
  int dim() const { return sc_.model->disc().dim(); }
  int num_nodes() const { return sc_.model->disc().num_nodes(); }
  int z_dim() const { return sc_.model->z_dim(); }
  int num_z_points() const { return sc_.model->disc().num_z_points(); }
  double dt() const { return sc_.coupling.dt; }
  double t_end() const { return sc_.coupling.t_end; }

  py::dict run(std::optional<double> dt, std::optional<double> t_end, std::optional<std::string> mode,
               int max_steps) {
    tgsm::ScenarioConfig sc = sc_;
    if (t_end) sc.coupling.t_end = *t_end;
    if (mode) {
      if (*mode == "staggered_once") sc.coupling.mode = tgsm::CouplingMode::staggered_once;
      else if (*mode == "picard_to_convergence") sc.coupling.mode = tgsm::CouplingMode::picard_to_convergence;
      else throw py::value_error("mode must be staggered_once or picard_to_convergence");
    }
    if (dt) {
      sc.coupling.dt = *dt;
      tgsm::reset_initial_step(sc);
    }
    tgsm::RunResult res;
    {
      py::gil_scoped_release release;
      res = tgsm::run(*sc.model, sc.initial, sc.coupling, max_steps);
    }
    py::dict out;
    out["status"] = status_name(res.status);
    out["message"] = res.message;
    out["timeseries"] = report_columns(res.reports);
    const tgsm::SimState& last = res.trajectory.back();
    out["t"] = last.t;
    out["u"] = last.u;
    out["z"] = last.z;
    out["theta"] = last.theta;
    out["monitor_max"] = res.monitor_max;
    out["step_cuts"] = res.step_cuts;
    if (sc.model->disc().point_mode()) {
      std::vector<double> strain, stress;
      for (const auto& s : res.trajectory) {
        strain.push_back(s.eps_point(0));
        stress.push_back(tgsm::point_stress(*sc.model, s)(0));
      }
      out["strain"] = strain;
      out["stress"] = stress;
    }
    return out;
  }

  std::string initial_checkpoint() const { return tgsm::format_checkpoint(sc_.initial); }

 private:
  Scenario(tgsm::ScenarioConfig sc, int) : sc_(std::move(sc)) {}
  tgsm::ScenarioConfig sc_;
};

py::dict indicator(double beta, double c_hat, double t_end, double q, std::optional<double> c_h2, double c0) {
  const tgsm::IndicatorResult r = tgsm::global_existence_indicator(beta, c_hat, t_end, q, c_h2, c0);
  py::dict out;
  out["threshold"] = r.threshold;
  out["flag"] = r.flag;
  out["decoupled"] = r.decoupled;
  out["message"] = r.message;
  if (r.has_alpha_branch) {
    out["alpha_flag"] = r.alpha_flag;
    out["r_best"] = r.r_best;
    out["gamma_min"] = r.gamma_min;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Thermo-visco-plastic generalized standard material solver";

  py::register_exception<tgsm::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<tgsm::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<tgsm::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<tgsm::ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<const std::string&>(), py::arg("name_or_path"))
      .def_static("from_text", &Scenario::from_text, py::arg("text"), py::arg("name") = "inline")
      .def_property_readonly("name", &Scenario::name)
      .def_property_readonly("warnings", &Scenario::warnings)
      .def_property_readonly("dim", &Scenario::dim)
      .def_property_readonly("num_nodes", &Scenario::num_nodes)
      .def_property_readonly("z_dim", &Scenario::z_dim)
      .def_property_readonly("num_z_points", &Scenario::num_z_points)
      .def_property_readonly("dt", &Scenario::dt)
      .def_property_readonly("t_end", &Scenario::t_end)
      .def("run", &Scenario::run, py::arg("dt") = py::none(), py::arg("t_end") = py::none(),
           py::arg("mode") = py::none(), py::arg("max_steps") = -1)
      .def("initial_checkpoint", &Scenario::initial_checkpoint);

  m.def("list_scenarios", &tgsm::list_scenarios);
  m.def("indicator", &indicator, py::arg("beta"), py::arg("c_hat"), py::arg("t_end"), py::arg("q"),
        py::arg("c_h2") = py::none(), py::arg("c0") = 0.0);
  m.def("timeseries_columns", &tgsm::timeseries_columns);
}
