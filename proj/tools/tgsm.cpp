// Command line front end: run, check, point-driver, indicator, list.
//
// Exit codes: 0 success, 1 invalid scenario, 2 solver abort,
// 3 diagnostic violation, 64 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tgsm/errors.hpp"
#include "tgsm/scenario.hpp"
#include "tgsm/writers.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kAbort = 2;
constexpr int kViolation = 3;
constexpr int kUsage = 64;

struct RunOptions {
  std::string scenario;
  std::optional<double> dt, t_end, picard_tol;
  std::optional<std::string> mode;
  std::string out_dir;
};

int load(const std::string& name, tgsm::ScenarioConfig& sc) {
  try {
    sc = tgsm::load_scenario(name);
  } catch (const tgsm::ValidationError& e) {
    std::cerr << "scenario '" << name << "' is invalid:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return kInvalid;
  } catch (const tgsm::ParseError& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";
  return kOk;
}

int apply_overrides(tgsm::ScenarioConfig& sc, const RunOptions& o) {
  if (o.dt) sc.coupling.dt = *o.dt;
  if (o.t_end) sc.coupling.t_end = *o.t_end;
  if (o.picard_tol) sc.coupling.picard_tol = *o.picard_tol;
  if (o.mode) {
    if (*o.mode == "staggered_once") {
      sc.coupling.mode = tgsm::CouplingMode::staggered_once;
    } else if (*o.mode == "picard_to_convergence") {
      sc.coupling.mode = tgsm::CouplingMode::picard_to_convergence;
    } else {
      std::cerr << "--mode must be staggered_once or picard_to_convergence\n";
      return kUsage;
    }
  }
  if (!(sc.coupling.dt > 0.0) || !(sc.coupling.t_end > 0.0) || !(sc.coupling.picard_tol > 0.0)) {
    std::cerr << "--dt, --t-end and --picard-tol must be positive\n";
    return kUsage;
  }
  tgsm::reset_initial_step(sc);
  return kOk;
}

std::string step_name(const std::string& dir, int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fields_%05d.vtk", step);
  return (std::filesystem::path(dir) / buf).string();
}

int cmd_run(const RunOptions& o) {
  tgsm::ScenarioConfig sc;
  if (int rc = load(o.scenario, sc)) return rc;
  if (int rc = apply_overrides(sc, o)) return rc;
  const std::string dir = o.out_dir.empty() ? (std::filesystem::path("out") / sc.name).string() : o.out_dir;
  std::filesystem::create_directories(dir);

  tgsm::RunResult res;
  try {
    res = tgsm::run(*sc.model, sc.initial, sc.coupling);
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kAbort;
  }
  const tgsm::Model& model = *sc.model;
  if (sc.output.timeseries) tgsm::write_timeseries(res.reports, (std::filesystem::path(dir) / "timeseries.csv").string());
  if (sc.output.fields) {
    for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
      const bool last = k + 1 == res.trajectory.size();
      const bool every = sc.output.field_every > 0 && k % static_cast<std::size_t>(sc.output.field_every) == 0;
      if (k == 0 || last || every) tgsm::write_fields(model, res.trajectory[k], step_name(dir, res.trajectory[k].step));
    }
  }
  tgsm::SummaryInfo info;
  info.scenario = sc.name;
  info.status = res.status == tgsm::RunStatus::ok ? "ok"
                : res.status == tgsm::RunStatus::solver_abort ? "solver_abort"
                                                                : "diagnostic_violation";
  info.message = res.message;
  info.steps = static_cast<int>(res.reports.size()) - 1;
  info.t_final = res.trajectory.back().t;
  info.monitor_max = res.monitor_max;
  info.min_positivity_margin = res.reports.front().positivity_margin;
  for (const auto& r : res.reports) {
    info.max_energy_residual = std::max(info.max_energy_residual, r.energy_residual);
    info.min_positivity_margin = std::min(info.min_positivity_margin, r.positivity_margin);
  }
  info.korn = tgsm::korn_estimate(model.disc(), model.ops());
  info.a_priori = res.a_priori;
  info.step_cuts = res.step_cuts;
  if (sc.output.summary) tgsm::write_summary(info, (std::filesystem::path(dir) / "summary.json").string());

  std::cout << sc.name << ": " << info.status << ", " << info.steps << " steps to t = " << info.t_final
            << ", output in " << dir << "\n";
  if (res.status == tgsm::RunStatus::solver_abort) {
    std::cerr << res.message << "\n";
    return kAbort;
  }
  if (res.status == tgsm::RunStatus::diagnostic_violation) {
    std::cerr << res.message << "\n";
    return kViolation;
  }
  return kOk;
}

int cmd_check(const std::string& name) {
  tgsm::ScenarioConfig sc;
  if (int rc = load(name, sc)) return rc;
  const auto& d = sc.model->disc();
  std::cout << sc.name << ": ok (" << d.num_nodes() << " nodes, " << d.num_u_dofs() << " displacement dofs, "
            << d.num_z_points() << " z points of dim " << d.z_dim() << ")\n";
  return kOk;
}

int cmd_point_driver(const RunOptions& o) {
  tgsm::ScenarioConfig sc;
  if (int rc = load(o.scenario, sc)) return rc;
  if (int rc = apply_overrides(sc, o)) return rc;
  if (!sc.model->disc().point_mode()) {
    std::cerr << "point-driver needs a scenario with mesh.dim = 0\n";
    return kInvalid;
  }
  tgsm::RunResult res;
  try {
    res = tgsm::run(*sc.model, sc.initial, sc.coupling);
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kAbort;
  }
  std::ofstream file;
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    file.open((std::filesystem::path(o.out_dir) / "stress_strain.csv").string());
  }
  std::ostream& out = o.out_dir.empty() ? std::cout : file;
  const int n = sc.model->material().sym_size();
  const int m = sc.model->z_dim();
  out << "t";
  for (int k = 0; k < n; ++k) out << ",strain_" << k;
  for (int k = 0; k < n; ++k) out << ",stress_" << k;
  for (int k = 0; k < m; ++k) out << ",z_" << k;
  out << ",theta\n";
  for (const auto& s : res.trajectory) {
    const tgsm::Vec sigma = tgsm::point_stress(*sc.model, s);
    out << tgsm::format_double(s.t);
    for (int k = 0; k < n; ++k) out << "," << tgsm::format_double(s.eps_point(k));
    for (int k = 0; k < n; ++k) out << "," << tgsm::format_double(sigma(k));
    for (int k = 0; k < m; ++k) out << "," << tgsm::format_double(s.z(k));
    out << "," << tgsm::format_double(s.theta(0)) << "\n";
  }
  if (res.status == tgsm::RunStatus::solver_abort) {
    std::cerr << res.message << "\n";
    return kAbort;
  }
  if (res.status == tgsm::RunStatus::diagnostic_violation) {
    std::cerr << res.message << "\n";
    return kViolation;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermo-visco-plastic solver for generalized standard materials"};
  app.require_subcommand(1);

  RunOptions ro;
  auto add_run_flags = [&ro](CLI::App* sub) {
    sub->add_option("scenario", ro.scenario, "scenario name or path")->required();
    sub->add_option("--dt", ro.dt, "time step");
    sub->add_option("--t-end", ro.t_end, "final time");
    sub->add_option("--mode", ro.mode, "staggered_once | picard_to_convergence");
    sub->add_option("--picard-tol", ro.picard_tol, "Picard tolerance");
  };
  CLI::App* run = app.add_subcommand("run", "run a scenario and write CSV, VTK and JSON output");
  add_run_flags(run);
  run->add_option("--out-dir", ro.out_dir, "output directory (default out/<scenario>)");

  std::string check_name;
  CLI::App* check = app.add_subcommand("check", "validate a scenario");
  check->add_option("scenario", check_name, "scenario name or path")->required();

  CLI::App* point = app.add_subcommand("point-driver", "0D constitutive run, stress-strain CSV on stdout");
  add_run_flags(point);
  point->add_option("--out-dir", ro.out_dir, "write stress_strain.csv here instead of stdout");

  double beta = 0.0, c_hat = 1.0, t_end = 1.0, q = 16.0, c0 = 0.0;
  std::optional<double> c_h2;
  CLI::App* ind = app.add_subcommand("indicator", "smallness indicator for global existence");
  ind->add_option("--beta", beta, "thermal expansion coefficient")->required();
  ind->add_option("--c-hat", c_hat, "abstract constant C_hat > 0")->required();
  ind->add_option("--t-end", t_end, "final time T")->required();
  ind->add_option("--q", q, "integrability exponent q > 8")->required();
  ind->add_option("--c-h2", c_h2, "gradient bound of H2 (alpha > 0 branch)");
  ind->add_option("--c0", c0, "growth constant c0 of the alpha > 0 branch");

  CLI::App* list = app.add_subcommand("list", "list shipped scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*run) return cmd_run(ro);
    if (*check) return cmd_check(check_name);
    if (*point) return cmd_point_driver(ro);
    if (*list) {
      for (const auto& s : tgsm::list_scenarios()) std::cout << s << "\n";
      return kOk;
    }
    if (*ind) {
      const tgsm::IndicatorResult r = tgsm::global_existence_indicator(beta, c_hat, t_end, q, c_h2, c0);
      std::cout << "threshold " << tgsm::format_double(r.threshold) << "\n";
      std::cout << "flag " << (r.flag ? "true" : "false") << "\n";
      if (r.has_alpha_branch) std::cout << "alpha_branch_flag " << (r.alpha_flag ? "true" : "false") << "\n";
      std::cout << r.message << "\n";
      return kOk;
    }
  } catch (const tgsm::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAbort;
  }
  return kUsage;
}
