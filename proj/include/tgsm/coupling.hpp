#pragma once

// Outer time loop: per-step Picard iteration between the mechanical step at
// frozen temperature and the heat step, step-size control, and the smallness
// indicator for global existence.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tgsm/diagnostics.hpp"
#include "tgsm/mech.hpp"
#include "tgsm/thermal.hpp"

namespace tgsm {

enum class CouplingMode { staggered_once, picard_to_convergence };

struct CouplingConfig {
  double t_end = 1.0;
  double dt = 1e-2;
  double dt_min = 1e-8;
  bool adapt_dt = true;      ///< halve on failure, double after 5 clean steps
  double picard_tol = 1e-8;  ///< on the L4 nodal norm of theta - theta_tilde
  int picard_max = 50;
  CouplingMode mode = CouplingMode::picard_to_convergence;
  double relaxation = 1.0;   ///< theta_tilde <- (1 - w) theta_tilde + w theta

  MechStepConfig mech;       ///< dt is overwritten per step
  HeatStepConfig heat;       ///< dt is overwritten per step

  double c_theta = 1.0;      ///< constant of the a priori monitor
  double c0 = std::numeric_limits<double>::infinity();  ///< bound for the global estimate monitor
  std::optional<PositivityParams> positivity;  ///< derived from the material when unset
};

struct StepOutcome {
  SimState state;
  StepReport report;
};

/// One time step of size state.dt (or dt_override when > 0).
/// Throws ConvergenceError when Picard does not converge within picard_max.
StepOutcome picard_step(const Model& model, const SimState& state, const CouplingConfig& cfg, double dt_override = 0.0);

enum class RunStatus { ok, solver_abort, diagnostic_violation };

struct RunResult {
  RunStatus status = RunStatus::ok;
  std::string message;
  std::vector<SimState> trajectory;  ///< initial state first
  std::vector<StepReport> reports;   ///< one per accepted step; reports[0] describes the initial state
  std::vector<double> failure_trace; ///< residual trace of the aborting step
  APrioriReport a_priori;
  double monitor_max = 0.0;
  int step_cuts = 0;
};

/// Report for a state without a preceding step (energies, theta range, monitor).
StepReport initial_report(const Model& model, const SimState& state, const CouplingConfig& cfg);

/// Advance from state.t to cfg.t_end. max_steps < 0 means unlimited.
RunResult run(const Model& model, const SimState& initial, const CouplingConfig& cfg, int max_steps = -1);

/// Point mode: total stress E(eps - Qz) + beta theta I + A eps' of a state
/// (eps' by backward difference; zero for the initial state).
Vec point_stress(const Model& model, const SimState& s);

/// L4 nodal norm with lumped volume weights.
double l4_norm(const Model& model, const Vec& v);

struct IndicatorResult {
  double threshold = 0.0;
  bool flag = false;
  bool decoupled = false;
  std::string message;
  // alpha > 0 branch
  bool has_alpha_branch = false;
  bool alpha_flag = false;
  double r_best = 0.0;
  double gamma_min = 0.0;
};

/// threshold = 1 / (2 C_hat T^(1/q)), flag = 0 < beta < threshold. With c_h2 set,
/// also scans gamma(R) = C_hat (X + 1)^4 exp(4 c0 (X + 1) T) - R,
/// X = (beta^2 + c_h2^2) R^2, for some R with gamma(R) < 0.
IndicatorResult global_existence_indicator(double beta, double c_hat, double t_end, double q,
                                           std::optional<double> c_h2 = std::nullopt, double c0 = 0.0);

}  // namespace tgsm
