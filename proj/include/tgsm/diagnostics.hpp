#pragma once

// Runtime checks of the thermodynamic structure: energies, dissipation,
// entropy production, internal-energy balance, the positivity weight phi(t)
// and the global estimate monitor.

#include <string>
#include <vector>

#include "tgsm/thermal.hpp"

namespace tgsm {

struct StepReport {
  double t = 0.0;
  double dt = 0.0;
  double free_energy = 0.0;        ///< int W
  double entropy = 0.0;            ///< int s
  double internal_energy = 0.0;    ///< int (W + theta s)
  double dissipation = 0.0;        ///< dt * int xi over the step
  double entropy_production = 0.0; ///< int kappa grad theta.grad theta / theta^2 + xi / theta
  double energy_residual = 0.0;
  double entropy_residual = 0.0;   ///< |d int s - dt * production| / (1 + |d int s|)
  double external_power = 0.0;     ///< work of f (or of the prescribed strain) per unit time
  double theta_min = 0.0;
  double theta_max = 0.0;
  double phi = 1.0;
  double positivity_margin = 0.0;  ///< theta_min - theta_bar phi
  double monitor = 0.0;            ///< global estimate monitor
  int picard_iters = 0;
  double picard_residual = 0.0;
  std::vector<double> picard_trace;
};

struct EnergyTotals {
  double mechanical = 0.0;  ///< int W_mech
  double free_energy = 0.0;
  double entropy = 0.0;
  double internal_energy = 0.0;
};

/// Integrals over the domain with the quadratures of the discrete scheme.
EnergyTotals energy_totals(const Model& model, const Vec& u, const Vec& z, const Vec& theta, double t);

/// int xi over the domain (a rate).
double dissipation_rate(const HeatSourceField& source);

/// Throws DomainError when theta <= 0 anywhere.
double entropy_production(const Model& model, const Vec& theta, const HeatSourceField& source);

/// |d_internal - work| / (1 + |d_internal|).
double energy_balance_residual(double delta_internal, double external_work);

/// Work of the external data over one step: F(t_new).(u_new - u_prev), or in
/// point mode sigma_new : (eps_new - eps_prev) with the viscous and thermal stress.
double external_work(const Model& model, const SimState& prev, const Vec& u_new, const Vec& z_new,
                     const Vec& eps_new, const Vec& theta_tilde, double dt);

/// Constants entering phi(t).
struct PositivityParams {
  double theta_bar = 1.0;
  double beta = 0.0;
  double alpha = 0.0;
  double c_a = 1.0;
  double c_b = 1.0;
  double c_c = 1.0;
  double c_h2_z = 0.0;
  double tol_rel = 1e-8;  ///< violation threshold relative to theta_bar

  static PositivityParams from_material(const MaterialModel& mat, const ResolvedBounds& b);
};

/// Integrand of the exponent of phi at one time.
double phi_rate(const PositivityParams& p, double theta_inf, double z_inf);

struct PositivityReport {
  std::vector<double> phi;
  std::vector<double> margin;
  bool ok = true;
  int first_violation = -1;  ///< step index, -1 when none
  std::string message;
};

/// phi by trapezoidal quadrature over the trajectory and the margin
/// theta_min - theta_bar phi at every step.
PositivityReport positivity_check(const std::vector<double>& times, const std::vector<Vec>& theta_traj,
                                  const std::vector<Vec>& z_traj, const PositivityParams& params);

/// |u|^2_{W^{1,2}} + |z|^2_{L2} + alpha |grad z|^2_{L2} + |theta|_{L1}.
double global_estimate_monitor(const Model& model, const Vec& u, const Vec& z, const Vec& theta);

}  // namespace tgsm
