#pragma once

// Backward-Euler heat step with the thermo-mechanical source
//   c theta' - div(kappa grad theta) = xi + theta gamma,
//   xi = A eps' : eps' + B z'.z' + Psi(z'),   gamma = beta tr eps' + dH2(z).z'.

#include <vector>

#include "tgsm/model.hpp"

namespace tgsm {

enum class CouplingTreatment { semi_implicit, explicit_ };
enum class MassKind { lumped, consistent };

struct HeatStepConfig {
  double dt = 1e-2;
  CouplingTreatment treatment = CouplingTreatment::semi_implicit;
  MassKind mass = MassKind::lumped;
};

/// One quadrature sample of the source: weight, nodal interpolation, and the
/// dissipation (xi) and theta-coefficient (gamma) densities.
struct HeatSample {
  double weight = 0.0;
  std::vector<std::pair<int, double>> shape;
  double xi = 0.0;
  double gamma = 0.0;
};

struct HeatSourceField {
  std::vector<HeatSample> samples;

  /// int xi phi_i (size nodes).
  Vec dissipation_load(int num_nodes) const;
  /// Row-sum lumped int gamma phi_i.
  Vec coupling_diagonal(int num_nodes) const;
  /// int (xi + theta gamma) over the domain.
  double total(const Vec& theta) const;
};

/// Pointwise source density xi + theta gamma for given rates.
double heat_source_density(const MaterialModel& mat, const Vec& eps_rate, const Vec& z, const Vec& z_rate, double theta);
/// Pointwise dissipation density A e:e + B w.w + Psi(w).
double dissipation_density(const MaterialModel& mat, const Vec& eps_rate, const Vec& z_rate);

/// Source field from backward-difference rates between two mechanical states.
/// Cell terms use vertex quadrature; z terms sit at the z points.
HeatSourceField heat_rhs(const Model& model, const std::vector<Vec>& eps_new, const std::vector<Vec>& eps_prev,
                         const Vec& z_new, const Vec& z_prev, double dt);

/// Solve m (theta - theta_prev)/dt + K_kappa theta = load(xi) + C theta*, where
/// theta* = theta (semi-implicit) or theta_coupling (explicit).
Vec heat_step(const Model& model, const Vec& theta_prev, const HeatSourceField& source, const HeatStepConfig& cfg,
              const Vec& theta_coupling = Vec());

/// Discrete quantities of the a priori temperature estimate.
struct APrioriReport {
  double max_theta_h1 = 0.0;      ///< max_n |theta^n|_{W^{1,2}}
  double theta_dot_l2l2 = 0.0;    ///< |theta'|_{L2(L2)}
  double lhs = 0.0;               ///< sum of the two
  double theta0_h1 = 0.0;
  double source_l2l2 = 0.0;
  double bound = 0.0;             ///< c_theta exp(T / c^c) (|theta0| + |f|)
  double ratio = 0.0;             ///< lhs / bound
};

/// theta_traj[n] at times[n]; source_l2[n] = |f(t_n)|_{L2} for n >= 1.
APrioriReport a_priori_monitor(const Model& model, const std::vector<double>& times, const std::vector<Vec>& theta_traj,
                               const std::vector<double>& source_l2, double c_theta = 1.0);

/// L2 norm of the source density xi + theta gamma (sample quadrature).
double source_l2_norm(const HeatSourceField& source, const Vec& theta);

}  // namespace tgsm
