#pragma once

// One backward-Euler step of momentum balance and flow rule at a frozen
// temperature field, solved by alternating exact u solves and pointwise
// flow-rule inclusions.

#include <vector>

#include "tgsm/model.hpp"

namespace tgsm {

enum class Linearization { frozen_z, newton_local };

struct MechStepConfig {
  double dt = 1e-2;
  double tol_uz = 1e-9;  ///< on |du|_inf + |dz|_inf relative to 1 + |u|_inf + |z|_inf
  int max_iter = 200;
  Linearization linearization = Linearization::frozen_z;
};

struct MechReport {
  int iterations = 0;
  std::vector<double> increments;
  double momentum_residual = 0.0;
  double flow_residual = 0.0;
};

struct MechResult {
  Vec u, z;
  Vec eps_point;  ///< prescribed strain at the new time (point mode)
  MechReport report;
};

/// Advance (u, z) from prev.t to prev.t + cfg.dt with theta_tilde frozen.
/// Throws ConvergenceError carrying the increment trace when the alternation stalls.
MechResult mech_step(const Model& model, const SimState& prev, const Vec& theta_tilde, const MechStepConfig& cfg,
                     const MechResult* initial_guess = nullptr);

/// Euclidean norm of the weak momentum residual on the free dofs at time t.
double momentum_residual(const Model& model, const Vec& u, const Vec& z, const Vec& u_prev, const Vec& theta_tilde,
                         double dt, double t);

/// Largest pointwise subgradient residual of the discrete flow rule.
double flow_residual(const Model& model, const Vec& u, const Vec& z, const Vec& z_prev, const Vec& theta_tilde,
                     double dt, double t);

}  // namespace tgsm
