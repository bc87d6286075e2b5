#pragma once

// A discretized problem (mesh + material + loading) and the time-stepping state.

#include <functional>
#include <map>
#include <memory>

#include "tgsm/fem.hpp"

namespace tgsm {

struct Loading {
  /// Nodal body force f(t) at every u dof (node * dim + component). Empty means f = 0.
  std::function<Vec(double t)> nodal_force;
  /// Point mode only: prescribed Mandel strain eps(t).
  std::function<Vec(double t)> strain_path;
};

/// State carried from one time step to the next.
struct SimState {
  int step = 0;
  double t = 0.0;
  Vec u;          ///< nodal displacement, node * dim + component
  Vec z;          ///< internal variable, z point * dim Z + component
  Vec theta;      ///< nodal temperature
  Vec eps_point;  ///< prescribed strain in point mode, empty otherwise

  double t_prev = 0.0;
  Vec u_prev, z_prev, theta_prev, eps_point_prev;

  double dt = 0.0;          ///< step size for the next step
  double dt_initial = 0.0;  ///< upper bound for step growth
  int clean_steps = 0;      ///< accepted steps since the last cut

  double phi_exponent = 0.0;  ///< accumulated exponent of the positivity weight
  double phi_rate = 0.0;      ///< integrand of that exponent at t
};

class Model {
 public:
  Model(Mesh mesh, std::shared_ptr<const MaterialModel> material, Loading loading = {});

  const Discretization& disc() const { return disc_; }
  const AssembledOperators& ops() const { return ops_; }
  const MaterialModel& material() const { return disc_.material(); }
  const Loading& loading() const { return loading_; }

  /// Cell strains for displacement u at time t; the prescribed strain in point mode.
  std::vector<Vec> strains(const Vec& u, double t) const;
  /// Nodal force values f(t) (zero when no loading is given).
  Vec nodal_force(double t) const;
  /// Consistent load vector int f . phi over all u dofs.
  Vec load_vector(double t) const;
  /// Cholesky (or CG) of K_E + K_A / dt on the free dofs, cached per dt.
  const SpdSolver& momentum_solver(double dt) const;

  /// z at point p as a dim Z vector.
  Vec z_at(const Vec& z, int p) const { return z.segment(static_cast<Eigen::Index>(p) * z_dim(), z_dim()); }
  double theta_at(const ZPoint& p, const Vec& theta) const;
  int z_dim() const { return disc_.z_dim(); }

  /// Initial state with u, z, theta given; z may be a single dim Z vector (broadcast).
  SimState initial_state(const Vec& u0, const Vec& z0, const Vec& theta0, double dt) const;

 private:
  Discretization disc_;
  AssembledOperators ops_;
  Loading loading_;
  mutable std::map<double, std::shared_ptr<SpdSolver>> solvers_;
};

}  // namespace tgsm
