#include "tgsm/mech.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "tgsm/errors.hpp"

namespace tgsm {

namespace {

// Per-point data of the discrete flow rule.
struct PointForce {
  Vec strain_force;  // (1/W) sum w Q^T E eps
  double theta = 0.0;
  double kpp = 0.0;  // diagonal of K_alpha
  Vec offdiag;       // sum_{q != p} (K_alpha)_pq z_q
};

Vec strain_force(const Model& model, const std::vector<Vec>& eps, const ZPoint& zp) {
  const Mat& q = model.material().tensors().q_lin;
  Vec s = Vec::Zero(q.cols());
  for (const auto& [c, w] : zp.cells)
    s += w * q.transpose() * (model.disc().cells()[static_cast<std::size_t>(c)].elasticity * eps[static_cast<std::size_t>(c)]);
  return s / zp.weight;
}

void alpha_coupling(const Model& model, const Vec& z, int p, PointForce& pf) {
  const int m = model.z_dim();
  pf.kpp = 0.0;
  pf.offdiag = Vec::Zero(m);
  const SparseMat& k = model.ops().k_alpha;
  if (k.nonZeros() == 0) return;
  for (SparseMat::InnerIterator it(k, p); it; ++it) {
    if (it.row() == p) {
      pf.kpp = it.value();
    } else {
      pf.offdiag += it.value() * z.segment(it.row() * m, m);
    }
  }
}

// G at one point: -strain force + S z + a + H1'(z) + theta H2'(z).
Vec point_driving_force(const Model& model, int p, const PointForce& pf, const Vec& zp) {
  const MaterialModel& mat = model.material();
  const auto& ops = model.ops();
  Vec g = -pf.strain_force + ops.z_stiffness[static_cast<std::size_t>(p)] * zp + ops.z_aff_force[static_cast<std::size_t>(p)] +
          mat.hardening().h1_gradient(zp);
  if (!mat.hardening().h2_vanishes()) {
    if (!(pf.theta > 0.0)) throw DomainError("temperature must be positive when H2 is active");
    g += pf.theta * mat.hardening().h2_gradient(zp);
  }
  return g;
}

Mat point_jacobian(const Model& model, int p, const PointForce& pf, const Vec& zp) {
  const MaterialModel& mat = model.material();
  Mat k = model.ops().z_stiffness[static_cast<std::size_t>(p)] + mat.hardening().h1_hessian(zp);
  if (!mat.hardening().h2_vanishes()) k += pf.theta * mat.hardening().h2_hessian(zp);
  k = 0.5 * (k + k.transpose());
  if (k.rows() == 1) return k.cwiseMax(0.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  const Vec lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

// Solve the inclusion at point p for the new z value, other points frozen.
Vec solve_point(const Model& model, int p, const PointForce& pf, const Vec& zn, const Vec& z_guess, double dt,
                Linearization mode) {
  const MaterialModel& mat = model.material();
  const ZPoint& zp = model.disc().z_points()[static_cast<std::size_t>(p)];
  const int m = model.z_dim();
  const Mat& b = mat.tensors().viscosity_b;
  Vec w = (z_guess - zn) / dt;
  const int sweeps = mode == Linearization::newton_local ? 50 : 1;
  for (int it = 0; it < sweeps; ++it) {
    const Vec zk = zn + dt * w;
    const Mat kplus = point_jacobian(model, p, pf, zk);
    ProxProblem prob;
    prob.metric = b + dt * kplus + (dt * pf.kpp / zp.weight) * Mat::Identity(m, m);
    prob.rhs = point_driving_force(model, p, pf, zk) - dt * (kplus * w) + (pf.kpp * zn + pf.offdiag) / zp.weight;
    prob.dt = dt;
    prob.potential = &mat.dissipation();
    const Vec next = solve_inclusion(prob, {}, &w);
    const double change = (next - w).lpNorm<Eigen::Infinity>();
    w = next;
    if (change <= 1e-13 * (1.0 + w.lpNorm<Eigen::Infinity>())) break;
  }
  return zn + dt * w;
}

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

// Right-hand side of the free-dof momentum system for given z.
Vec momentum_rhs(const Model& model, const Vec& z, const Vec& u_prev, const Vec& theta, double dt, double t) {
  const auto& ops = model.ops();
  return model.load_vector(t) + ops.coupling_q * z + ops.coupling_q_aff - ops.coupling_beta * theta +
         (1.0 / dt) * (ops.k_a * u_prev);
}

Vec restrict(const Vec& v, const std::vector<int>& free) {
  Vec out(static_cast<Eigen::Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(free[k]);
  return out;
}

}  // namespace

MechResult mech_step(const Model& model, const SimState& prev, const Vec& theta_tilde, const MechStepConfig& cfg,
                     const MechResult* initial_guess) {
  if (!(cfg.dt > 0.0) || !(cfg.tol_uz > 0.0)) throw DomainError("time step and tolerance must be positive");
  const Discretization& disc = model.disc();
  if (theta_tilde.size() != disc.num_nodes()) throw ShapeError("temperature field has wrong length");
  if (!theta_tilde.allFinite()) throw DomainError("temperature field is not finite");
  if (prev.u.size() != disc.num_u_dofs() || prev.z.size() != static_cast<Eigen::Index>(disc.num_z_points()) * model.z_dim())
    throw ShapeError("state does not match the discretization");

  const double dt = cfg.dt;
  const double t = prev.t + dt;
  const int m = model.z_dim();
  const int np = disc.num_z_points();
  const auto& free = disc.free_u_dofs();

  MechResult res;
  res.u = initial_guess ? initial_guess->u : prev.u;
  res.z = initial_guess ? initial_guess->z : prev.z;
  if (disc.point_mode()) res.eps_point = model.strains(res.u, t).front();

  std::vector<PointForce> pforce(static_cast<std::size_t>(np));
  for (int p = 0; p < np; ++p)
    pforce[static_cast<std::size_t>(p)].theta = model.theta_at(disc.z_points()[static_cast<std::size_t>(p)], theta_tilde);

  const SpdSolver* solver = free.empty() ? nullptr : &model.momentum_solver(dt);
  const Vec rhs_fixed = free.empty() ? Vec() : momentum_rhs(model, Vec::Zero(res.z.size()), prev.u, theta_tilde, dt, t);

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    const Vec u_old = res.u, z_old = res.z;
    const std::vector<Vec> eps = model.strains(res.u, t);
    for (int p = 0; p < np; ++p) {
      PointForce& pf = pforce[static_cast<std::size_t>(p)];
      pf.strain_force = strain_force(model, eps, disc.z_points()[static_cast<std::size_t>(p)]);
      alpha_coupling(model, res.z, p, pf);
      res.z.segment(p * m, m) = solve_point(model, p, pf, prev.z.segment(p * m, m), res.z.segment(p * m, m), dt,
                                            cfg.linearization);
    }
    if (solver) {
      const Vec rhs = rhs_fixed + model.ops().coupling_q * res.z;
      const Vec uf = solver->solve(restrict(rhs, free));
      res.u.setZero();
      for (std::size_t k = 0; k < free.size(); ++k) res.u(free[k]) = uf(static_cast<Eigen::Index>(k));
    }
    const double inc = inf_norm(res.u - u_old) + inf_norm(res.z - z_old);
    res.report.increments.push_back(inc);
    res.report.iterations = iter;
    if (!std::isfinite(inc)) break;
    if (inc <= cfg.tol_uz * (1.0 + inf_norm(res.u) + inf_norm(res.z))) {
      res.report.momentum_residual = momentum_residual(model, res.u, res.z, prev.u, theta_tilde, dt, t);
      res.report.flow_residual = flow_residual(model, res.u, res.z, prev.z, theta_tilde, dt, t);
      return res;
    }
  }
  throw ConvergenceError("mechanical alternation did not converge", res.report.increments);
}

double momentum_residual(const Model& model, const Vec& u, const Vec& z, const Vec& u_prev, const Vec& theta_tilde,
                         double dt, double t) {
  const auto& ops = model.ops();
  const auto& free = model.disc().free_u_dofs();
  if (free.empty()) return 0.0;
  const Vec r = ops.k_e * u + (1.0 / dt) * (ops.k_a * u) - momentum_rhs(model, z, u_prev, theta_tilde, dt, t);
  return restrict(r, free).norm();
}

double flow_residual(const Model& model, const Vec& u, const Vec& z, const Vec& z_prev, const Vec& theta_tilde,
                     double dt, double t) {
  const Discretization& disc = model.disc();
  const int m = model.z_dim();
  const std::vector<Vec> eps = model.strains(u, t);
  double worst = 0.0;
  for (int p = 0; p < disc.num_z_points(); ++p) {
    const ZPoint& zp = disc.z_points()[static_cast<std::size_t>(p)];
    PointForce pf;
    pf.theta = model.theta_at(zp, theta_tilde);
    pf.strain_force = strain_force(model, eps, zp);
    alpha_coupling(model, z, p, pf);
    const Vec zp_new = z.segment(p * m, m);
    ProxProblem prob;
    prob.metric = model.material().tensors().viscosity_b;
    prob.rhs = point_driving_force(model, p, pf, zp_new) + (pf.kpp * zp_new + pf.offdiag) / zp.weight;
    prob.dt = dt;
    prob.potential = &model.material().dissipation();
    const Vec w = (zp_new - z_prev.segment(p * m, m)) / dt;
    worst = std::max(worst, subgradient_residual(w, prob));
  }
  return worst;
}

}  // namespace tgsm
