#include "tgsm/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "tgsm/errors.hpp"

namespace tgsm {

EnergyTotals energy_totals(const Model& model, const Vec& u, const Vec& z, const Vec& theta, double t) {
  const Discretization& disc = model.disc();
  const MaterialModel& mat = model.material();
  const auto& ops = model.ops();
  const auto& tp = mat.tensors();
  const int m = model.z_dim();
  const std::vector<Vec> eps = model.strains(u, t);
  const bool h2 = !mat.hardening().h2_vanishes();

  double mech = 0.0, coupling = 0.0;
  for (int p = 0; p < disc.num_z_points(); ++p) {
    const ZPoint& zp = disc.z_points()[static_cast<std::size_t>(p)];
    const Vec zv = z.segment(p * m, m);
    const Vec inel = mat.inelastic_strain(zv);
    for (const auto& [c, w] : zp.cells) {
      const Vec el = eps[static_cast<std::size_t>(c)] - inel;
      mech += 0.5 * w * el.dot(disc.cells()[static_cast<std::size_t>(c)].elasticity * el);
    }
    mech += zp.weight * mat.hardening().h1(zv);
    if (h2) coupling += zp.weight * model.theta_at(zp, theta) * mat.hardening().h2(zv);
  }
  if (ops.k_alpha.nonZeros() > 0)
    for (int k = 0; k < m; ++k) {
      Vec zk(disc.num_z_points());
      for (int p = 0; p < disc.num_z_points(); ++p) zk(p) = z(p * m + k);
      mech += 0.5 * zk.dot(ops.k_alpha * zk);
    }
  double beta_term = 0.0;
  for (std::size_t c = 0; c < disc.cells().size(); ++c) {
    const Cell& cell = disc.cells()[c];
    const double tr = tp.beta * tensor::trace(eps[c], mat.tensor_dim());
    if (tr == 0.0) continue;
    double th = 0.0;
    for (int a : cell.nodes) th += theta(a);
    beta_term += cell.volume / static_cast<double>(cell.nodes.size()) * th * tr;
  }
  coupling += beta_term;

  // Coupling entropy -int (beta tr eps + H2) uses the same quadrature with theta removed.
  double coup_entropy = 0.0;
  for (std::size_t c = 0; c < disc.cells().size(); ++c) {
    const Cell& cell = disc.cells()[c];
    coup_entropy += cell.volume * tp.beta * tensor::trace(eps[c], mat.tensor_dim());
  }
  if (h2)
    for (int p = 0; p < disc.num_z_points(); ++p)
      coup_entropy += disc.z_points()[static_cast<std::size_t>(p)].weight * mat.hardening().h2(z.segment(p * m, m));

  double wtheta = 0.0, clog = 0.0, theta_s = 0.0;
  for (int i = 0; i < disc.num_nodes(); ++i) {
    const double th = theta(i);
    if (!(th > 0.0)) throw DomainError("temperature must be positive");
    const double mc = ops.m_c_lumped(i);
    wtheta += mc * (th * std::log(th) - th);
    clog += mc * std::log(th);
    theta_s += mc * th * std::log(th);
  }
  EnergyTotals out;
  out.mechanical = mech;
  out.free_energy = mech - wtheta + coupling;
  out.entropy = clog - coup_entropy;
  // int theta s: theta c ln theta minus the theta-weighted coupling integral.
  out.internal_energy = out.free_energy + (theta_s - coupling);
  return out;
}

double dissipation_rate(const HeatSourceField& source) {
  double sum = 0.0;
  for (const HeatSample& s : source.samples) sum += s.weight * s.xi;
  return sum;
}

double entropy_production(const Model& model, const Vec& theta, const HeatSourceField& source) {
  const Discretization& disc = model.disc();
  if (theta.size() != disc.num_nodes()) throw ShapeError("temperature field has wrong length");
  if (!(theta.minCoeff() > 0.0)) throw DomainError("entropy production needs a positive temperature");
  double sum = 0.0;
  if (!disc.point_mode()) {
    for (const QuadPoint& q : disc.quad_points()) {
      const Cell& cell = disc.cells()[static_cast<std::size_t>(q.cell)];
      Vec grad = Vec::Zero(disc.dim());
      double th = 0.0;
      for (std::size_t a = 0; a < cell.nodes.size(); ++a) {
        grad += theta(cell.nodes[a]) * cell.grad.row(static_cast<Eigen::Index>(a)).transpose();
      }
      for (const auto& [i, phi] : q.shape) th += phi * theta(i);
      sum += q.weight * grad.dot(model.material().conductivity_at(q.x) * grad) / (th * th);
    }
  }
  for (const HeatSample& s : source.samples) {
    double th = 0.0;
    for (const auto& [i, phi] : s.shape) th += phi * theta(i);
    sum += s.weight * s.xi / th;
  }
  return sum;
}

double energy_balance_residual(double delta_internal, double external_work) {
  return std::abs(delta_internal - external_work) / (1.0 + std::abs(delta_internal));
}

double external_work(const Model& model, const SimState& prev, const Vec& u_new, const Vec& z_new,
                     const Vec& eps_new, const Vec& theta_tilde, double dt) {
  const Discretization& disc = model.disc();
  if (!disc.point_mode()) return model.load_vector(prev.t + dt).dot(u_new - prev.u);
  const MaterialModel& mat = model.material();
  const Vec deps = eps_new - prev.eps_point;
  const Vec sigma = mat.elastic_stress(eps_new, z_new.head(model.z_dim()), theta_tilde(0)) +
                    mat.tensors().viscosity_a * deps / dt;
  return sigma.dot(deps);
}

PositivityParams PositivityParams::from_material(const MaterialModel& mat, const ResolvedBounds& b) {
  PositivityParams p;
  p.theta_bar = mat.thermal().theta_bar;
  p.beta = mat.tensors().beta;
  p.alpha = mat.tensors().alpha;
  p.c_a = b.c_a;
  p.c_b = b.c_b;
  p.c_c = b.c_c;
  p.c_h2_z = b.big_c_h2_z;
  return p;
}

double phi_rate(const PositivityParams& p, double theta_inf, double z_inf) {
  double k = 9.0 * p.beta * p.beta / (2.0 * p.c_a);
  if (p.alpha > 0.0) k += p.c_h2_z * p.c_h2_z / p.c_b * (1.0 + z_inf * z_inf);
  return k * theta_inf / p.c_c;
}

PositivityReport positivity_check(const std::vector<double>& times, const std::vector<Vec>& theta_traj,
                                  const std::vector<Vec>& z_traj, const PositivityParams& params) {
  if (times.size() != theta_traj.size()) throw ShapeError("trajectory and time grid differ in length");
  PositivityReport r;
  const double tol = params.tol_rel * params.theta_bar;
  double exponent = 0.0, prev_rate = 0.0;
  for (std::size_t n = 0; n < times.size(); ++n) {
    const Vec& th = theta_traj[n];
    const double z_inf = n < z_traj.size() && z_traj[n].size() ? z_traj[n].lpNorm<Eigen::Infinity>() : 0.0;
    const double rate = phi_rate(params, th.lpNorm<Eigen::Infinity>(), z_inf);
    if (n > 0) exponent += 0.5 * (times[n] - times[n - 1]) * (prev_rate + rate);
    prev_rate = rate;
    const double phi = std::exp(-exponent);
    const double margin = th.minCoeff() - params.theta_bar * phi;
    r.phi.push_back(phi);
    r.margin.push_back(margin);
    if (!(margin >= -tol) && r.ok) {
      r.ok = false;
      r.first_violation = static_cast<int>(n);
      std::ostringstream os;
      os << "positivity violated at step " << n << " (t = " << times[n] << "): theta_min = " << th.minCoeff()
         << " < theta_bar * phi = " << params.theta_bar * phi;
      r.message = os.str();
    }
  }
  return r;
}

double global_estimate_monitor(const Model& model, const Vec& u, const Vec& z, const Vec& theta) {
  const Discretization& disc = model.disc();
  const auto& ops = model.ops();
  const int m = model.z_dim();
  double v = u.size() ? u.dot(ops.h1_gram * u) : 0.0;
  for (int p = 0; p < disc.num_z_points(); ++p)
    v += disc.z_points()[static_cast<std::size_t>(p)].weight * z.segment(p * m, m).squaredNorm();
  if (ops.k_alpha.nonZeros() > 0)
    for (int k = 0; k < m; ++k) {
      Vec zk(disc.num_z_points());
      for (int p = 0; p < disc.num_z_points(); ++p) zk(p) = z(p * m + k);
      v += zk.dot(ops.k_alpha * zk);
    }
  v += ops.volume_lumped.dot(theta.cwiseAbs());
  return v;
}

}  // namespace tgsm
