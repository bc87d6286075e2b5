#include "tgsm/thermal.hpp"

#include <cmath>
#include <limits>

#include "tgsm/errors.hpp"

namespace tgsm {

Vec HeatSourceField::dissipation_load(int num_nodes) const {
  Vec out = Vec::Zero(num_nodes);
  for (const HeatSample& s : samples)
    for (const auto& [i, phi] : s.shape) out(i) += s.weight * phi * s.xi;
  return out;
}

Vec HeatSourceField::coupling_diagonal(int num_nodes) const {
  Vec out = Vec::Zero(num_nodes);
  for (const HeatSample& s : samples)
    for (const auto& [i, phi] : s.shape) out(i) += s.weight * phi * s.gamma;
  return out;
}

double HeatSourceField::total(const Vec& theta) const {
  double sum = 0.0;
  for (const HeatSample& s : samples) {
    double th = 0.0;
    for (const auto& [i, phi] : s.shape) th += phi * theta(i);
    sum += s.weight * (s.xi + th * s.gamma);
  }
  return sum;
}

double dissipation_density(const MaterialModel& mat, const Vec& eps_rate, const Vec& z_rate) {
  if (eps_rate.size() != mat.sym_size() || z_rate.size() != mat.z_dim()) throw ShapeError("rate has wrong size");
  const auto& t = mat.tensors();
  return eps_rate.dot(t.viscosity_a * eps_rate) + z_rate.dot(t.viscosity_b * z_rate) + mat.dissipation().value(z_rate);
}

double heat_source_density(const MaterialModel& mat, const Vec& eps_rate, const Vec& z, const Vec& z_rate, double theta) {
  const double gamma = mat.tensors().beta * tensor::trace(eps_rate, mat.tensor_dim()) +
                       (mat.hardening().h2_vanishes() ? 0.0 : mat.hardening().h2_gradient(z).dot(z_rate));
  return dissipation_density(mat, eps_rate, z_rate) + theta * gamma;
}

HeatSourceField heat_rhs(const Model& model, const std::vector<Vec>& eps_new, const std::vector<Vec>& eps_prev,
                         const Vec& z_new, const Vec& z_prev, double dt) {
  const Discretization& disc = model.disc();
  const MaterialModel& mat = model.material();
  const auto& tp = mat.tensors();
  const int m = model.z_dim();
  if (eps_new.size() != disc.cells().size() || eps_prev.size() != disc.cells().size())
    throw ShapeError("strain fields do not match the cells");
  if (z_new.size() != z_prev.size() || z_new.size() != static_cast<Eigen::Index>(disc.num_z_points()) * m)
    throw ShapeError("internal variable fields do not match the z points");
  HeatSourceField field;
  for (std::size_t c = 0; c < disc.cells().size(); ++c) {
    const Cell& cell = disc.cells()[c];
    const Vec rate = (eps_new[c] - eps_prev[c]) / dt;
    const double xi = rate.dot(tp.viscosity_a * rate);
    const double gamma = tp.beta * tensor::trace(rate, mat.tensor_dim());
    if (xi == 0.0 && gamma == 0.0) continue;
    const double w = cell.volume / static_cast<double>(cell.nodes.size());
    for (int a : cell.nodes) field.samples.push_back({w, {{a, 1.0}}, xi, gamma});
  }
  const bool h2 = !mat.hardening().h2_vanishes();
  for (int p = 0; p < disc.num_z_points(); ++p) {
    const ZPoint& zp = disc.z_points()[static_cast<std::size_t>(p)];
    const Vec zn = z_new.segment(p * m, m);
    const Vec rate = (zn - z_prev.segment(p * m, m)) / dt;
    const double xi = rate.dot(tp.viscosity_b * rate) + mat.dissipation().value(rate);
    const double gamma = h2 ? mat.hardening().h2_gradient(zn).dot(rate) : 0.0;
    if (xi == 0.0 && gamma == 0.0) continue;
    field.samples.push_back({zp.weight, zp.theta, xi, gamma});
  }
  return field;
}

Vec heat_step(const Model& model, const Vec& theta_prev, const HeatSourceField& source, const HeatStepConfig& cfg,
              const Vec& theta_coupling) {
  if (!(cfg.dt > 0.0)) throw DomainError("time step must be positive");
  const int n = model.disc().num_nodes();
  if (theta_prev.size() != n) throw ShapeError("temperature field has wrong length");
  const auto& ops = model.ops();
  const double dt = cfg.dt;
  const Vec cdiag = source.coupling_diagonal(n);
  Vec rhs = source.dissipation_load(n);
  SparseMat a = ops.k_kappa;
  if (cfg.mass == MassKind::lumped) {
    rhs += ops.m_c_lumped.cwiseProduct(theta_prev) / dt;
    for (int i = 0; i < n; ++i) a.coeffRef(i, i) += ops.m_c_lumped(i) / dt;
  } else {
    rhs += ops.m_c * theta_prev / dt;
    a += (1.0 / dt) * ops.m_c;
  }
  if (cfg.treatment == CouplingTreatment::semi_implicit) {
    for (int i = 0; i < n; ++i)
      if (cdiag(i) != 0.0) a.coeffRef(i, i) -= cdiag(i);
  } else {
    const Vec& th = theta_coupling.size() == n ? theta_coupling : theta_prev;
    rhs += cdiag.cwiseProduct(th);
  }
  return SpdSolver(a).solve(rhs);
}

double source_l2_norm(const HeatSourceField& source, const Vec& theta) {
  double sum = 0.0;
  for (const HeatSample& s : source.samples) {
    double th = 0.0;
    for (const auto& [i, phi] : s.shape) th += phi * theta(i);
    const double f = s.xi + th * s.gamma;
    sum += s.weight * f * f;
  }
  return std::sqrt(sum);
}

APrioriReport a_priori_monitor(const Model& model, const std::vector<double>& times, const std::vector<Vec>& theta_traj,
                               const std::vector<double>& source_l2, double c_theta) {
  if (times.size() != theta_traj.size() || times.empty()) throw ShapeError("trajectory and time grid differ in length");
  const auto& ops = model.ops();
  auto h1 = [&](const Vec& th) { return std::sqrt(th.dot(ops.mass * th) + th.dot(ops.laplace * th)); };
  APrioriReport r;
  r.theta0_h1 = h1(theta_traj.front());
  r.max_theta_h1 = r.theta0_h1;
  double dot2 = 0.0, f2 = 0.0;
  for (std::size_t n = 1; n < theta_traj.size(); ++n) {
    const double dt = times[n] - times[n - 1];
    r.max_theta_h1 = std::max(r.max_theta_h1, h1(theta_traj[n]));
    const Vec rate = (theta_traj[n] - theta_traj[n - 1]) / dt;
    dot2 += dt * rate.dot(ops.mass * rate);
    if (n - 1 < source_l2.size()) f2 += dt * source_l2[n - 1] * source_l2[n - 1];
  }
  r.theta_dot_l2l2 = std::sqrt(dot2);
  r.source_l2l2 = std::sqrt(f2);
  r.lhs = r.max_theta_h1 + r.theta_dot_l2l2;
  double cmin = std::numeric_limits<double>::infinity();
  for (const QuadPoint& q : model.disc().quad_points()) cmin = std::min(cmin, model.material().heat_capacity_at(q.x));
  const double tau = times.back() - times.front();
  r.bound = c_theta * std::exp(tau / cmin) * (r.theta0_h1 + r.source_l2l2);
  r.ratio = r.bound > 0.0 ? r.lhs / r.bound : 0.0;
  return r;
}

}  // namespace tgsm
