#include "tgsm/model.hpp"

#include "tgsm/errors.hpp"

namespace tgsm {

Model::Model(Mesh mesh, std::shared_ptr<const MaterialModel> material, Loading loading)
    : disc_(std::move(mesh), std::move(material)), ops_(assemble(disc_)), loading_(std::move(loading)) {
  if (disc_.point_mode() && !loading_.strain_path)
    loading_.strain_path = [n = disc_.material().sym_size()](double) { return Vec::Zero(n); };
}

std::vector<Vec> Model::strains(const Vec& u, double t) const {
  if (disc_.point_mode()) {
    Vec eps = loading_.strain_path(t);
    if (eps.size() != material().sym_size()) throw ShapeError("prescribed strain has wrong Mandel length");
    return {eps};
  }
  return disc_.cell_strains(u);
}

Vec Model::nodal_force(double t) const {
  const int n = disc_.num_u_dofs();
  if (!loading_.nodal_force) return Vec::Zero(n);
  Vec f = loading_.nodal_force(t);
  if (f.size() != n) throw ShapeError("nodal force has wrong length");
  return f;
}

Vec Model::load_vector(double t) const {
  const int d = disc_.dim();
  const Vec f = nodal_force(t);
  Vec out = Vec::Zero(f.size());
  if (d == 0) return out;
  const SparseMat& m = ops_.mass;
  for (int col = 0; col < m.outerSize(); ++col)
    for (SparseMat::InnerIterator it(m, col); it; ++it)
      for (int k = 0; k < d; ++k) out(it.row() * d + k) += it.value() * f(col * d + k);
  return out;
}

const SpdSolver& Model::momentum_solver(double dt) const {
  auto it = solvers_.find(dt);
  if (it != solvers_.end()) return *it->second;
  const SparseMat k = ops_.restrict_free(ops_.k_e + (1.0 / dt) * ops_.k_a, disc_.free_u_dofs());
  auto solver = std::make_shared<SpdSolver>(k);
  if (solvers_.size() > 16) solvers_.clear();
  solvers_.emplace(dt, solver);
  return *solver;
}

double Model::theta_at(const ZPoint& p, const Vec& theta) const {
  double v = 0.0;
  for (const auto& [node, phi] : p.theta) v += phi * theta(node);
  return v;
}

SimState Model::initial_state(const Vec& u0, const Vec& z0, const Vec& theta0, double dt) const {
  const int m = z_dim();
  const int np = disc_.num_z_points();
  SimState s;
  s.u = u0.size() == 0 ? Vec::Zero(disc_.num_u_dofs()) : u0;
  if (s.u.size() != disc_.num_u_dofs()) throw ShapeError("initial displacement has wrong length");
  for (std::size_t i = 0; i < disc_.u_dof_to_free().size(); ++i)
    if (disc_.u_dof_to_free()[i] < 0) s.u(static_cast<Eigen::Index>(i)) = 0.0;
  if (z0.size() == m && np != 1) {
    s.z = z0.replicate(np, 1);
  } else if (z0.size() == 0) {
    s.z = Vec::Zero(static_cast<Eigen::Index>(np) * m);
  } else {
    s.z = z0;
  }
  if (s.z.size() != static_cast<Eigen::Index>(np) * m) throw ShapeError("initial internal variable has wrong length");
  s.theta = theta0.size() == 1 && disc_.num_nodes() != 1 ? Vec::Constant(disc_.num_nodes(), theta0(0)) : theta0;
  if (s.theta.size() != disc_.num_nodes()) throw ShapeError("initial temperature has wrong length");
  if (disc_.point_mode()) s.eps_point = loading_.strain_path(0.0);
  s.u_prev = s.u;
  s.z_prev = s.z;
  s.theta_prev = s.theta;
  s.eps_point_prev = s.eps_point;
  s.dt = s.dt_initial = dt;
  return s;
}

}  // namespace tgsm
