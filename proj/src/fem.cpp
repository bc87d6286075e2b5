#include "tgsm/fem.hpp"

#include <cmath>
#include <string>

#include <Eigen/IterativeLinearSolvers>

#include "tgsm/errors.hpp"

namespace tgsm {

using Triplets = std::vector<Eigen::Triplet<double>>;

Mesh build_mesh(const GeometrySpec& spec) {
  Mesh mesh;
  mesh.dim = spec.dim;
  switch (spec.dim) {
    case 0:
      if (spec.tensor_dim < 1 || spec.tensor_dim > 3) throw DomainError("point mode tensor_dim must be 1, 2 or 3");
      mesh.tensor_dim = spec.tensor_dim;
      mesh.nodes.push_back(Vec());
      mesh.dirichlet_u.assign(1, 0);
      mesh.neumann_all.assign(1, 0);
      return mesh;
    case 1: {
      const int n = spec.cells[0];
      if (n <= 0) throw DomainError("element count must be positive");
      if (!(spec.length[0] > 0.0)) throw DomainError("extent must be positive");
      mesh.tensor_dim = 1;
      for (int i = 0; i <= n; ++i) mesh.nodes.push_back(Vec::Constant(1, spec.length[0] * i / n));
      for (int i = 0; i < n; ++i) mesh.elements.push_back({i, i + 1});
      mesh.dirichlet_u.assign(n + 1, 0);
      mesh.dirichlet_u.front() = mesh.dirichlet_u.back() = 1;
      mesh.neumann_all = mesh.dirichlet_u;
      return mesh;
    }
    case 2: {
      const int nx = spec.cells[0], ny = spec.cells[1];
      if (nx <= 0 || ny <= 0) throw DomainError("element counts must be positive");
      if (!(spec.length[0] > 0.0 && spec.length[1] > 0.0)) throw DomainError("extents must be positive");
      mesh.tensor_dim = 2;
      auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
      for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
          Vec x(2);
          x << spec.length[0] * i / nx, spec.length[1] * j / ny;
          mesh.nodes.push_back(x);
          const bool bnd = i == 0 || j == 0 || i == nx || j == ny;
          mesh.dirichlet_u.push_back(bnd ? 1 : 0);
        }
      mesh.neumann_all = mesh.dirichlet_u;
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          mesh.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
          mesh.elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
      return mesh;
    }
    default: throw DomainError("mesh dimension must be 0, 1 or 2");
  }
}

ReferenceRule reference_rule(int dim, int order) {
  ReferenceRule r;
  if (dim == 0) {
    r.points.push_back(Vec());
    r.weights.push_back(1.0);
  } else if (dim == 1) {
    if (order <= 1) {
      r.points.push_back(Vec::Constant(1, 0.5));
      r.weights.push_back(1.0);
    } else {
      const double a = 0.5 / std::sqrt(3.0);
      r.points.push_back(Vec::Constant(1, 0.5 - a));
      r.points.push_back(Vec::Constant(1, 0.5 + a));
      r.weights = {0.5, 0.5};
    }
  } else if (dim == 2) {
    if (order <= 1) {
      Vec p(2);
      p << 1.0 / 3.0, 1.0 / 3.0;
      r.points.push_back(p);
      r.weights.push_back(0.5);
    } else {
      const double pts[3][2] = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
      for (const auto& q : pts) {
        Vec p(2);
        p << q[0], q[1];
        r.points.push_back(p);
        r.weights.push_back(1.0 / 6.0);
      }
    }
  } else {
    throw DomainError("quadrature dimension must be 0, 1 or 2");
  }
  return r;
}

namespace {

Vec reference_shape(int dim, const Vec& xi) {
  Vec phi(dim + 1);
  if (dim == 0) {
    phi(0) = 1.0;
  } else if (dim == 1) {
    phi << 1.0 - xi(0), xi(0);
  } else {
    phi << 1.0 - xi(0) - xi(1), xi(0), xi(1);
  }
  return phi;
}

}  // namespace

Discretization::Discretization(Mesh mesh, std::shared_ptr<const MaterialModel> material)
    : mesh_(std::move(mesh)), material_(std::move(material)) {
  const MaterialModel& mat = *material_;
  if (mat.tensor_dim() != mesh_.tensor_dim)
    throw ShapeError("material tensor dimension " + std::to_string(mat.tensor_dim()) +
                     " differs from mesh tensor dimension " + std::to_string(mesh_.tensor_dim));
  nodal_z_ = mat.tensors().alpha > 0.0;
  const int d = mesh_.dim;
  const int nsym = mat.sym_size();
  const ReferenceRule rule = reference_rule(d, mesh_.quadrature_order);

  if (d == 0) {
    Cell c;
    c.nodes = {0};
    c.volume = 1.0;
    c.grad = Mat(1, 0);
    c.strain_op = Mat(nsym, 0);
    c.centroid = Vec();
    c.elasticity = mat.elasticity_at(c.centroid);
    cells_.push_back(c);
    QuadPoint q;
    q.cell = 0;
    q.x = Vec();
    q.weight = 1.0;
    q.shape = {{0, 1.0}};
    quad_.push_back(q);
  }

  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& conn = mesh_.elements[static_cast<std::size_t>(e)];
    Cell c;
    c.nodes = conn;
    const Vec& x0 = mesh_.nodes[static_cast<std::size_t>(conn[0])];
    Mat jac(d, d);
    for (int k = 0; k < d; ++k) jac.col(k) = mesh_.nodes[static_cast<std::size_t>(conn[k + 1])] - x0;
    const double det = jac.determinant();
    if (!(std::abs(det) > 1e-300)) throw NumericError("singular element geometry in element " + std::to_string(e));
    double ref_volume = d == 1 ? 1.0 : 0.5;
    c.volume = std::abs(det) * ref_volume;
    Mat gref(d + 1, d);
    if (d == 1) {
      gref << -1.0, 1.0;
    } else {
      gref << -1.0, -1.0, 1.0, 0.0, 0.0, 1.0;
    }
    c.grad = gref * jac.inverse();
    c.centroid = Vec::Zero(d);
    for (int a : conn) c.centroid += mesh_.nodes[static_cast<std::size_t>(a)];
    c.centroid /= static_cast<double>(conn.size());
    c.strain_op = Mat::Zero(nsym, static_cast<Eigen::Index>(conn.size()) * d);
    for (std::size_t a = 0; a < conn.size(); ++a)
      for (int i = 0; i < d; ++i) {
        Mat g = Mat::Zero(d, d);
        g.row(i) = c.grad.row(static_cast<Eigen::Index>(a));
        c.strain_op.col(static_cast<Eigen::Index>(a) * d + i) = tensor::strain_from_gradient(g);
      }
    c.elasticity = mat.elasticity_at(c.centroid);
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
      QuadPoint q;
      q.cell = e;
      q.x = x0 + jac * rule.points[k];
      q.weight = rule.weights[k] * std::abs(det);
      const Vec phi = reference_shape(d, rule.points[k]);
      for (std::size_t a = 0; a < conn.size(); ++a) q.shape.emplace_back(conn[a], phi(static_cast<Eigen::Index>(a)));
      quad_.push_back(q);
    }
    cells_.push_back(std::move(c));
  }

  if (!nodal_z_) {
    for (const QuadPoint& q : quad_) {
      ZPoint p;
      p.x = q.x;
      p.weight = q.weight;
      p.cells = {{q.cell, q.weight}};
      p.theta = q.shape;
      zpoints_.push_back(std::move(p));
    }
  } else {
    zpoints_.resize(static_cast<std::size_t>(mesh_.num_nodes()));
    for (int i = 0; i < mesh_.num_nodes(); ++i) {
      zpoints_[static_cast<std::size_t>(i)].x = mesh_.nodes[static_cast<std::size_t>(i)];
      zpoints_[static_cast<std::size_t>(i)].theta = {{i, 1.0}};
    }
    for (std::size_t e = 0; e < cells_.size(); ++e) {
      const double w = cells_[e].volume / static_cast<double>(cells_[e].nodes.size());
      for (int a : cells_[e].nodes) {
        auto& p = zpoints_[static_cast<std::size_t>(a)];
        p.cells.emplace_back(static_cast<int>(e), w);
        p.weight += w;
      }
    }
  }

  dof_to_free_.assign(static_cast<std::size_t>(num_u_dofs()), -1);
  for (int i = 0; i < mesh_.num_nodes(); ++i) {
    if (mesh_.dirichlet_u[static_cast<std::size_t>(i)]) continue;
    for (int k = 0; k < d; ++k) {
      dof_to_free_[static_cast<std::size_t>(i * d + k)] = static_cast<int>(free_dofs_.size());
      free_dofs_.push_back(i * d + k);
    }
  }
}

std::vector<Vec> Discretization::cell_strains(const Vec& u) const {
  const int d = mesh_.dim;
  std::vector<Vec> out;
  out.reserve(cells_.size());
  for (const Cell& c : cells_) {
    Vec ue(static_cast<Eigen::Index>(c.nodes.size()) * d);
    for (std::size_t a = 0; a < c.nodes.size(); ++a)
      for (int k = 0; k < d; ++k) ue(static_cast<Eigen::Index>(a) * d + k) = u(c.nodes[a] * d + k);
    out.push_back(c.strain_op * ue);
  }
  return out;
}

std::vector<Vec> Discretization::sample_points() const {
  std::vector<Vec> pts;
  for (const QuadPoint& q : quad_) pts.push_back(q.x);
  for (const Cell& c : cells_) pts.push_back(c.centroid);
  return pts;
}

SparseMat AssembledOperators::restrict_free(const SparseMat& a, const std::vector<int>& free) const {
  std::vector<int> map(static_cast<std::size_t>(a.rows()), -1);
  for (std::size_t k = 0; k < free.size(); ++k) map[static_cast<std::size_t>(free[k])] = static_cast<int>(k);
  Triplets t;
  for (int col = 0; col < a.outerSize(); ++col)
    for (SparseMat::InnerIterator it(a, col); it; ++it) {
      const int r = map[static_cast<std::size_t>(it.row())], c = map[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  SparseMat out(static_cast<Eigen::Index>(free.size()), static_cast<Eigen::Index>(free.size()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

AssembledOperators assemble(const Discretization& disc) {
  const MaterialModel& mat = disc.material();
  const int d = disc.dim();
  const int nn = disc.num_nodes();
  const int ndof = disc.num_u_dofs();
  const int m = disc.z_dim();
  const int np = disc.num_z_points();
  const Mat& a_visc = mat.tensors().viscosity_a;
  const Mat& qlin = mat.tensors().q_lin;
  const Vec& qaff = mat.tensors().q_aff;
  const double beta = mat.tensors().beta;
  const Vec id = tensor::identity(disc.tensor_dim());

  Triplets tke, tka, tmass, tmc, tkk, tlap, tcq, tcb, tsg, th1;
  AssembledOperators ops;
  ops.coupling_q_aff = Vec::Zero(ndof);

  auto global_dof = [d](const Cell& c, Eigen::Index local) {
    return c.nodes[static_cast<std::size_t>(local / d)] * d + static_cast<int>(local % d);
  };

  for (const Cell& c : disc.cells()) {
    if (d == 0) break;
    const Mat ke = c.volume * c.strain_op.transpose() * c.elasticity * c.strain_op;
    const Mat ka = c.volume * c.strain_op.transpose() * a_visc * c.strain_op;
    const Mat sg = c.volume * c.strain_op.transpose() * c.strain_op;
    const Vec faff = c.volume * c.strain_op.transpose() * (c.elasticity * qaff);
    const Vec btr = c.strain_op.transpose() * id;
    const Mat lap = c.volume * c.grad * c.grad.transpose();
    for (Eigen::Index r = 0; r < ke.rows(); ++r) {
      const int gr = global_dof(c, r);
      ops.coupling_q_aff(gr) += faff(r);
      for (Eigen::Index s = 0; s < ke.cols(); ++s) {
        const int gs = global_dof(c, s);
        tke.emplace_back(gr, gs, ke(r, s));
        tka.emplace_back(gr, gs, ka(r, s));
        tsg.emplace_back(gr, gs, sg(r, s));
      }
      const double w = beta * c.volume / static_cast<double>(c.nodes.size());
      for (int j : c.nodes) tcb.emplace_back(gr, j, w * btr(r));
    }
    for (std::size_t a = 0; a < c.nodes.size(); ++a)
      for (std::size_t b = 0; b < c.nodes.size(); ++b) {
        const double l = lap(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        tlap.emplace_back(c.nodes[a], c.nodes[b], l);
        for (int k = 0; k < d; ++k) th1.emplace_back(c.nodes[a] * d + k, c.nodes[b] * d + k, l);
      }
  }

  for (const QuadPoint& q : disc.quad_points()) {
    const Cell& c = disc.cells()[static_cast<std::size_t>(q.cell)];
    const double cap = mat.heat_capacity_at(q.x);
    Mat kappa = d > 0 ? mat.conductivity_at(q.x) : Mat();
    for (std::size_t a = 0; a < q.shape.size(); ++a) {
      const auto [i, phi_i] = q.shape[a];
      for (std::size_t b = 0; b < q.shape.size(); ++b) {
        const auto [j, phi_j] = q.shape[b];
        tmass.emplace_back(i, j, q.weight * phi_i * phi_j);
        tmc.emplace_back(i, j, q.weight * cap * phi_i * phi_j);
        if (d > 0) {
          const double kij = c.grad.row(static_cast<Eigen::Index>(a)) * kappa *
                             c.grad.row(static_cast<Eigen::Index>(b)).transpose();
          tkk.emplace_back(i, j, q.weight * kij);
        }
        for (int k = 0; k < d; ++k) th1.emplace_back(i * d + k, j * d + k, q.weight * phi_i * phi_j);
      }
    }
  }

  ops.z_stiffness.resize(static_cast<std::size_t>(np));
  ops.z_aff_force.resize(static_cast<std::size_t>(np));
  for (int p = 0; p < np; ++p) {
    const ZPoint& zp = disc.z_points()[static_cast<std::size_t>(p)];
    Mat s = Mat::Zero(m, m);
    Vec f = Vec::Zero(m);
    for (const auto& [ci, w] : zp.cells) {
      const Cell& c = disc.cells()[static_cast<std::size_t>(ci)];
      s += w * qlin.transpose() * c.elasticity * qlin;
      f += w * qlin.transpose() * (c.elasticity * qaff);
      if (d == 0) continue;
      const Mat block = w * c.strain_op.transpose() * c.elasticity * qlin;
      for (Eigen::Index r = 0; r < block.rows(); ++r)
        for (int k = 0; k < m; ++k) tcq.emplace_back(global_dof(c, r), p * m + k, block(r, k));
    }
    ops.z_stiffness[static_cast<std::size_t>(p)] = s / zp.weight;
    ops.z_aff_force[static_cast<std::size_t>(p)] = f / zp.weight;
  }

  auto build = [](int rows, int cols, const Triplets& t) {
    SparseMat s(rows, cols);
    s.setFromTriplets(t.begin(), t.end());
    return s;
  };
  ops.k_e = build(ndof, ndof, tke);
  ops.k_a = build(ndof, ndof, tka);
  ops.strain_gram = build(ndof, ndof, tsg);
  ops.h1_gram = build(ndof, ndof, th1);
  ops.mass = build(nn, nn, tmass);
  ops.m_c = build(nn, nn, tmc);
  ops.k_kappa = build(nn, nn, tkk);
  ops.laplace = build(nn, nn, tlap);
  ops.coupling_q = build(ndof, np * m, tcq);
  ops.coupling_beta = build(ndof, nn, tcb);
  ops.m_c_lumped = ops.m_c * Vec::Ones(nn);
  ops.volume_lumped = ops.mass * Vec::Ones(nn);
  const double alpha = mat.tensors().alpha;
  if (disc.nodal_z() && alpha > 0.0) {
    ops.k_alpha = alpha * ops.laplace;
  } else {
    ops.k_alpha = SparseMat(np, np);
  }
  return ops;
}

// ---------------------------------------------------------------------------

SpdSolver::SpdSolver(const SparseMat& a) : n_(static_cast<int>(a.rows())), a_(a) {
  if (a.rows() != a.cols()) throw ShapeError("SPD solve needs a square matrix");
  dense_ = n_ < 2000;
  if (dense_) {
    a_dense_ = Mat(a);
    llt_.compute(a_dense_);
    if (llt_.info() != Eigen::Success) throw NumericError("matrix is not symmetric positive definite");
  }
}

Vec SpdSolver::solve(const Vec& b) const {
  if (b.size() != n_) throw ShapeError("rhs size differs from matrix size");
  if (n_ == 0) return Vec();
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vec::Zero(n_);
  Vec x;
  if (dense_) {
    x = llt_.solve(b);
    Vec r = b - a_dense_ * x;
    if (r.norm() > 1e-12 * bnorm) {
      x += llt_.solve(r);  // one step of iterative refinement
      r = b - a_dense_ * x;
    }
    if (!(r.norm() <= 1e-10 * bnorm)) throw NumericError("dense SPD solve residual too large", r.norm() / bnorm);
    return x;
  }
  Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(1e-13);
  cg.setMaxIterations(20 * n_);
  cg.compute(a_);
  x = cg.solve(b);
  const double res = (b - a_ * x).norm();
  if (!(res <= 1e-10 * bnorm)) throw NumericError("conjugate gradient did not converge", res / bnorm);
  return x;
}

Vec solve_spd(const SparseMat& a, const Vec& b) { return SpdSolver(a).solve(b); }

double korn_estimate(const Discretization& disc, const AssembledOperators& ops) {
  if (disc.point_mode() || disc.free_u_dofs().empty()) return 0.0;
  const SparseMat k = ops.restrict_free(ops.strain_gram, disc.free_u_dofs());
  const SparseMat h = ops.restrict_free(ops.h1_gram, disc.free_u_dofs());
  SpdSolver solver(k);
  Vec x = Vec::Ones(k.rows());
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vec y = solver.solve(h * x);
    y /= std::sqrt(y.dot(h * y));
    const double next = y.dot(k * y) / y.dot(h * y);
    x = y;
    if (it > 0 && std::abs(next - lambda) <= 1e-12 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace tgsm
