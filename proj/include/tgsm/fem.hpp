#pragma once

// Structured P1 meshes (0D point, 1D interval, 2D triangulated rectangle),
// quadrature, operator assembly and SPD solves.

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "tgsm/material.hpp"
#include "tgsm/tensor.hpp"

namespace tgsm {

using SparseMat = Eigen::SparseMatrix<double>;

struct GeometrySpec {
  int dim = 1;                        ///< 0, 1 or 2
  std::array<double, 2> length{1.0, 1.0};
  std::array<int, 2> cells{4, 4};
  int tensor_dim = 1;                 ///< strain dimension in 0D; equals dim otherwise
};

struct Mesh {
  int dim = 1;
  int tensor_dim = 1;
  std::vector<Vec> nodes;
  std::vector<std::vector<int>> elements;
  std::vector<char> dirichlet_u;  ///< u = 0 on the whole boundary
  std::vector<char> neumann_all;  ///< natural (zero-flux) condition for z and theta
  int quadrature_order = 2;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int nodes_per_element() const { return dim + 1; }
};

Mesh build_mesh(const GeometrySpec& spec);

/// Reference quadrature on the unit simplex of dimension dim (order 2).
struct ReferenceRule {
  std::vector<Vec> points;  ///< barycentric-free reference coordinates
  std::vector<double> weights;
};
ReferenceRule reference_rule(int dim, int order = 2);

/// Element data (or the single virtual cell of the 0D material point).
struct Cell {
  std::vector<int> nodes;
  double volume = 0.0;
  Mat grad;       ///< nv x dim shape gradients
  Mat strain_op;  ///< sym_size x (nv dim), Mandel strain from local displacements
  Vec centroid;
  Mat elasticity;  ///< E on this cell (scale field applied)
};

struct QuadPoint {
  int cell = 0;
  Vec x;
  double weight = 0.0;                          ///< physical weight
  std::vector<std::pair<int, double>> shape;    ///< (node, phi_node(x))
};

/// Storage location of the internal variable z. For alpha = 0 these are the
/// Gauss points; for alpha > 0 the mesh nodes with vertex quadrature.
struct ZPoint {
  Vec x;
  double weight = 0.0;                          ///< integration weight W_p
  std::vector<std::pair<int, double>> cells;    ///< (cell, partial weight), sums to W_p
  std::vector<std::pair<int, double>> theta;    ///< interpolation of nodal theta at x
};

/// Mesh + material bound into the discrete spaces.
class Discretization {
 public:
  Discretization(Mesh mesh, std::shared_ptr<const MaterialModel> material);

  const Mesh& mesh() const { return mesh_; }
  const MaterialModel& material() const { return *material_; }
  std::shared_ptr<const MaterialModel> material_ptr() const { return material_; }

  int dim() const { return mesh_.dim; }
  int tensor_dim() const { return mesh_.tensor_dim; }
  int num_nodes() const { return mesh_.num_nodes(); }
  int num_u_dofs() const { return mesh_.dim * mesh_.num_nodes(); }
  int z_dim() const { return material_->z_dim(); }
  bool nodal_z() const { return nodal_z_; }
  bool point_mode() const { return mesh_.dim == 0; }

  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<QuadPoint>& quad_points() const { return quad_; }
  const std::vector<ZPoint>& z_points() const { return zpoints_; }
  int num_z_points() const { return static_cast<int>(zpoints_.size()); }

  const std::vector<int>& free_u_dofs() const { return free_dofs_; }
  /// -1 for constrained dofs.
  const std::vector<int>& u_dof_to_free() const { return dof_to_free_; }

  /// Mandel strain of every cell for nodal displacements u (size dim * nodes).
  std::vector<Vec> cell_strains(const Vec& u) const;

  /// Sample points for material validation: all Gauss points and cell centroids.
  std::vector<Vec> sample_points() const;

 private:
  Mesh mesh_;
  std::shared_ptr<const MaterialModel> material_;
  bool nodal_z_ = false;
  std::vector<Cell> cells_;
  std::vector<QuadPoint> quad_;
  std::vector<ZPoint> zpoints_;
  std::vector<int> free_dofs_;
  std::vector<int> dof_to_free_;
};

struct AssembledOperators {
  SparseMat k_e;        ///< elastic stiffness, all u dofs
  SparseMat k_a;        ///< viscous stiffness
  SparseMat mass;       ///< scalar consistent mass (unit density), nodes x nodes
  SparseMat m_c;        ///< c-weighted consistent mass
  Vec m_c_lumped;       ///< row sums of m_c
  Vec volume_lumped;    ///< row sums of mass, int phi_i
  SparseMat k_kappa;    ///< conductivity stiffness
  SparseMat k_alpha;    ///< alpha-weighted scalar Laplacian on z storage (zero if alpha = 0)
  SparseMat laplace;    ///< unit scalar Laplacian, nodes x nodes
  SparseMat coupling_q;     ///< u dofs x (z points * m): int E Q_lin z : eps(phi)
  Vec coupling_q_aff;       ///< u dofs: int E Q_aff : eps(phi)
  SparseMat coupling_beta;  ///< u dofs x nodes: int beta theta tr eps(phi)
  std::vector<Mat> z_stiffness;  ///< per z point: (1/W_p) sum w Q_lin^T E Q_lin
  std::vector<Vec> z_aff_force;  ///< per z point: (1/W_p) sum w Q_lin^T E Q_aff
  SparseMat strain_gram;  ///< int eps(u):eps(v), for the Korn estimate
  SparseMat h1_gram;      ///< int u.v + grad u:grad v (vector), for norms

  /// Restriction of an all-dof matrix to the free displacement dofs.
  SparseMat restrict_free(const SparseMat& a, const std::vector<int>& free) const;
};

AssembledOperators assemble(const Discretization& disc);

/// Solve an SPD system. Dense Cholesky below 2000 unknowns, diagonally
/// preconditioned CG above. Throws NumericError when |Ax - b| > 1e-10 |b|.
class SpdSolver {
 public:
  SpdSolver() = default;
  explicit SpdSolver(const SparseMat& a);
  Vec solve(const Vec& b) const;
  int size() const { return n_; }
  bool dense() const { return dense_; }

 private:
  int n_ = 0;
  bool dense_ = true;
  SparseMat a_;
  Mat a_dense_;
  Eigen::LLT<Mat> llt_;
};

Vec solve_spd(const SparseMat& a, const Vec& b);

/// Smallest generalized eigenvalue of (strain gram, H1 gram) on the free dofs:
/// the discrete Korn constant. Returns 0 in point mode.
double korn_estimate(const Discretization& disc, const AssembledOperators& ops);

}  // namespace tgsm
