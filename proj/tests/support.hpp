#pragma once

#include <memory>
#include <random>

#include "tgsm/coupling.hpp"
#include "tgsm/material.hpp"
#include "tgsm/model.hpp"

namespace tgsm::testing {

struct ScalarSpec {
  int td = 1;
  double e = 1.0;  // isotropic: lambda = 0, 2 mu = e (scalar in 1D)
  double a = 1.0, b = 1.0;
  double l = 1.0;  // Melan-Prager hardening modulus
  double yield = 1.0;
  double beta = 0.0;
  double c = 1.0, kappa = 1.0;
  double theta_bar = 1.0;
  int mesh_dim = 1;  // for the conductivity matrix; 0 = none
};

/// Material with Q = identity, E = e Id, A = a Id, B = b Id, H1 = l/2 |z|^2.
inline std::shared_ptr<const MaterialModel> melan_prager(const ScalarSpec& s) {
  const int n = tensor::sym_size(s.td);
  TensorParams tp;
  tp.tensor_dim = s.td;
  tp.elasticity = s.e * Mat::Identity(n, n);
  tp.viscosity_a = s.a * Mat::Identity(n, n);
  tp.viscosity_b = s.b * Mat::Identity(n, n);
  tp.q_lin = Mat::Identity(n, n);
  tp.q_aff = Vec::Zero(n);
  tp.beta = s.beta;
  ThermalParams th;
  th.heat_capacity = constant_field(s.c);
  th.conductivity = constant_field(s.kappa);
  if (s.mesh_dim > 0) th.conductivity_matrix = Mat::Identity(s.mesh_dim, s.mesh_dim);
  th.theta_bar = s.theta_bar;
  return std::make_shared<const MaterialModel>(tp, HardeningModel::melan_prager(s.l * Mat::Identity(n, n)), th,
                                               DissipationPotential::norm_scaled(s.yield));
}

inline Mesh interval(int cells, double length = 1.0) {
  GeometrySpec g;
  g.dim = 1;
  g.length = {length, 1.0};
  g.cells = {cells, 1};
  return build_mesh(g);
}

inline Mesh point(int td = 1) {
  GeometrySpec g;
  g.dim = 0;
  g.tensor_dim = td;
  return build_mesh(g);
}

inline Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * nd(rng);
  return v;
}

}  // namespace tgsm::testing
