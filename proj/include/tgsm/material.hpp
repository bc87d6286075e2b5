#pragma once

// Constitutive data and the local energy quantities of the thermo-visco-plastic
// generalized standard material:
//
//   W(eps, z, grad z, theta) = W_mech(eps, z, grad z) - W_theta(theta) + theta W_coup(eps, z)
//   W_mech  = 1/2 E(eps - Qz):(eps - Qz) + alpha/2 |grad z|^2 + H1(z)
//   W_theta = c (theta ln theta - theta)
//   W_coup  = beta tr(eps) + H2(z)
//
// with the affine inelastic strain Qz = Q_lin z + Q_aff.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tgsm/dissipation.hpp"
#include "tgsm/tensor.hpp"

namespace tgsm {

/// Spatial scalar field x -> value. x has the mesh dimension (possibly 0).
using ScalarField = std::function<double(const Vec& x)>;

ScalarField constant_field(double value);

struct TensorParams {
  int tensor_dim = 1;
  Mat elasticity;   ///< E, Mandel matrix (Pa)
  Mat viscosity_a;  ///< A, Mandel matrix (Pa s)
  Mat viscosity_b;  ///< B on Z (Pa s)
  Mat q_lin;        ///< sym_size x m
  Vec q_aff;        ///< sym_size
  double alpha = 0.0;
  double beta = 0.0;
  /// Element-wise multiplier of E, evaluated at element centroids.
  ScalarField elasticity_scale = constant_field(1.0);

  int sym_size() const { return tensor::sym_size(tensor_dim); }
  int z_dim() const { return static_cast<int>(q_lin.cols()); }
};

enum class HardeningKind { melan_prager, prandtl_reuss, souza_auricchio_delta, mixture_delta, custom };

std::string to_string(HardeningKind kind);

struct SouzaAuricchioParams {
  double c1 = 0.0;  ///< activation threshold
  double c2 = 0.0;  ///< hardening modulus
  double c3 = 1.0;  ///< maximal transformation strain modulus
  double delta = 1e-3;
  double c1_theta = 0.0;  ///< theta-slope of c1, goes to H2
  double c2_theta = 0.0;  ///< theta-slope of c2, goes to H2
};

struct MixtureParams {
  std::vector<Vec> phase_strains;  ///< eps_1 .. eps_N (Mandel), N >= 2
  Mat w1;                          ///< quadratic part of w, (N-1)x(N-1)
  Vec a1;                          ///< linear part of w
  Mat w2;                          ///< theta-linear quadratic part (H2)
  Vec a2;                          ///< theta-linear linear part (H2)
  double delta = 1e-3;
};

/// H(z, theta) ~ H1(z) + theta H2(z). Immutable after construction.
class HardeningModel {
 public:
  static HardeningModel melan_prager(Mat l);
  static HardeningModel prandtl_reuss(int z_dim);
  static HardeningModel souza_auricchio(int z_dim, SouzaAuricchioParams p);
  static HardeningModel mixture(MixtureParams p);
  static HardeningModel custom(Mat l1, Vec a1, Mat l2, Vec a2);

  HardeningKind kind() const { return kind_; }
  int z_dim() const { return z_dim_; }

  double h1(const Vec& z) const;
  Vec h1_gradient(const Vec& z) const;
  Mat h1_hessian(const Vec& z) const;

  double h2(const Vec& z) const;
  Vec h2_gradient(const Vec& z) const;
  Mat h2_hessian(const Vec& z) const;

  /// True when d_z H2 vanishes identically (structurally, not numerically).
  bool h2_vanishes() const;

  /// Closed-form lower bound c^H1, c~^H1 with H1(z) >= c|z|^2 - c~, when known.
  std::pair<double, double> coercivity_estimate() const;
  /// Closed-form C with |d_z H2(z)| <= C (1 + |z|).
  double h2_gradient_bound() const;
  /// Typical length of z used for random spot checks.
  double sample_radius() const;

  const SouzaAuricchioParams& souza_auricchio_params() const { return sa_; }
  const MixtureParams& mixture_params() const { return mix_; }

 private:
  HardeningModel() = default;
  HardeningKind kind_ = HardeningKind::prandtl_reuss;
  int z_dim_ = 0;
  Mat l1_, l2_;
  Vec a1_, a2_;
  SouzaAuricchioParams sa_;
  MixtureParams mix_;
};

/// (Q_lin, Q_aff) of the mixture model: Qz = sum_k z_k eps_k + (1 - sum_k z_k) eps_N.
std::pair<Mat, Vec> mixture_inelastic_map(const std::vector<Vec>& phase_strains);

struct ThermalParams {
  ScalarField heat_capacity = constant_field(1.0);  ///< c(x), J/(m^3 K)
  ScalarField conductivity = constant_field(1.0);   ///< scalar factor k(x) of kappa
  Mat conductivity_matrix;                          ///< kappa(x) = k(x) * this, d x d
  double theta_bar = 1.0;                           ///< lower bound of theta^0 (K)
};

/// Constants of the assumptions. Unset entries are derived from the data.
struct MaterialBounds {
  std::optional<double> c_e, c_a, big_c_a, c_b, big_c_b;
  std::optional<double> c_c, big_c_c, c_kappa, big_c_kappa;
  std::optional<double> c_h1, c_h1_tilde, big_c_h1_zz, big_c_h2_zz, big_c_h2_z;
};

/// Resolved constants, every entry set.
struct ResolvedBounds {
  double c_e = 0, c_a = 0, big_c_a = 0, c_b = 0, big_c_b = 0;
  double c_c = 0, big_c_c = 0, c_kappa = 0, big_c_kappa = 0;
  double c_h1 = 0, c_h1_tilde = 0, big_c_h1_zz = 0, big_c_h2_zz = 0, big_c_h2_z = 0;
};

class MaterialModel {
 public:
  MaterialModel(TensorParams tensors, HardeningModel hardening, ThermalParams thermal,
                DissipationPotential dissipation, MaterialBounds bounds = {});

  const TensorParams& tensors() const { return tensors_; }
  const HardeningModel& hardening() const { return hardening_; }
  const ThermalParams& thermal() const { return thermal_; }
  const DissipationPotential& dissipation() const { return dissipation_; }
  const MaterialBounds& bounds() const { return bounds_; }

  int tensor_dim() const { return tensors_.tensor_dim; }
  int sym_size() const { return tensors_.sym_size(); }
  int z_dim() const { return tensors_.z_dim(); }

  /// E at x (base matrix times the scale field).
  Mat elasticity_at(const Vec& x) const;
  double heat_capacity_at(const Vec& x) const;
  Mat conductivity_at(const Vec& x) const;

  /// Q_lin z + Q_aff.
  Vec inelastic_strain(const Vec& z) const;

  /// Helmholtz free energy density. x selects the spatial coefficients (empty: origin).
  double free_energy(const Vec& eps, const Vec& z, const Mat& grad_z, double theta,
                     const Vec& x = Vec()) const;
  /// s = c ln(theta) - beta tr(eps) - H2(z).
  double entropy(const Vec& eps, const Vec& z, double theta, const Vec& x = Vec()) const;
  /// W + theta s, assembled from the two functions above.
  double internal_energy(const Vec& eps, const Vec& z, const Mat& grad_z, double theta,
                         const Vec& x = Vec()) const;

  double mechanical_energy(const Vec& eps, const Vec& z, const Mat& grad_z, const Vec& x = Vec()) const;
  double thermal_energy(double theta, const Vec& x = Vec()) const;  ///< W_theta
  double coupling_energy(const Vec& eps, const Vec& z) const;      ///< W_coup

  /// Elastic stress E(eps - Qz) + beta theta I (without the viscous part).
  Vec elastic_stress(const Vec& eps, const Vec& z, double theta, const Vec& x = Vec()) const;

  /// G = -Q_lin^T E (eps - Qz) + dH1(z) + theta dH2(z); the local part of the flow rule.
  Vec driving_force(const Vec& eps, const Vec& z, double theta, const Vec& x = Vec()) const;
  /// d G / d z = Q_lin^T E Q_lin + d2H1 + theta d2H2.
  Mat driving_force_jacobian(const Vec& z, double theta, const Vec& x = Vec()) const;

  /// Resolve the assumption constants: configured values, else derived ones.
  ResolvedBounds resolved_bounds(const std::vector<Vec>& sample_points) const;

  /// Check all local assumptions; returns every violation, each naming its (A-n) tag.
  /// sample_points are the quadrature points used for the spatial fields.
  std::vector<std::string> validate(const std::vector<Vec>& sample_points, std::uint64_t seed = 1) const;

 private:
  void check_shapes(const Vec& eps, const Vec& z) const;

  TensorParams tensors_;
  HardeningModel hardening_;
  ThermalParams thermal_;
  DissipationPotential dissipation_;
  MaterialBounds bounds_;
};

}  // namespace tgsm
