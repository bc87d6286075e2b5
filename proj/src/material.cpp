#include "tgsm/material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "tgsm/errors.hpp"

namespace tgsm {

ScalarField constant_field(double value) {
  return [value](const Vec&) { return value; };
}

std::string to_string(HardeningKind kind) {
  switch (kind) {
    case HardeningKind::melan_prager: return "melan_prager";
    case HardeningKind::prandtl_reuss: return "prandtl_reuss";
    case HardeningKind::souza_auricchio_delta: return "souza_auricchio_delta";
    case HardeningKind::mixture_delta: return "mixture_delta";
    case HardeningKind::custom: return "custom";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Hardening

namespace {

// Radial function f(r) lifted to z: value, gradient f'(r) z/r, Hessian
// f''(r) nn^T + f'(r)/r (I - nn^T). Callers make sure f'(r)/r is finite at 0.
struct Radial {
  double f, df, d2f;
};

Mat radial_hessian(const Vec& z, const Radial& r, double df_over_r) {
  const Eigen::Index m = z.size();
  const double norm = z.norm();
  Mat h = df_over_r * Mat::Identity(m, m);
  if (norm > 0.0) {
    const Vec n = z / norm;
    h += (r.d2f - df_over_r) * n * n.transpose();
  }
  return h;
}

// ((r - c3)_+)^4 / (delta (1 + r^2))
Radial ball_penalty(double c3, double delta, double r) {
  const double a = r - c3;
  if (a <= 0.0) return {0.0, 0.0, 0.0};
  const double n = a * a * a * a, dn = 4 * a * a * a, d2n = 12 * a * a;
  const double d = delta * (1.0 + r * r), dd = 2.0 * delta * r, d2d = 2.0 * delta;
  const double f = n / d;
  const double df = (dn * d - n * dd) / (d * d);
  const double d2f = d2n / d - 2.0 * dn * dd / (d * d) - n * d2d / (d * d) + 2.0 * n * dd * dd / (d * d * d);
  return {f, df, d2f};
}

// ((-x)_+)^4 + ((x - 1)_+)^4 over delta (1 + x^2)
Radial box_penalty(double delta, double x) {
  const double lo = std::max(-x, 0.0), hi = std::max(x - 1.0, 0.0);
  if (lo == 0.0 && hi == 0.0) return {0.0, 0.0, 0.0};
  const double n = std::pow(lo, 4) + std::pow(hi, 4);
  const double dn = -4.0 * std::pow(lo, 3) + 4.0 * std::pow(hi, 3);
  const double d2n = 12.0 * lo * lo + 12.0 * hi * hi;
  const double d = delta * (1.0 + x * x), dd = 2.0 * delta * x, d2d = 2.0 * delta;
  const double f = n / d;
  const double df = (dn * d - n * dd) / (d * d);
  const double d2f = d2n / d - 2.0 * dn * dd / (d * d) - n * d2d / (d * d) + 2.0 * n * dd * dd / (d * d * d);
  return {f, df, d2f};
}

struct SaPart {
  double value;
  Vec grad;
  Mat hess;
};

// a sqrt(delta^2 + |z|^2) + b |z|^2 (+ penalty when with_penalty).
SaPart sa_eval(const Vec& z, double a, double b, double c3, double delta, bool with_penalty) {
  const Eigen::Index m = z.size();
  const double r = z.norm();
  const double s = std::sqrt(delta * delta + r * r);
  SaPart out{a * s + b * r * r, a * z / s + 2.0 * b * z, Mat::Zero(m, m)};
  out.hess = a * (Mat::Identity(m, m) / s - z * z.transpose() / (s * s * s)) + 2.0 * b * Mat::Identity(m, m);
  if (with_penalty) {
    const Radial p = ball_penalty(c3, delta, r);
    out.value += p.f;
    if (r > 0.0 && p.df != 0.0) {
      out.grad += p.df * z / r;
      out.hess += radial_hessian(z, p, p.df / r);
    } else if (p.d2f != 0.0) {
      out.hess += radial_hessian(z, p, 0.0);
    }
  }
  return out;
}

}  // namespace

HardeningModel HardeningModel::melan_prager(Mat l) {
  HardeningModel h;
  h.kind_ = HardeningKind::melan_prager;
  h.z_dim_ = static_cast<int>(l.rows());
  h.l1_ = std::move(l);
  return h;
}

HardeningModel HardeningModel::prandtl_reuss(int z_dim) {
  HardeningModel h;
  h.kind_ = HardeningKind::prandtl_reuss;
  h.z_dim_ = z_dim;
  return h;
}

HardeningModel HardeningModel::souza_auricchio(int z_dim, SouzaAuricchioParams p) {
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw DomainError("Souza-Auricchio regularisation delta must lie in (0,1)");
  HardeningModel h;
  h.kind_ = HardeningKind::souza_auricchio_delta;
  h.z_dim_ = z_dim;
  h.sa_ = p;
  return h;
}

HardeningModel HardeningModel::mixture(MixtureParams p) {
  if (p.phase_strains.size() < 2) throw ShapeError("mixture model needs at least two phases");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw DomainError("mixture regularisation delta must lie in (0,1)");
  const int m = static_cast<int>(p.phase_strains.size()) - 1;
  if (p.w1.size() == 0) p.w1 = Mat::Zero(m, m);
  if (p.w2.size() == 0) p.w2 = Mat::Zero(m, m);
  if (p.a1.size() == 0) p.a1 = Vec::Zero(m);
  if (p.a2.size() == 0) p.a2 = Vec::Zero(m);
  if (p.w1.rows() != m || p.w1.cols() != m || p.w2.rows() != m || p.w2.cols() != m || p.a1.size() != m ||
      p.a2.size() != m)
    throw ShapeError("mixture smooth part must be (N-1)x(N-1) / (N-1)");
  HardeningModel h;
  h.kind_ = HardeningKind::mixture_delta;
  h.z_dim_ = m;
  h.mix_ = std::move(p);
  return h;
}

HardeningModel HardeningModel::custom(Mat l1, Vec a1, Mat l2, Vec a2) {
  const Eigen::Index m = l1.rows();
  if (l1.cols() != m || l2.rows() != m || l2.cols() != m || a1.size() != m || a2.size() != m)
    throw ShapeError("custom hardening: inconsistent sizes");
  HardeningModel h;
  h.kind_ = HardeningKind::custom;
  h.z_dim_ = static_cast<int>(m);
  h.l1_ = std::move(l1);
  h.a1_ = std::move(a1);
  h.l2_ = std::move(l2);
  h.a2_ = std::move(a2);
  return h;
}

double HardeningModel::h1(const Vec& z) const {
  switch (kind_) {
    case HardeningKind::melan_prager: return 0.5 * z.dot(l1_ * z);
    case HardeningKind::prandtl_reuss: return 0.0;
    case HardeningKind::souza_auricchio_delta: return sa_eval(z, sa_.c1, sa_.c2, sa_.c3, sa_.delta, true).value;
    case HardeningKind::mixture_delta: {
      double v = 0.5 * z.dot(mix_.w1 * z) + mix_.a1.dot(z);
      for (Eigen::Index k = 0; k < z.size(); ++k) v += box_penalty(mix_.delta, z(k)).f;
      return v;
    }
    case HardeningKind::custom: return 0.5 * z.dot(l1_ * z) + a1_.dot(z);
  }
  return 0.0;
}

Vec HardeningModel::h1_gradient(const Vec& z) const {
  switch (kind_) {
    case HardeningKind::melan_prager: return l1_ * z;
    case HardeningKind::prandtl_reuss: return Vec::Zero(z.size());
    case HardeningKind::souza_auricchio_delta: return sa_eval(z, sa_.c1, sa_.c2, sa_.c3, sa_.delta, true).grad;
    case HardeningKind::mixture_delta: {
      Vec g = mix_.w1 * z + mix_.a1;
      for (Eigen::Index k = 0; k < z.size(); ++k) g(k) += box_penalty(mix_.delta, z(k)).df;
      return g;
    }
    case HardeningKind::custom: return l1_ * z + a1_;
  }
  return Vec::Zero(z.size());
}

Mat HardeningModel::h1_hessian(const Vec& z) const {
  const Eigen::Index m = z.size();
  switch (kind_) {
    case HardeningKind::melan_prager: return l1_;
    case HardeningKind::prandtl_reuss: return Mat::Zero(m, m);
    case HardeningKind::souza_auricchio_delta: return sa_eval(z, sa_.c1, sa_.c2, sa_.c3, sa_.delta, true).hess;
    case HardeningKind::mixture_delta: {
      Mat h = mix_.w1;
      for (Eigen::Index k = 0; k < m; ++k) h(k, k) += box_penalty(mix_.delta, z(k)).d2f;
      return h;
    }
    case HardeningKind::custom: return l1_;
  }
  return Mat::Zero(m, m);
}

double HardeningModel::h2(const Vec& z) const {
  switch (kind_) {
    case HardeningKind::souza_auricchio_delta:
      return sa_eval(z, sa_.c1_theta, sa_.c2_theta, sa_.c3, sa_.delta, false).value;
    case HardeningKind::mixture_delta: return 0.5 * z.dot(mix_.w2 * z) + mix_.a2.dot(z);
    case HardeningKind::custom: return 0.5 * z.dot(l2_ * z) + a2_.dot(z);
    default: return 0.0;
  }
}

Vec HardeningModel::h2_gradient(const Vec& z) const {
  switch (kind_) {
    case HardeningKind::souza_auricchio_delta:
      return sa_eval(z, sa_.c1_theta, sa_.c2_theta, sa_.c3, sa_.delta, false).grad;
    case HardeningKind::mixture_delta: return mix_.w2 * z + mix_.a2;
    case HardeningKind::custom: return l2_ * z + a2_;
    default: return Vec::Zero(z.size());
  }
}

Mat HardeningModel::h2_hessian(const Vec& z) const {
  const Eigen::Index m = z.size();
  switch (kind_) {
    case HardeningKind::souza_auricchio_delta:
      return sa_eval(z, sa_.c1_theta, sa_.c2_theta, sa_.c3, sa_.delta, false).hess;
    case HardeningKind::mixture_delta: return mix_.w2;
    case HardeningKind::custom: return l2_;
    default: return Mat::Zero(m, m);
  }
}

bool HardeningModel::h2_vanishes() const {
  switch (kind_) {
    case HardeningKind::melan_prager:
    case HardeningKind::prandtl_reuss: return true;
    case HardeningKind::souza_auricchio_delta: return sa_.c1_theta == 0.0 && sa_.c2_theta == 0.0;
    case HardeningKind::mixture_delta: return mix_.w2.isZero(0.0) && mix_.a2.isZero(0.0);
    case HardeningKind::custom: return l2_.isZero(0.0) && a2_.isZero(0.0);
  }
  return true;
}

std::pair<double, double> HardeningModel::coercivity_estimate() const {
  // Quadratic q(z) = 1/2 z.Wz + a.z >= lmin/4 |z|^2 - |a|^2/lmin when lmin > 0.
  auto quadratic = [](const Mat& w, const Vec& a) -> std::pair<double, double> {
    if (w.size() == 0) return {0.0, 0.0};
    const double lmin = tensor::min_eigenvalue(w);
    if (lmin > 0.0) return {0.25 * lmin, a.size() ? a.squaredNorm() / lmin : 0.0};
    return {0.0, 0.0};
  };
  switch (kind_) {
    case HardeningKind::melan_prager: return {0.5 * tensor::min_eigenvalue(l1_), 0.0};
    case HardeningKind::prandtl_reuss: return {0.0, 0.0};
    case HardeningKind::souza_auricchio_delta:
      return {std::max(sa_.c2, 0.0), sa_.c1 < 0.0 ? -sa_.c1 * sa_.delta : 0.0};
    case HardeningKind::mixture_delta: return quadratic(mix_.w1, mix_.a1);
    case HardeningKind::custom: return quadratic(l1_, a1_);
  }
  return {0.0, 0.0};
}

double HardeningModel::h2_gradient_bound() const {
  switch (kind_) {
    case HardeningKind::souza_auricchio_delta:
      return std::max(std::abs(sa_.c1_theta), 2.0 * std::abs(sa_.c2_theta));
    case HardeningKind::mixture_delta:
      return std::max(mix_.w2.size() ? mix_.w2.operatorNorm() : 0.0, mix_.a2.norm());
    case HardeningKind::custom: return std::max(l2_.size() ? l2_.operatorNorm() : 0.0, a2_.norm());
    default: return 0.0;
  }
}

double HardeningModel::sample_radius() const {
  switch (kind_) {
    case HardeningKind::souza_auricchio_delta: return 2.0 * sa_.c3;
    case HardeningKind::mixture_delta: return 1.5;
    default: return 1.0;
  }
}

std::pair<Mat, Vec> mixture_inelastic_map(const std::vector<Vec>& phase_strains) {
  if (phase_strains.size() < 2) throw ShapeError("mixture model needs at least two phases");
  const Vec& last = phase_strains.back();
  const Eigen::Index n = last.size();
  Mat q(n, static_cast<Eigen::Index>(phase_strains.size()) - 1);
  for (std::size_t k = 0; k + 1 < phase_strains.size(); ++k) {
    if (phase_strains[k].size() != n) throw ShapeError("phase strains differ in size");
    q.col(static_cast<Eigen::Index>(k)) = phase_strains[k] - last;
  }
  return {q, last};
}

// ---------------------------------------------------------------------------
// MaterialModel

MaterialModel::MaterialModel(TensorParams tensors, HardeningModel hardening, ThermalParams thermal,
                             DissipationPotential dissipation, MaterialBounds bounds)
    : tensors_(std::move(tensors)),
      hardening_(std::move(hardening)),
      thermal_(std::move(thermal)),
      dissipation_(std::move(dissipation)),
      bounds_(bounds) {
  const int n = tensors_.sym_size();
  const int m = tensors_.z_dim();
  if (tensors_.elasticity.rows() != n || tensors_.elasticity.cols() != n)
    throw ShapeError("elasticity tensor must be " + std::to_string(n) + "x" + std::to_string(n));
  if (tensors_.viscosity_a.rows() != n || tensors_.viscosity_a.cols() != n)
    throw ShapeError("viscosity A must be " + std::to_string(n) + "x" + std::to_string(n));
  if (tensors_.viscosity_b.rows() != m || tensors_.viscosity_b.cols() != m)
    throw ShapeError("viscosity B must be " + std::to_string(m) + "x" + std::to_string(m));
  if (tensors_.q_lin.rows() != n) throw ShapeError("Q_lin must have sym_size rows");
  if (tensors_.q_aff.size() != n) throw ShapeError("Q_aff must have sym_size entries");
  if (hardening_.z_dim() != m) throw ShapeError("hardening model dimension differs from dim Z");
  if (dissipation_.kind() == PotentialKind::weighted_l1 && dissipation_.weights().size() != m)
    throw ShapeError("weighted_l1 weights must have dim Z entries");
}

void MaterialModel::check_shapes(const Vec& eps, const Vec& z) const {
  if (eps.size() != sym_size()) throw ShapeError("strain has wrong Mandel length");
  if (z.size() != z_dim()) throw ShapeError("internal variable has wrong dimension");
}

Mat MaterialModel::elasticity_at(const Vec& x) const {
  return tensors_.elasticity_scale(x) * tensors_.elasticity;
}

double MaterialModel::heat_capacity_at(const Vec& x) const { return thermal_.heat_capacity(x); }

Mat MaterialModel::conductivity_at(const Vec& x) const {
  return thermal_.conductivity(x) * thermal_.conductivity_matrix;
}

Vec MaterialModel::inelastic_strain(const Vec& z) const {
  if (z.size() != z_dim()) throw ShapeError("internal variable has wrong dimension");
  return tensors_.q_lin * z + tensors_.q_aff;
}

double MaterialModel::mechanical_energy(const Vec& eps, const Vec& z, const Mat& grad_z, const Vec& x) const {
  check_shapes(eps, z);
  const Vec el = eps - inelastic_strain(z);
  const double grad = grad_z.size() ? grad_z.squaredNorm() : 0.0;
  return 0.5 * el.dot(elasticity_at(x) * el) + 0.5 * tensors_.alpha * grad + hardening_.h1(z);
}

double MaterialModel::thermal_energy(double theta, const Vec& x) const {
  if (!(theta > 0.0)) throw DomainError("temperature must be positive");
  return heat_capacity_at(x) * (theta * std::log(theta) - theta);
}

double MaterialModel::coupling_energy(const Vec& eps, const Vec& z) const {
  check_shapes(eps, z);
  return tensors_.beta * tensor::trace(eps, tensor_dim()) + hardening_.h2(z);
}

double MaterialModel::free_energy(const Vec& eps, const Vec& z, const Mat& grad_z, double theta,
                                  const Vec& x) const {
  return mechanical_energy(eps, z, grad_z, x) - thermal_energy(theta, x) + theta * coupling_energy(eps, z);
}

double MaterialModel::entropy(const Vec& eps, const Vec& z, double theta, const Vec& x) const {
  if (!(theta > 0.0)) throw DomainError("temperature must be positive");
  return heat_capacity_at(x) * std::log(theta) - coupling_energy(eps, z);
}

double MaterialModel::internal_energy(const Vec& eps, const Vec& z, const Mat& grad_z, double theta,
                                      const Vec& x) const {
  return free_energy(eps, z, grad_z, theta, x) + theta * entropy(eps, z, theta, x);
}

Vec MaterialModel::elastic_stress(const Vec& eps, const Vec& z, double theta, const Vec& x) const {
  check_shapes(eps, z);
  return elasticity_at(x) * (eps - inelastic_strain(z)) + tensors_.beta * theta * tensor::identity(tensor_dim());
}

Vec MaterialModel::driving_force(const Vec& eps, const Vec& z, double theta, const Vec& x) const {
  check_shapes(eps, z);
  Vec g = -tensors_.q_lin.transpose() * (elasticity_at(x) * (eps - inelastic_strain(z))) + hardening_.h1_gradient(z);
  if (!hardening_.h2_vanishes()) {
    if (!(theta > 0.0)) throw DomainError("temperature must be positive when H2 is active");
    g += theta * hardening_.h2_gradient(z);
  }
  return g;
}

Mat MaterialModel::driving_force_jacobian(const Vec& z, double theta, const Vec& x) const {
  Mat k = tensors_.q_lin.transpose() * elasticity_at(x) * tensors_.q_lin + hardening_.h1_hessian(z);
  if (!hardening_.h2_vanishes()) k += theta * hardening_.h2_hessian(z);
  return k;
}

ResolvedBounds MaterialModel::resolved_bounds(const std::vector<Vec>& sample_points) const {
  ResolvedBounds r;
  double emin = tensor::min_eigenvalue(tensors_.elasticity);
  double cmin = std::numeric_limits<double>::infinity(), cmax = -cmin;
  double kmin = cmin, kmax = -cmin;
  const bool has_kappa = thermal_.conductivity_matrix.size() > 0;
  const double kmat_min = has_kappa ? tensor::min_eigenvalue(thermal_.conductivity_matrix) : 0.0;
  const double kmat_max = has_kappa ? tensor::max_eigenvalue(thermal_.conductivity_matrix) : 0.0;
  for (const Vec& x : sample_points) {
    const double s = tensors_.elasticity_scale(x);
    emin = std::min(emin, s * tensor::min_eigenvalue(tensors_.elasticity));
    const double c = thermal_.heat_capacity(x);
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
    const double k = thermal_.conductivity(x);
    kmin = std::min({kmin, k * kmat_min, k * kmat_max});
    kmax = std::max({kmax, k * kmat_max, k * kmat_min});
  }
  if (sample_points.empty()) {
    cmin = cmax = thermal_.heat_capacity(Vec());
    kmin = kmax = thermal_.conductivity(Vec()) * kmat_min;
  }
  if (thermal_.conductivity_matrix.size() == 0) kmin = kmax = 0.0;
  r.c_e = bounds_.c_e.value_or(emin);
  r.c_a = bounds_.c_a.value_or(tensor::min_eigenvalue(tensors_.viscosity_a));
  r.big_c_a = bounds_.big_c_a.value_or(tensor::max_eigenvalue(tensors_.viscosity_a));
  r.c_b = bounds_.c_b.value_or(tensor::min_eigenvalue(tensors_.viscosity_b));
  r.big_c_b = bounds_.big_c_b.value_or(tensor::max_eigenvalue(tensors_.viscosity_b));
  r.c_c = bounds_.c_c.value_or(cmin);
  r.big_c_c = bounds_.big_c_c.value_or(cmax);
  r.c_kappa = bounds_.c_kappa.value_or(kmin);
  r.big_c_kappa = bounds_.big_c_kappa.value_or(kmax);
  const auto [ch, cht] = hardening_.coercivity_estimate();
  r.c_h1 = bounds_.c_h1.value_or(ch);
  r.c_h1_tilde = bounds_.c_h1_tilde.value_or(cht);
  r.big_c_h2_z = bounds_.big_c_h2_z.value_or(hardening_.h2_gradient_bound());

  // Hessian bounds default to the sampled maximum over a ball of radius 5 * sample_radius.
  const int m = z_dim();
  double h1max = 0.0, h2max = 0.0;
  if (!bounds_.big_c_h1_zz || !bounds_.big_c_h2_zz) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < 200 && m > 0; ++k) {
      Vec z(m);
      for (int i = 0; i < m; ++i) z(i) = normal(rng);
      z *= 5.0 * hardening_.sample_radius() * uni(rng) / std::max(z.norm(), 1e-300);
      h1max = std::max(h1max, hardening_.h1_hessian(z).operatorNorm());
      h2max = std::max(h2max, hardening_.h2_hessian(z).operatorNorm());
    }
  }
  r.big_c_h1_zz = bounds_.big_c_h1_zz.value_or(std::max(h1max, 1e-300) * 1.000001);
  r.big_c_h2_zz = bounds_.big_c_h2_zz.value_or(std::max(h2max, 1e-300) * 1.000001);
  return r;
}

std::vector<std::string> MaterialModel::validate(const std::vector<Vec>& sample_points, std::uint64_t seed) const {
  std::vector<std::string> out;
  auto fail = [&out](const std::string& tag, const std::string& msg) { out.push_back(tag + ": " + msg); };
  auto num = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  const ResolvedBounds b = resolved_bounds(sample_points);
  const int m = z_dim();

  // (A-1) dissipation potential
  switch (dissipation_.kind()) {
    case PotentialKind::norm_scaled:
      if (!(dissipation_.yield() >= 0.0)) fail("(A-1)", "dissipation yield must be >= 0");
      break;
    case PotentialKind::weighted_l1:
      if (!(dissipation_.weights().minCoeff() >= 0.0)) fail("(A-1)", "weighted_l1 weights must be >= 0");
      break;
    case PotentialKind::zero: break;
  }

  // (A-2) hardening: coercivity, Hessian bounds, gradient growth; spot checks on random samples.
  {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    bool coercive_ok = true, h1_ok = true, h2_ok = true, growth_ok = true;
    for (int k = 0; k < 200 && m > 0; ++k) {
      Vec z(m);
      for (int i = 0; i < m; ++i) z(i) = normal(rng);
      z *= 5.0 * hardening_.sample_radius() * uni(rng) / std::max(z.norm(), 1e-300);
      const double zz = z.squaredNorm();
      if (hardening_.h1(z) < b.c_h1 * zz - b.c_h1_tilde - 1e-12 * (1.0 + zz)) coercive_ok = false;
      // derived Hessian bounds are sampled maxima; only configured ones are checked
      if (bounds_.big_c_h1_zz && hardening_.h1_hessian(z).operatorNorm() > b.big_c_h1_zz * (1.0 + 1e-9)) h1_ok = false;
      if (bounds_.big_c_h2_zz && hardening_.h2_hessian(z).operatorNorm() > b.big_c_h2_zz * (1.0 + 1e-9)) h2_ok = false;
      if (hardening_.h2_gradient(z).norm() > b.big_c_h2_z * (1.0 + z.norm()) * (1.0 + 1e-9) + 1e-14) growth_ok = false;
    }
    if (!coercive_ok) fail("(A-2)", "H1(z) >= c^H1 |z|^2 - c~^H1 violated at sampled z");
    if (!h1_ok) fail("(A-2)", "|d2 H1| exceeds C^H1_zz at sampled z");
    if (!h2_ok) fail("(A-2)", "|d2 H2| exceeds C^H2_zz at sampled z");
    if (!growth_ok) fail("(A-2)", "|d H2(z)| exceeds C^H2_z (1 + |z|) at sampled z");
  }
  if (!(tensors_.alpha >= 0.0)) fail("(A-2)", "alpha must be >= 0");
  if (tensors_.alpha == 0.0 && !hardening_.h2_vanishes())
    fail("(A-2)", "dichotomy violated: alpha = 0 requires dz H2 == 0 "
                  "(either alpha>0 and c^H1>0 or alpha=0 and dz H2 == 0)");
  if (tensors_.alpha > 0.0 && !(b.c_h1 > 0.0))
    fail("(A-2)", "dichotomy violated: alpha > 0 requires c^H1 > 0 "
                  "(either alpha>0 and c^H1>0 or alpha=0 and dz H2 == 0)");

  // (A-3) elasticity
  if (tensor::asymmetry(tensors_.elasticity) > 1e-12) fail("(A-3)", "elasticity tensor E is not symmetric");
  {
    double emin = tensor::min_eigenvalue(tensors_.elasticity);
    for (const Vec& x : sample_points)
      emin = std::min(emin, tensors_.elasticity_scale(x) * tensor::min_eigenvalue(tensors_.elasticity));
    if (!(b.c_e > 0.0)) fail("(A-3)", "coercivity floor c^E must be positive (got " + num(b.c_e) + ")");
    if (emin < b.c_e * (1.0 - 1e-12)) fail("(A-3)", "smallest eigenvalue of E " + num(emin) + " below c^E floor " + num(b.c_e));
  }

  // (A-4) viscosities
  if (tensor::asymmetry(tensors_.viscosity_a) > 1e-12) fail("(A-4)", "viscosity A is not symmetric");
  if (tensor::asymmetry(tensors_.viscosity_b) > 1e-12) fail("(A-4)", "viscosity B is not symmetric");
  {
    const double amin = tensor::min_eigenvalue(tensors_.viscosity_a), amax = tensor::max_eigenvalue(tensors_.viscosity_a);
    const double bmin = tensor::min_eigenvalue(tensors_.viscosity_b), bmax = tensor::max_eigenvalue(tensors_.viscosity_b);
    if (!(b.c_a > 0.0)) fail("(A-4)", "c^A floor must be positive (got " + num(b.c_a) + ")");
    if (amin < b.c_a * (1.0 - 1e-12)) fail("(A-4)", "smallest eigenvalue of A below c^A floor");
    if (amax > b.big_c_a * (1.0 + 1e-12)) fail("(A-4)", "largest eigenvalue of A above C^A");
    if (m > 0) {
      if (!(b.c_b > 0.0)) fail("(A-4)", "c^B floor must be positive (got " + num(b.c_b) + ")");
      if (bmin < b.c_b * (1.0 - 1e-12)) fail("(A-4)", "smallest eigenvalue of B below c^B floor");
      if (bmax > b.big_c_b * (1.0 + 1e-12)) fail("(A-4)", "largest eigenvalue of B above C^B");
    }
  }

  // (A-5) inelastic strain map: shapes are enforced at construction; values must be finite.
  if (!tensors_.q_lin.allFinite() || !tensors_.q_aff.allFinite()) fail("(A-5)", "Q contains non-finite entries");

  // (A-7) thermal data and the sign of beta
  if (!(tensors_.beta >= 0.0)) fail("(A-7)", "thermal expansion beta must be >= 0 (W_coup = beta tr(eps) + H2)");
  if (!(b.c_c > 0.0)) fail("(A-7)", "c(x) floor c^c must be positive");
  const bool has_kappa = thermal_.conductivity_matrix.size() > 0;
  if (has_kappa && !(b.c_kappa > 0.0)) fail("(A-7)", "conductivity floor c^kappa must be positive");
  if (thermal_.conductivity_matrix.size() && tensor::asymmetry(thermal_.conductivity_matrix) > 1e-12)
    fail("(A-7)", "conductivity matrix is not symmetric");
  {
    const double kmat_min = has_kappa ? tensor::min_eigenvalue(thermal_.conductivity_matrix) : 0.0;
    const double kmat_max = has_kappa ? tensor::max_eigenvalue(thermal_.conductivity_matrix) : 0.0;
    for (const Vec& x : sample_points) {
      const double c = thermal_.heat_capacity(x);
      if (!(c >= b.c_c * (1.0 - 1e-12))) {
        fail("(A-7)", "c(x) below c^c floor at a quadrature point (c = " + num(c) + ")");
        break;
      }
      if (!(c <= b.big_c_c * (1.0 + 1e-12))) {
        fail("(A-7)", "c(x) above C^c at a quadrature point (c = " + num(c) + ")");
        break;
      }
    }
    for (const Vec& x : sample_points) {
      if (!has_kappa) break;
      const double k = thermal_.conductivity(x);
      const double lo = std::min(k * kmat_min, k * kmat_max), hi = std::max(k * kmat_min, k * kmat_max);
      if (!(lo >= b.c_kappa * (1.0 - 1e-12)) || !(hi <= b.big_c_kappa * (1.0 + 1e-12))) {
        fail("(A-7)", "kappa(x) eigenvalues outside [c^kappa, C^kappa] at a quadrature point");
        break;
      }
    }
  }

  // (A-8) positivity floor of the initial temperature
  if (!(thermal_.theta_bar > 0.0)) fail("(A-8)", "theta_bar must be positive");
  return out;
}

}  // namespace tgsm
