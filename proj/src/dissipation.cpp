#include "tgsm/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tgsm/errors.hpp"

namespace tgsm {

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::norm_scaled: return "norm_scaled";
    case PotentialKind::weighted_l1: return "weighted_l1";
    case PotentialKind::zero: return "zero";
  }
  return "unknown";
}

DissipationPotential DissipationPotential::norm_scaled(double yield) {
  DissipationPotential p;
  p.kind_ = PotentialKind::norm_scaled;
  p.yield_ = yield;
  return p;
}

DissipationPotential DissipationPotential::norm_scaled_projected(double yield, Mat projector) {
  DissipationPotential p = norm_scaled(yield);
  p.projector_ = std::move(projector);
  return p;
}

DissipationPotential DissipationPotential::weighted_l1(Vec weights) {
  DissipationPotential p;
  p.kind_ = PotentialKind::weighted_l1;
  p.weights_ = std::move(weights);
  return p;
}

DissipationPotential DissipationPotential::zero() { return DissipationPotential{}; }

double DissipationPotential::value(const Vec& v) const {
  switch (kind_) {
    case PotentialKind::norm_scaled:
      return yield_ * (projected() ? (projector_ * v).norm() : v.norm());
    case PotentialKind::weighted_l1:
      if (weights_.size() != v.size()) throw ShapeError("weighted_l1: weight count differs from dim Z");
      return weights_.dot(v.cwiseAbs());
    case PotentialKind::zero: return 0.0;
  }
  return 0.0;
}

double DissipationPotential::c_psi() const {
  switch (kind_) {
    case PotentialKind::norm_scaled: return yield_;
    case PotentialKind::weighted_l1: return weights_.norm();
    case PotentialKind::zero: return 0.0;
  }
  return 0.0;
}

Vec DissipationPotential::prox(const Vec& x, double t) const {
  switch (kind_) {
    case PotentialKind::norm_scaled: {
      if (projected()) {
        const Vec px = projector_ * x;
        const double n = px.norm();
        const double shrink = n > t * yield_ ? 1.0 - t * yield_ / n : 0.0;
        return (x - px) + shrink * px;
      }
      const double n = x.norm();
      return n > t * yield_ ? Vec((1.0 - t * yield_ / n) * x) : Vec(Vec::Zero(x.size()));
    }
    case PotentialKind::weighted_l1: {
      Vec out(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double a = std::abs(x(i)) - t * weights_(i);
        out(i) = a > 0.0 ? std::copysign(a, x(i)) : 0.0;
      }
      return out;
    }
    case PotentialKind::zero: return x;
  }
  return x;
}

Mat deviatoric_projector(const Mat& q_lin, int tensor_dim) {
  const Vec n = q_lin.transpose() * tensor::identity(tensor_dim);
  const Eigen::Index m = q_lin.cols();
  Mat p = Mat::Identity(m, m);
  const double nn = n.squaredNorm();
  if (nn > 0.0) p -= n * n.transpose() / nn;
  return p;
}

double inclusion_objective(const Vec& v, const ProxProblem& p) {
  return p.potential->value(v) + 0.5 * v.dot(p.metric * v) + p.rhs.dot(v);
}

namespace {

bool is_scalar_identity(const Mat& m, double* scale) {
  const double s = m(0, 0);
  const Mat diff = m - s * Mat::Identity(m.rows(), m.cols());
  if (diff.cwiseAbs().maxCoeff() <= 1e-14 * std::abs(s)) {
    *scale = s;
    return true;
  }
  return false;
}

bool is_diagonal(const Mat& m) {
  Mat off = m;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= 1e-14 * m.diagonal().cwiseAbs().maxCoeff();
}

// Psi = yield |.| (Frobenius) and a general SPD metric: v = -(M + yield/r I)^{-1} g with
// r = |v| the root of  sum_i h_i^2 / (lambda_i r + yield)^2 = 1  in the eigenbasis of M.
Vec secular_norm_solve(const ProxProblem& p) {
  const double yield = p.potential->yield();
  const double gnorm = p.rhs.norm();
  if (gnorm <= yield) return Vec::Zero(p.rhs.size());
  Eigen::SelfAdjointEigenSolver<Mat> es(p.metric);
  const Vec lam = es.eigenvalues();
  const Vec h = es.eigenvectors().transpose() * p.rhs;
  auto f = [&](double r, double* df) {
    double val = -1.0, der = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      const double d = lam(i) * r + yield;
      val += h(i) * h(i) / (d * d);
      der += -2.0 * h(i) * h(i) * lam(i) / (d * d * d);
    }
    *df = der;
    return val;
  };
  // f is convex and decreasing on r >= 0, so Newton from r = 0 increases monotonically.
  double r = 0.0;
  for (int it = 0; it < 200; ++it) {
    double df = 0.0;
    const double val = f(r, &df);
    if (val <= 0.0 || df >= 0.0) break;
    const double step = -val / df;
    r += step;
    if (step <= 1e-15 * std::max(r, 1e-300)) break;
  }
  Vec coeff(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) coeff(i) = -r * h(i) / (lam(i) * r + yield);
  return es.eigenvectors() * coeff;
}

}  // namespace

Vec solve_inclusion(const ProxProblem& p, const InclusionOptions& opts, const Vec* warm_start) {
  if (p.potential == nullptr) throw std::invalid_argument("ProxProblem without potential");
  const Eigen::Index m = p.rhs.size();
  if (p.metric.rows() != m || p.metric.cols() != m) throw ShapeError("ProxProblem: metric/rhs size mismatch");
  if (!(p.dt > 0.0)) throw DomainError("ProxProblem: dt must be positive");
  if (m == 0) return Vec();

  Eigen::LLT<Mat> llt(p.metric);
  if (llt.info() != Eigen::Success || tensor::asymmetry(p.metric) > 1e-10)
    throw NumericError("inclusion metric is not symmetric positive definite");

  if (p.rhs.isZero(0.0)) return Vec::Zero(m);

  const DissipationPotential& psi = *p.potential;
  if (psi.kind() == PotentialKind::zero) return -llt.solve(p.rhs);

  double mu = 0.0;
  if (psi.kind() == PotentialKind::norm_scaled && is_scalar_identity(p.metric, &mu)) {
    // Radial return.
    if (psi.projected()) {
      const Vec pg = psi.projector() * p.rhs;
      const double n = pg.norm();
      Vec v = -(p.rhs - pg) / mu;
      if (n > psi.yield()) v -= (n - psi.yield()) / (mu * n) * pg;
      return v;
    }
    const double n = p.rhs.norm();
    if (n <= psi.yield()) return Vec::Zero(m);
    return -(n - psi.yield()) / (mu * n) * p.rhs;
  }
  if (psi.kind() == PotentialKind::norm_scaled && !psi.projected()) return secular_norm_solve(p);
  if (psi.kind() == PotentialKind::weighted_l1 && is_diagonal(p.metric)) {
    Vec v(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = std::abs(p.rhs(i)) - psi.weights()(i);
      v(i) = a > 0.0 ? -std::copysign(a, p.rhs(i)) / p.metric(i, i) : 0.0;
    }
    return v;
  }

  // Proximal-gradient iteration with step 1/lambda_max.
  const double lambda = tensor::max_eigenvalue(p.metric);
  Vec v = warm_start != nullptr && warm_start->size() == m ? *warm_start : Vec(Vec::Zero(m));
  std::vector<double> trace;
  for (int it = 0; it < opts.max_iter; ++it) {
    Vec next = psi.prox(v - (p.metric * v + p.rhs) / lambda, 1.0 / lambda);
    const double change = (next - v).norm();
    v = std::move(next);
    if (trace.size() < 64) trace.push_back(change);
    if (change <= opts.tol * (1.0 + v.norm())) return v;
  }
  trace.push_back((psi.prox(v - (p.metric * v + p.rhs) / lambda, 1.0 / lambda) - v).norm());
  throw ConvergenceError("proximal iteration did not converge", std::move(trace));
}

double subgradient_residual(const Vec& v, const ProxProblem& p, std::uint64_t seed) {
  const Eigen::Index m = v.size();
  const Vec slope = p.metric * v + p.rhs;
  const double psi_v = p.potential->value(v);
  double worst = 0.0;
  auto probe = [&](const Vec& w) {
    const double vi = p.potential->value(w) - psi_v + slope.dot(w - v);
    worst = std::max(worst, -vi);
  };
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec e = Vec::Zero(m);
    e(i) = 1.0;
    probe(e);
    probe(-e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 32 && m > 0; ++k) {
    Vec d(m);
    for (Eigen::Index i = 0; i < m; ++i) d(i) = normal(rng);
    probe(d.normalized());
  }
  probe(Vec::Zero(m));
  probe(2.0 * v);
  return worst;
}

}  // namespace tgsm
