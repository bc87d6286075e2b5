#pragma once

// Positively 1-homogeneous dissipation potentials and the implicit flow-rule
// inclusion   0 in dPsi(v) + M v + g   at one material point.

#include <cstdint>
#include <string>

#include "tgsm/tensor.hpp"

namespace tgsm {

enum class PotentialKind { norm_scaled, weighted_l1, zero };

std::string to_string(PotentialKind kind);

class DissipationPotential {
 public:
  /// Psi(v) = yield * |v|, Euclidean norm on the stored Z coordinates.
  static DissipationPotential norm_scaled(double yield);
  /// Psi(v) = yield * |P v| with P the orthogonal projector given (symmetric, idempotent).
  static DissipationPotential norm_scaled_projected(double yield, Mat projector);
  /// Psi(v) = sum_i w_i |v_i|.
  static DissipationPotential weighted_l1(Vec weights);
  static DissipationPotential zero();

  PotentialKind kind() const { return kind_; }
  double yield() const { return yield_; }
  const Vec& weights() const { return weights_; }
  bool projected() const { return projector_.size() > 0; }
  const Mat& projector() const { return projector_; }

  double value(const Vec& v) const;
  /// Psi(v) <= C_psi |v|; tight for every variant.
  double c_psi() const;
  /// argmin_v  t Psi(v) + 1/2 |v - x|^2.
  Vec prox(const Vec& x, double t) const;

 private:
  PotentialKind kind_ = PotentialKind::zero;
  double yield_ = 0.0;
  Vec weights_;
  Mat projector_;
};

/// Orthogonal projector onto {v : tr(Q_lin v) = 0}; identity when Q_lin^T I = 0.
Mat deviatoric_projector(const Mat& q_lin, int tensor_dim);

/// One pointwise inclusion  0 in dPsi(v) + metric v + rhs.
struct ProxProblem {
  Mat metric;  ///< symmetric positive definite on Z
  Vec rhs;     ///< frozen driving force g
  double dt = 1.0;
  const DissipationPotential* potential = nullptr;
};

struct InclusionOptions {
  double tol = 1e-10;
  int max_iter = 10000;
};

/// Value of Psi(v) + 1/2 (M v).v + g.v.
double inclusion_objective(const Vec& v, const ProxProblem& p);

/// Minimiser of Psi(v) + 1/2 (Mv).v + g.v. Throws NumericError for a non-SPD
/// metric and ConvergenceError when the proximal iteration runs out of budget.
Vec solve_inclusion(const ProxProblem& p, const InclusionOptions& opts = {}, const Vec* warm_start = nullptr);

/// Largest violation of  Psi(w) - Psi(v) + (M v + g).(w - v) >= 0  over the probe set
/// {+-e_i, 32 seeded random unit vectors, 0, 2v}. Zero iff v solves the inclusion
/// (up to probe coverage).
double subgradient_residual(const Vec& v, const ProxProblem& p, std::uint64_t seed = 0x5eedULL);

}  // namespace tgsm
