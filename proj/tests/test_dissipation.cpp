#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tgsm/dissipation.hpp"
#include "tgsm/errors.hpp"

using namespace tgsm;
using tgsm::testing::random_vec;

TEST_CASE("potential values") {
  CHECK(DissipationPotential::norm_scaled(1.0).value(Vec::Zero(3)) == 0.0);
  CHECK(DissipationPotential::norm_scaled(2.0).value((Vec(2) << 0.0, 3.0).finished()) == 6.0);
  const auto l1 = DissipationPotential::weighted_l1((Vec(2) << 1.0, 2.0).finished());
  CHECK(l1.value((Vec(2) << -1.0, 0.5).finished()) == 2.0);
  CHECK(DissipationPotential::zero().value(Vec::Ones(2)) == 0.0);
}

TEST_CASE("scalar inclusions") {
  const auto psi = DissipationPotential::norm_scaled(1.0);
  ProxProblem p{Mat::Constant(1, 1, 2.0), Vec::Constant(1, 0.5), 1.0, &psi};
  const Vec stick = solve_inclusion(p);
  CHECK(stick(0) == 0.0);
  CHECK(subgradient_residual(stick, p) <= 1e-10);

  p.rhs(0) = 3.0;
  const Vec slip = solve_inclusion(p);
  CHECK(slip(0) == doctest::Approx(-1.0).epsilon(1e-12));

  // wrong answer: the probe v = -1 gives 1 - 0 + 3 * (-1) = -2
  CHECK(subgradient_residual(Vec::Zero(1), p) >= 1.0);
  const double r = subgradient_residual(slip + Vec::Constant(1, 1e-3), p);
  CHECK(r > 0.0);
  CHECK(r < 1e-2);
}

TEST_CASE("vector radial return") {
  const auto psi = DissipationPotential::norm_scaled(1.0);
  const ProxProblem p{Mat::Identity(2, 2), (Vec(2) << 3.0, 4.0).finished(), 1.0, &psi};
  const Vec v = solve_inclusion(p);
  // -(|g| - yield) g / |g|
  const Vec expect = -(5.0 - 1.0) / 5.0 * p.rhs;
  CHECK((v - expect).norm() < 1e-12);
}

TEST_CASE("zero right-hand side gives zero rate") {
  std::mt19937_64 rng(2);
  const auto psi = DissipationPotential::norm_scaled(0.7);
  const Mat r = random_vec(rng, 9).reshaped(3, 3);
  const ProxProblem p{r * r.transpose() + Mat::Identity(3, 3), Vec::Zero(3), 1.0, &psi};
  CHECK(solve_inclusion(p).norm() == 0.0);
}

TEST_CASE("solution identity and monotonicity") {
  std::mt19937_64 rng(9);
  const std::vector<DissipationPotential> pots = {
      DissipationPotential::norm_scaled(0.8),
      DissipationPotential::weighted_l1((Vec(3) << 0.2, 0.5, 1.0).finished()),
      DissipationPotential::norm_scaled_projected(0.5, deviatoric_projector(Mat::Identity(3, 3), 2)),
      DissipationPotential::zero()};
  for (const auto& psi : pots) {
    for (int k = 0; k < 50; ++k) {
      const Mat r = random_vec(rng, 9).reshaped(3, 3);
      const Mat m = r * r.transpose() + 0.5 * Mat::Identity(3, 3);
      const Vec g1 = random_vec(rng, 3, 2.0), g2 = random_vec(rng, 3, 2.0);
      const ProxProblem p1{m, g1, 1.0, &psi}, p2{m, g2, 1.0, &psi};
      const Vec v1 = solve_inclusion(p1), v2 = solve_inclusion(p2);
      CHECK(subgradient_residual(v1, p1) <= 1e-8 * (1.0 + g1.norm()));
      // Psi(v) + (Mv).v = -g.v at the solution
      const double lhs = psi.value(v1) + v1.dot(m * v1);
      CHECK(std::abs(lhs + g1.dot(v1)) <= 1e-8 * (1.0 + std::abs(lhs)));
      CHECK((v1 - v2).dot(g2 - g1) >= -1e-10);
    }
  }
}

TEST_CASE("non-SPD metric is rejected") {
  const auto psi = DissipationPotential::norm_scaled(1.0);
  const ProxProblem p{-Mat::Identity(2, 2), Vec::Ones(2), 1.0, &psi};
  CHECK_THROWS_AS(solve_inclusion(p), NumericError);
}

TEST_CASE("prox of the weighted l1 potential is soft thresholding") {
  const auto psi = DissipationPotential::weighted_l1((Vec(3) << 1.0, 0.5, 0.0).finished());
  const Vec x = (Vec(3) << 3.0, -0.2, -4.0).finished();
  const Vec p = psi.prox(x, 2.0);
  CHECK(p(0) == doctest::Approx(1.0));
  CHECK(p(1) == 0.0);
  CHECK(p(2) == -4.0);
}
