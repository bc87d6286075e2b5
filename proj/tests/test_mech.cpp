#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tgsm/errors.hpp"
#include "tgsm/scenario.hpp"

using namespace tgsm;
using tgsm::testing::random_vec;

namespace {

// Independent scalar implicit Euler step of the Melan-Prager point: with
// G(z) = -E(eps - z) + L z linear, the inclusion 0 in y d|w| + B w + G(z_n + dt w)
// has the closed form w = -max(|g| - y, 0) sign(g) / (B + dt (E + L)), g = G(z_n).
double reference_point_step(double eps_new, double zn, double dt, double e, double l, double b, double y) {
  const double g = -e * (eps_new - zn) + l * zn;
  const double mag = std::max(std::abs(g) - y, 0.0);
  const double w = -(g > 0 ? 1.0 : -1.0) * mag / (b + dt * (e + l));
  return zn + dt * w;
}

Model point_model(double rate) {
  testing::ScalarSpec s;
  s.e = 200.0;
  s.l = 10.0;
  s.b = 1.0;
  s.yield = 1.0;
  s.mesh_dim = 0;
  Loading ld;
  ld.strain_path = [rate](double t) { return Vec::Constant(1, rate * t); };
  return Model(testing::point(), testing::melan_prager(s), ld);
}

SimState advance(const Model& model, const SimState& s, const MechResult& r, double dt) {
  SimState n = s;
  n.step = s.step + 1;
  n.t_prev = s.t;
  n.t = s.t + dt;
  n.u = r.u;
  n.z = r.z;
  n.eps_point = r.eps_point;
  (void)model;
  return n;
}

double ramp_z(double dt, double t_end) {
  const Model model = point_model(0.01);
  SimState s = model.initial_state(Vec(), Vec(), Vec::Ones(1), dt);
  MechStepConfig cfg;
  cfg.dt = dt;
  cfg.tol_uz = 1e-13;
  const int n = static_cast<int>(std::lround(t_end / dt));
  for (int k = 0; k < n; ++k) s = advance(model, s, mech_step(model, s, Vec::Ones(1), cfg), dt);
  return s.z(0);
}

}  // namespace

TEST_CASE("equilibrium state is stationary") {
  testing::ScalarSpec s;
  s.e = 10.0;
  const Model model(testing::interval(6), testing::melan_prager(s));
  const SimState st = model.initial_state(Vec(), Vec(), Vec::Constant(7, 1.3), 0.1);
  MechStepConfig cfg;
  cfg.dt = 0.1;
  const MechResult r = mech_step(model, st, st.theta, cfg);
  CHECK(r.u.norm() == 0.0);
  CHECK(r.z.norm() == 0.0);
  CHECK(r.report.iterations == 1);
}

TEST_CASE("point under a strain ramp sticks until the yield stress") {
  const Model model = point_model(0.01);
  const double dt = 0.01;
  SimState s = model.initial_state(Vec(), Vec(), Vec::Ones(1), dt);
  MechStepConfig cfg;
  cfg.dt = dt;
  cfg.tol_uz = 1e-13;
  double z_ref = 0.0;
  for (int k = 0; k < 100; ++k) {
    const MechResult r = mech_step(model, s, Vec::Ones(1), cfg);
    const double t = s.t + dt;
    z_ref = reference_point_step(0.01 * t, z_ref, dt, 200.0, 10.0, 1.0, 1.0);
    CHECK(r.z(0) == doctest::Approx(z_ref).epsilon(1e-12).scale(1e-12));
    if (t < 0.5 - 1e-12) CHECK(r.z(0) == 0.0);
    s = advance(model, s, r, dt);
  }
  CHECK(s.z(0) > 0.0);
}

TEST_CASE("first-order convergence of the point response") {
  // reference: the closed-form step at dt = 1e-5, compared shortly after yield onset
  // where the viscous transient is still active
  double z = 0.0;
  const double fine = 1e-5;
  for (int k = 1; k <= 52000; ++k) z = reference_point_step(0.01 * k * fine, z, fine, 200.0, 10.0, 1.0, 1.0);
  const double e1 = std::abs(ramp_z(2e-3, 0.52) - z);
  const double e2 = std::abs(ramp_z(1e-3, 0.52) - z);
  const double order = std::log2(e1 / e2);
  CHECK(order > 0.8);
  CHECK(order < 1.3);
}

TEST_CASE("momentum residual") {
  testing::ScalarSpec s;
  s.e = 20.0;
  s.yield = 0.5;
  s.beta = 0.3;
  Loading ld;
  ld.nodal_force = [](double t) { return Vec::Constant(9, 5.0 * t); };
  const Model model(testing::interval(8), testing::melan_prager(s), ld);
  const SimState st = model.initial_state(Vec(), Vec(), Vec::Constant(9, 1.0), 0.1);
  MechStepConfig cfg;
  cfg.dt = 0.1;
  const MechResult r = mech_step(model, st, st.theta, cfg);
  const double fnorm = model.load_vector(0.1).norm();
  CHECK(r.report.momentum_residual <= 1e-8 * (1.0 + fnorm));
  CHECK(r.report.flow_residual <= 1e-8 * (1.0 + fnorm));

  std::mt19937_64 rng(1);
  Vec dir = random_vec(rng, 9);
  dir(0) = dir(8) = 0.0;
  double prev = 0.0;
  for (double h : {1e-3, 5e-4, 2.5e-4}) {
    const double res = momentum_residual(model, r.u + h * dir, r.z, st.u, st.theta, 0.1, 0.1);
    if (prev > 0.0) CHECK(prev / res == doctest::Approx(2.0).epsilon(1e-3));
    prev = res;
  }

  // u = z = 0 and beta = 0: the residual is the load vector on the free dofs
  s.beta = 0.0;
  const Model m2(testing::interval(8), testing::melan_prager(s), ld);
  const Vec lv = m2.load_vector(0.1);
  CHECK(momentum_residual(m2, Vec::Zero(9), Vec::Zero(m2.disc().num_z_points()), Vec::Zero(9), Vec::Ones(9), 0.1, 0.1) ==
        doctest::Approx(lv.segment(1, 7).norm()).epsilon(1e-13));
}

TEST_CASE("the step does not depend on the starting guess") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    testing::ScalarSpec s;
    s.e = 50.0 + 50.0 * std::abs(random_vec(rng, 1)(0));
    s.l = 5.0;
    s.yield = 0.5;
    s.beta = 0.1;
    const Vec amp = random_vec(rng, 11, 20.0);
    Loading ld;
    ld.nodal_force = [amp](double t) { return Vec(amp * t); };
    const Model model(testing::interval(10), testing::melan_prager(s), ld);
    const SimState st = model.initial_state(Vec(), Vec(), Vec::Constant(11, 1.2), 0.05);
    MechStepConfig cfg;
    cfg.dt = 0.05;
    cfg.tol_uz = 1e-12;
    const MechResult a = mech_step(model, st, st.theta, cfg);
    MechResult guess = a;
    guess.u = random_vec(rng, 11, 0.5);
    guess.u(0) = guess.u(10) = 0.0;
    guess.z = random_vec(rng, static_cast<int>(a.z.size()), 0.5);
    const MechResult b = mech_step(model, st, st.theta, cfg, &guess);
    CHECK((a.u - b.u).lpNorm<Eigen::Infinity>() <= 1e-7);
    CHECK((a.z - b.z).lpNorm<Eigen::Infinity>() <= 1e-7);
  }
}

TEST_CASE("frozen and Newton linearisations agree on a nonconvex hardening") {
  ScenarioConfig sc = load_scenario("souza_auricchio_plate_2d");
  const Model& model = *sc.model;
  MechStepConfig cfg;
  cfg.dt = 0.02;
  cfg.tol_uz = 1e-12;
  SimState st = sc.initial;
  MechResult a = mech_step(model, st, st.theta, cfg);
  for (int k = 0; k < 3; ++k) {
    st.t += cfg.dt;
    st.u = a.u;
    st.z = a.z;
    a = mech_step(model, st, st.theta, cfg);
  }
  cfg.linearization = Linearization::newton_local;
  const MechResult b = mech_step(model, st, st.theta, cfg);
  CHECK(a.z.norm() > 0.0);
  CHECK((a.z - b.z).lpNorm<Eigen::Infinity>() <= 1e-8);
  CHECK((a.u - b.u).lpNorm<Eigen::Infinity>() <= 1e-8);
  CHECK(b.report.flow_residual <= 1e-8);
}

TEST_CASE("bad inputs") {
  const Model model(testing::interval(4), testing::melan_prager(testing::ScalarSpec{}));
  const SimState st = model.initial_state(Vec(), Vec(), Vec::Ones(5), 0.1);
  MechStepConfig cfg;
  cfg.dt = -1.0;
  CHECK_THROWS_AS(mech_step(model, st, st.theta, cfg), DomainError);
  cfg.dt = 0.1;
  CHECK_THROWS_AS(mech_step(model, st, Vec::Ones(3), cfg), ShapeError);
}
