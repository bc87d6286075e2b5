#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "tgsm/errors.hpp"
#include "tgsm/scenario.hpp"
#include "tgsm/writers.hpp"

using namespace tgsm;

TEST_CASE("trajectory bookkeeping") {
  ScenarioConfig sc = load_scenario("decoupled_bar_1d");
  const RunResult res = run(*sc.model, sc.initial, sc.coupling, 10);
  CHECK(res.trajectory.size() == 11);
  CHECK(res.reports.size() == 11);
  CHECK(res.trajectory.back().step == 10);
  CHECK(res.trajectory.back().t == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("zero loading at equilibrium converges in one Picard iteration") {
  testing::ScalarSpec s;
  s.beta = 0.3;
  const Model model(testing::interval(6), testing::melan_prager(s));
  const SimState st = model.initial_state(Vec(), Vec(), Vec::Constant(7, 1.1), 0.05);
  CouplingConfig cfg;
  cfg.dt = 0.05;
  const StepOutcome out = picard_step(model, st, cfg);
  CHECK(out.report.picard_iters == 1);
  CHECK((out.state.theta - st.theta).lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK(out.state.u.lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("decoupled problems need at most two Picard iterations") {
  ScenarioConfig sc = load_scenario("decoupled_bar_1d");
  const RunResult res = run(*sc.model, sc.initial, sc.coupling);
  REQUIRE(res.status == RunStatus::ok);
  for (std::size_t k = 1; k < res.reports.size(); ++k) {
    CHECK(res.reports[k].picard_iters <= 2);
    if (res.reports[k].picard_trace.size() == 2) CHECK(res.reports[k].picard_trace[1] <= 1e-12);
  }
}

TEST_CASE("Picard contraction grows with the coupling strength") {
  // theta-dependent mixture hardening with growing thermal expansion
  std::vector<double> factors;
  for (double beta : {0.01, 0.1, 0.5}) {
    ScenarioConfig sc = load_scenario("smooth_loaded_bar_1d");
    const auto& base = *sc.material;
    TensorParams tp = base.tensors();
    tp.beta = beta;
    auto mat = std::make_shared<const MaterialModel>(tp, base.hardening(), base.thermal(), base.dissipation());
    const Model model(sc.model->disc().mesh(), mat, sc.model->loading());
    SimState st = model.initial_state(Vec(), Vec(), sc.initial.theta, 0.004);
    CouplingConfig cfg = sc.coupling;
    cfg.picard_tol = 1e-13;
    // a few steps in so that plastic flow is active
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const StepOutcome out = picard_step(model, st, cfg);
      const auto& tr = out.report.picard_trace;
      for (std::size_t i = 1; i + 1 < tr.size(); ++i)
        if (tr[i - 1] > 1e-11) worst = std::max(worst, tr[i] / tr[i - 1]);
      st = out.state;
    }
    factors.push_back(worst);
  }
  CHECK(factors[0] < 1.0);
  CHECK(factors[1] < 1.0);
  CHECK(factors[2] < 1.0);
  CHECK(factors[0] <= factors[1]);
  CHECK(factors[1] <= factors[2]);
}

TEST_CASE("step size is halved on failure and recovers") {
  ScenarioConfig sc = load_scenario("melan_prager_bar_1d");
  sc.coupling.picard_max = 4;
  sc.coupling.t_end = 0.3;
  sc.coupling.dt_min = 1e-6;
  const RunResult res = run(*sc.model, sc.initial, sc.coupling);
  CHECK(res.status == RunStatus::ok);
  CHECK(res.step_cuts > 0);
  CHECK(res.trajectory.back().t == doctest::Approx(0.3).epsilon(1e-12));
  sc.coupling.adapt_dt = false;
  const RunResult abort = run(*sc.model, sc.initial, sc.coupling);
  CHECK(abort.status == RunStatus::solver_abort);
  CHECK(!abort.failure_trace.empty());
  CHECK(abort.message.find("Picard") != std::string::npos);
}

TEST_CASE("monitor bound turns into a diagnostic violation") {
  ScenarioConfig sc = load_scenario("decoupled_bar_1d");
  sc.coupling.c0 = 1.5;
  const RunResult res = run(*sc.model, sc.initial, sc.coupling);
  CHECK(res.status == RunStatus::diagnostic_violation);
  CHECK(res.message.find("monitor") != std::string::npos);
}

TEST_CASE("restart from a checkpoint continues the same trajectory") {
  ScenarioConfig sc = load_scenario("mixture_bar_1d");
  sc.coupling.t_end = 0.1;
  const RunResult full = run(*sc.model, sc.initial, sc.coupling);
  REQUIRE(full.trajectory.size() == 11);
  const RunResult first = run(*sc.model, sc.initial, sc.coupling, 5);
  const SimState restored = parse_checkpoint(format_checkpoint(first.trajectory.back()));
  const RunResult second = run(*sc.model, restored, sc.coupling);
  REQUIRE(second.trajectory.size() == 6);
  CHECK((second.trajectory.back().theta - full.trajectory.back().theta).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((second.trajectory.back().z - full.trajectory.back().z).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("existence indicator") {
  const IndicatorResult r = global_existence_indicator(0.4, 1.0, 1.0, 16.0);
  CHECK(r.threshold == 0.5);
  CHECK(r.flag);
  const IndicatorResult edge = global_existence_indicator(0.5, 1.0, 1.0, 16.0);
  CHECK(!edge.flag);
  CHECK(global_existence_indicator(std::nextafter(0.5, 0.0), 1.0, 1.0, 16.0).flag);
  const IndicatorResult zero = global_existence_indicator(0.0, 1.0, 1.0, 16.0);
  CHECK(!zero.flag);
  CHECK(zero.decoupled);
  CHECK(zero.message.find("decoupled/global by construction") != std::string::npos);
  // 1 / (2 * 2 * 16^(1/16))
  CHECK(global_existence_indicator(0.1, 2.0, 16.0, 16.0).threshold ==
        doctest::Approx(1.0 / (4.0 * std::pow(16.0, 1.0 / 16.0))).epsilon(1e-15));
  CHECK_THROWS_AS(global_existence_indicator(0.1, 0.0, 1.0, 16.0), DomainError);
  CHECK_THROWS_AS(global_existence_indicator(0.1, 1.0, 1.0, 8.0), DomainError);
  CHECK_THROWS_AS(global_existence_indicator(-0.1, 1.0, 1.0, 16.0), DomainError);
}

TEST_CASE("existence indicator with gradient regularisation") {
  // small coupling: C_hat (X+1)^4 < R has solutions for R near 2 C_hat
  const IndicatorResult small = global_existence_indicator(1e-3, 0.1, 1.0, 16.0, 1e-3, 0.0);
  CHECK(small.has_alpha_branch);
  CHECK(small.alpha_flag);
  CHECK(small.gamma_min < 0.0);
  const double x = (1e-6 + 1e-6) * small.r_best * small.r_best;
  CHECK(small.gamma_min == doctest::Approx(0.1 * std::pow(x + 1.0, 4) - small.r_best).epsilon(1e-12));
  // strong coupling: gamma(R) > 0 for all R
  const IndicatorResult big = global_existence_indicator(1.0, 1.0, 1.0, 16.0, 1.0, 1.0);
  CHECK(!big.alpha_flag);
  CHECK(big.gamma_min > 0.0);
}

TEST_CASE("L4 norm with lumped weights") {
  const Model model(testing::interval(4, 2.0), testing::melan_prager(testing::ScalarSpec{}));
  CHECK(l4_norm(model, Vec::Constant(5, 3.0)) == doctest::Approx(3.0 * std::pow(2.0, 0.25)).epsilon(1e-14));
}
