// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Every tolerance is fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "tgsm/dissipation.hpp"
#include "tgsm/scenario.hpp"
#include "tgsm/writers.hpp"

using namespace tgsm;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Vec random_vec(std::mt19937_64& rng, int n, double scale) { return testing::random_vec(rng, n, scale); }

// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// 1. potential axioms

Outcome criterion1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uni(0.0, 10.0);
  const std::vector<DissipationPotential> pots = {
      DissipationPotential::norm_scaled(1.7),
      DissipationPotential::norm_scaled_projected(0.9, deviatoric_projector(Mat::Identity(3, 3), 2)),
      DissipationPotential::weighted_l1((Vec(3) << 0.3, 0.0, 2.0).finished()),
      DissipationPotential::zero()};
  double hom = 0.0, tri = 0.0, bound = 0.0;
  for (const auto& psi : pots) {
    for (int k = 0; k < 1000; ++k) {
      const Vec v = random_vec(rng, 3, 2.0), w = random_vec(rng, 3, 2.0);
      const double g = uni(rng);
      const double pv = psi.value(v);
      hom = std::max(hom, std::abs(psi.value(g * v) - g * pv) / std::max(g * pv, 1e-300));
      tri = std::max(tri, psi.value(v + w) - psi.value(v) - psi.value(w));
      bound = std::max(bound, std::max(-pv, pv - psi.c_psi() * v.norm()));
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = hom <= 1e-14 && tri <= 1e-12 && bound <= 1e-12 && secs < 1.0;
  o.detail = "homogeneity " + fmt("%.2e", hom) + ", triangle excess " + fmt("%.2e", tri) + ", bound excess " +
             fmt("%.2e", bound) + ", " + fmt("%.3f s", secs);
  return o;
}

// ---------------------------------------------------------------------------
// 2. inclusion solver against a grid scan of the objective

double objective(const Vec& v, const ProxProblem& p) {
  return p.potential->value(v) + 0.5 * v.dot(p.metric * v) + p.rhs.dot(v);
}

// Full scan in 1D, step 1e-4 on [-5, 5].
Vec scan_1d(const ProxProblem& p) {
  double best = 1e300, arg = 0.0;
  Vec v(1);
  for (int i = 0; i <= 100000; ++i) {
    v(0) = -5.0 + 1e-4 * i;
    const double f = objective(v, p);
    if (f < best) {
      best = f;
      arg = v(0);
    }
  }
  return Vec::Constant(1, arg);
}

// 2D scan: full grid at step 0.1, then nested windows of +-2 steps at 1e-2, 1e-3, 1e-4.
Vec scan_2d(const ProxProblem& p) {
  Vec c = Vec::Zero(2);
  double step = 0.1, lo0 = -5.0, lo1 = -5.0;
  int n = 100;
  for (int level = 0; level < 4; ++level) {
    double best = 1e300;
    Vec arg = c, v(2);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        v << lo0 + step * i, lo1 + step * j;
        const double f = objective(v, p);
        if (f < best) {
          best = f;
          arg = v;
        }
      }
    c = arg;
    lo0 = c(0) - 2.0 * step;
    lo1 = c(1) - 2.0 * step;
    step /= 10.0;
    n = 40;
  }
  return c;
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst_arg = 0.0, worst_res = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int dim = k < 100 ? 1 : 2;
    DissipationPotential psi = (k % 2 == 0) ? DissipationPotential::norm_scaled(2.0 * uni(rng))
                                            : DissipationPotential::weighted_l1(Vec(random_vec(rng, dim, 1.0).cwiseAbs()));
    // metric with eigenvalues in [0.5, 3]; |g| <= 2 keeps the minimiser inside the box
    const Mat r = random_vec(rng, dim * dim, 1.0).reshaped(dim, dim);
    const Eigen::HouseholderQR<Mat> qr(r);
    const Mat q = qr.householderQ();
    Vec lam(dim);
    for (int i = 0; i < dim; ++i) lam(i) = 0.5 + 2.5 * uni(rng);
    ProxProblem p;
    p.metric = q * lam.asDiagonal() * q.transpose();
    p.rhs = random_vec(rng, dim, 1.0);
    if (p.rhs.norm() > 2.0) p.rhs *= 2.0 / p.rhs.norm();
    p.potential = &psi;
    const Vec v = solve_inclusion(p);
    const Vec ref = dim == 1 ? scan_1d(p) : scan_2d(p);
    worst_arg = std::max(worst_arg, (v - ref).lpNorm<Eigen::Infinity>());
    worst_res = std::max(worst_res, subgradient_residual(v, p) / (1.0 + p.rhs.norm()));
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst_arg <= 1e-3 && worst_res <= 1e-8 && secs < 30.0;
  o.detail = "max |v - scan| " + fmt("%.2e", worst_arg) + ", max residual/(1+|g|) " + fmt("%.2e", worst_res) + ", " +
             fmt("%.2f s", secs);
  return o;
}

// ---------------------------------------------------------------------------
// 3. gradients against central differences

struct GradModel {
  std::string name;
  MaterialModel mat;
  double zscale;
};

std::vector<GradModel> gradient_models() {
  std::vector<GradModel> out;
  auto tensors = [](int td, const Mat& q, const Vec& aff, double alpha, double beta) {
    const int n = tensor::sym_size(td);
    TensorParams tp;
    tp.tensor_dim = td;
    tp.elasticity = tensor::isotropic(td, 30.0, 20.0);
    tp.viscosity_a = Mat::Identity(n, n);
    tp.viscosity_b = Mat::Identity(q.cols(), q.cols());
    tp.q_lin = q;
    tp.q_aff = aff;
    tp.alpha = alpha;
    tp.beta = beta;
    return tp;
  };
  ThermalParams th;
  th.heat_capacity = constant_field(1.7);
  th.conductivity_matrix = Mat::Identity(2, 2);
  const auto psi = DissipationPotential::norm_scaled(1.0);
  {
    Mat l(3, 3);
    l << 5, 1, 0, 1, 4, 0.5, 0, 0.5, 3;
    out.push_back({"melan_prager", MaterialModel(tensors(2, Mat::Identity(3, 3), Vec::Zero(3), 0.0, 0.2),
                                                 HardeningModel::melan_prager(l), th, psi),
                   0.1});
  }
  {
    SouzaAuricchioParams p;
    p.c1 = 0.4;
    p.c2 = 3.0;
    p.c3 = 0.05;
    p.delta = 1e-2;
    p.c1_theta = 0.1;
    p.c2_theta = 0.5;
    out.push_back({"souza_auricchio", MaterialModel(tensors(2, tensor::deviatoric_basis(2), Vec::Zero(3), 0.01, 0.1),
                                                    HardeningModel::souza_auricchio(2, p), th, psi),
                   0.08});
  }
  {
    MixtureParams p;
    p.phase_strains = {(Vec(3) << 0.02, -0.01, 0.0).finished(), (Vec(3) << -0.01, 0.02, 0.005).finished(),
                       Vec::Zero(3)};
    p.w1 = (Mat(2, 2) << 2.0, 0.3, 0.3, 1.0).finished();
    p.a1 = (Vec(2) << 0.1, -0.2).finished();
    p.w2 = 0.2 * Mat::Identity(2, 2);
    p.a2 = (Vec(2) << 0.05, 0.02).finished();
    p.delta = 0.05;
    auto [q, aff] = mixture_inelastic_map(p.phase_strains);
    out.push_back({"mixture", MaterialModel(tensors(2, q, aff, 0.01, 0.05), HardeningModel::mixture(p), th,
                                            DissipationPotential::weighted_l1(Vec::Constant(2, 0.1))),
                   0.8});
  }
  {
    const Mat l1 = (Mat(3, 3) << 2, 0.1, 0, 0.1, 2, 0, 0, 0, 1).finished();
    const Mat l2 = 0.3 * Mat::Identity(3, 3);
    out.push_back({"custom", MaterialModel(tensors(2, Mat::Identity(3, 3), Vec::Zero(3), 0.05, 0.3),
                                           HardeningModel::custom(l1, Vec::Constant(3, 0.1), l2, Vec::Constant(3, -0.05)),
                                           th, psi),
                   0.2});
  }
  return out;
}

double rel_err(double fd, double an) { return std::abs(fd - an) / std::max(std::abs(an), 1e-3); }

Outcome criterion3() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> uni(0.5, 3.0);
  double worst = 0.0;
  std::string where;
  for (const GradModel& gm : gradient_models()) {
    const MaterialModel& m = gm.mat;
    const HardeningModel& h = m.hardening();
    const int nz = m.z_dim();
    const int ns = m.sym_size();
    for (int k = 0; k < 100; ++k) {
      const Vec z = random_vec(rng, nz, gm.zscale);
      const Vec eps = random_vec(rng, ns, 0.02);
      const double theta = uni(rng);
      const Vec g1 = h.h1_gradient(z), g2 = h.h2_gradient(z), g = m.driving_force(eps, z, theta);
      const double hz = 1e-6 * std::max(1.0, gm.zscale);
      for (int i = 0; i < nz; ++i) {
        Vec zp = z, zm = z;
        zp(i) += hz;
        zm(i) -= hz;
        const double d1 = (h.h1(zp) - h.h1(zm)) / (2 * hz);
        const double d2 = (h.h2(zp) - h.h2(zm)) / (2 * hz);
        // local energy without the gradient term: W_mech + theta H2 (theta-only terms cancel)
        auto local = [&](const Vec& zz) { return m.mechanical_energy(eps, zz, Mat()) + theta * h.h2(zz); };
        const double dg = (local(zp) - local(zm)) / (2 * hz);
        for (auto [e, tag] : {std::pair{rel_err(d1, g1(i)), "dH1"}, {rel_err(d2, g2(i)), "dH2"},
                              {rel_err(dg, g(i)), "driving force"}}) {
          if (e > worst) {
            worst = e;
            where = gm.name + " " + tag;
          }
        }
      }
      const double ht = 1e-6 * theta;
      const double ds = -(m.free_energy(eps, z, Mat(), theta + ht) - m.free_energy(eps, z, Mat(), theta - ht)) / (2 * ht);
      const double e = rel_err(ds, m.entropy(eps, z, theta));
      if (e > worst) {
        worst = e;
        where = gm.name + " entropy";
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst <= 1e-5 && secs < 5.0;
  o.detail = "max relative error " + fmt("%.2e", worst) + " (" + where + "), " + fmt("%.3f s", secs);
  return o;
}

// ---------------------------------------------------------------------------
// 4. thermodynamic consistency of the shipped scenarios

Outcome criterion4() {
  const auto t0 = Clock::now();
  Outcome o;
  const auto names = list_scenarios();
  if (names.size() < 5) {
    o.pass = false;
    o.detail = "only " + std::to_string(names.size()) + " scenarios shipped";
    return o;
  }
  double worst_diss = 0.0, worst_ep = 0.0, worst_margin = 0.0;
  int max_unknowns = 0, max_steps = 0;
  for (const auto& n : names) {
    const ScenarioConfig sc = load_scenario(n);
    const auto& d = sc.model->disc();
    const int unknowns = d.num_u_dofs() + d.num_z_points() * d.z_dim() + d.num_nodes();
    max_unknowns = std::max(max_unknowns, unknowns);
    const RunResult res = run(*sc.model, sc.initial, sc.coupling);
    max_steps = std::max(max_steps, static_cast<int>(res.reports.size()) - 1);
    const double theta_bar = sc.material->thermal().theta_bar;
    bool ok = res.status == RunStatus::ok;
    for (std::size_t k = 1; k < res.reports.size(); ++k) {
      const StepReport& r = res.reports[k];
      const double scale = 1.0 + r.monitor;
      worst_diss = std::min(worst_diss, r.dissipation / scale);
      worst_ep = std::min(worst_ep, r.entropy_production / scale);
      worst_margin = std::min(worst_margin, r.positivity_margin / theta_bar);
      ok = ok && r.dissipation >= -1e-12 * scale && r.entropy_production >= -1e-10 * scale &&
           r.positivity_margin >= -1e-8 * theta_bar && std::isfinite(r.monitor);
    }
    if (!ok) {
      o.pass = false;
      o.detail += n + " failed (" + res.message + "); ";
    }
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && max_unknowns <= 2000 && max_steps <= 200 && secs < 120.0;
  o.detail += std::to_string(names.size()) + " scenarios, max " + std::to_string(max_unknowns) + " unknowns, max " +
              std::to_string(max_steps) + " steps, min dissipation/scale " + fmt("%.2e", worst_diss) +
              ", min entropy production/scale " + fmt("%.2e", worst_ep) + ", min margin/theta_bar " +
              fmt("%.2e", worst_margin) + ", " + fmt("%.1f s", secs);
  return o;
}

// ---------------------------------------------------------------------------
// 5. internal-energy balance on the smooth loaded bar

Outcome criterion5() {
  ScenarioConfig sc = load_scenario("smooth_loaded_bar_1d");
  std::vector<double> dts = {4e-3, 2e-3, 1e-3}, worst;
  for (double dt : dts) {
    sc.coupling.dt = dt;
    reset_initial_step(sc);
    const RunResult res = run(*sc.model, sc.initial, sc.coupling);
    double w = 0.0;
    for (std::size_t k = 1; k < res.reports.size(); ++k) w = std::max(w, res.reports[k].energy_residual);
    worst.push_back(w);
  }
  const double order = fitted_order(dts, worst);
  Outcome o;
  o.pass = worst.back() <= 5e-3 && order >= 0.8;
  o.detail = "max relative residual " + fmt("%.2e", worst[0]) + " / " + fmt("%.2e", worst[1]) + " / " +
             fmt("%.2e", worst[2]) + ", fitted order " + fmt("%.2f", order);
  return o;
}

// ---------------------------------------------------------------------------
// 6. heat equation with the decaying cosine mode

double heat_error(int cells, double dt) {
  testing::ScalarSpec s;
  s.c = 1.0;
  s.kappa = 1.0;
  const Model model(testing::interval(cells), testing::melan_prager(s));
  const double h = 1.0 / cells;
  Vec th(cells + 1);
  for (int i = 0; i <= cells; ++i) th(i) = std::cos(M_PI * i * h);
  HeatStepConfig cfg;
  cfg.dt = dt;
  const int steps = static_cast<int>(std::lround(0.1 / dt));
  for (int k = 0; k < steps; ++k) th = heat_step(model, th, HeatSourceField{}, cfg);
  // L2 error with 5-point Gauss-Legendre per element
  const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                        0.2369268850561891};
  const double decay = std::exp(-M_PI * M_PI * 0.1);
  double err2 = 0.0;
  for (int e = 0; e < cells; ++e) {
    for (int q = 0; q < 5; ++q) {
      const double s01 = 0.5 * (gx[q] + 1.0);
      const double x = (e + s01) * h;
      const double uh = (1.0 - s01) * th(e) + s01 * th(e + 1);
      const double d = uh - std::cos(M_PI * x) * decay;
      err2 += 0.5 * h * gw[q] * d * d;
    }
  }
  return std::sqrt(err2);
}

Outcome criterion6() {
  const std::vector<double> hs = {1.0 / 8, 1.0 / 16, 1.0 / 32};
  std::vector<double> es;
  for (double h : hs) es.push_back(heat_error(static_cast<int>(std::lround(1.0 / h)), 1e-5));
  const std::vector<double> dts = {4e-3, 2e-3, 1e-3};
  std::vector<double> et;
  for (double dt : dts) et.push_back(heat_error(64, dt));
  const double ps = fitted_order(hs, es), pt = fitted_order(dts, et);
  Outcome o;
  o.pass = ps >= 1.8 && pt >= 0.9;
  o.detail = "spatial order " + fmt("%.3f", ps) + " (errors " + fmt("%.2e", es[0]) + ", " + fmt("%.2e", es[1]) + ", " +
             fmt("%.2e", es[2]) + "), temporal order " + fmt("%.3f", pt) + " (errors " + fmt("%.2e", et[0]) + ", " +
             fmt("%.2e", et[1]) + ", " + fmt("%.2e", et[2]) + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 7. Melan-Prager point under cyclic strain

// Independent reference: scalar implicit Euler of B z' + y sign(z') = E(eps - z) - L z.
struct PointReference {
  double e, l, b, a, y, amp, period;
  double strain(double t) const {
    double s = std::fmod(t / period, 1.0);
    const double v = s < 0.25 ? 4.0 * s : (s < 0.75 ? 2.0 - 4.0 * s : 4.0 * s - 4.0);
    return amp * v;
  }
  // stress at the multiples of every-th fine step
  std::vector<double> run(double dt, double t_end, int every) const {
    std::vector<double> out = {0.0};
    double z = 0.0, eps_prev = 0.0;
    const long n = std::lround(t_end / dt);
    for (long k = 1; k <= n; ++k) {
      const double eps = strain(k * dt);
      const double g = -e * (eps - z) + l * z;
      const double mag = std::max(std::abs(g) - y, 0.0);
      z += -dt * (g > 0 ? 1.0 : -1.0) * mag / (b + dt * (e + l));
      if (k % every == 0) out.push_back(e * (eps - z) + a * (eps - eps_prev) / dt);
      eps_prev = eps;
    }
    return out;
  }
};

Outcome criterion7() {
  ScenarioConfig sc = load_scenario("melan_prager_point_0d");
  const double period = 40.0, dt = 1e-3;
  sc.coupling.dt = dt;
  sc.coupling.t_end = 3.0 * period;
  reset_initial_step(sc);
  const RunResult res = run(*sc.model, sc.initial, sc.coupling);
  Outcome o;
  if (res.status != RunStatus::ok) {
    o.pass = false;
    o.detail = "run failed: " + res.message;
    return o;
  }
  std::vector<double> stress;
  for (const SimState& s : res.trajectory) stress.push_back(point_stress(*sc.model, s)(0));
  const PointReference ref{200.0, 10.0, 1.0, 1.0, 1.0, 0.01, period};
  const std::vector<double> fine = ref.run(1e-5, 3.0 * period, 100);
  double worst = 0.0;
  const std::size_t n = std::min(fine.size(), stress.size());
  for (std::size_t k = 1; k < n; ++k) worst = std::max(worst, std::abs(stress[k] - fine[k]));
  const std::size_t per = static_cast<std::size_t>(std::lround(period / dt));
  const double closure = std::abs(stress[3 * per] - stress[2 * per]);
  const double zclose = std::abs(res.trajectory[3 * per].z(0) - res.trajectory[2 * per].z(0));
  o.pass = fine.size() == stress.size() && worst <= 1e-4 && closure <= 1e-6 && zclose <= 1e-6;
  o.detail = "max |stress - reference| " + fmt("%.2e", worst) + ", cycle 3 vs 2 end stress " + fmt("%.2e", closure) +
             ", z " + fmt("%.2e", zclose);
  return o;
}

// ---------------------------------------------------------------------------
// 8. decoupled limit

Outcome criterion8() {
  ScenarioConfig sc = load_scenario("decoupled_bar_1d");
  sc.coupling.mode = CouplingMode::picard_to_convergence;
  const RunResult a = run(*sc.model, sc.initial, sc.coupling);
  sc.coupling.mode = CouplingMode::staggered_once;
  const RunResult b = run(*sc.model, sc.initial, sc.coupling);
  int max_iters = 0;
  for (std::size_t k = 1; k < a.reports.size(); ++k) max_iters = std::max(max_iters, a.reports[k].picard_iters);
  double diff = 0.0;
  const bool same_len = a.trajectory.size() == b.trajectory.size();
  for (std::size_t k = 0; same_len && k < a.trajectory.size(); ++k) {
    const SimState &x = a.trajectory[k], &y = b.trajectory[k];
    diff = std::max({diff, (x.u - y.u).lpNorm<Eigen::Infinity>(), (x.z - y.z).lpNorm<Eigen::Infinity>(),
                     (x.theta - y.theta).lpNorm<Eigen::Infinity>(), std::abs(x.t - y.t)});
  }
  Outcome o;
  o.pass = a.status == RunStatus::ok && b.status == RunStatus::ok && same_len && max_iters <= 2 && diff <= 1e-12;
  o.detail = "max Picard iterations " + std::to_string(max_iters) + ", max trajectory difference " + fmt("%.2e", diff);
  return o;
}

// ---------------------------------------------------------------------------
// 9. indicator arithmetic

Outcome criterion9() {
  const IndicatorResult r = global_existence_indicator(0.4, 1.0, 1.0, 16.0);
  const bool exact = r.threshold == 0.5 && r.flag;
  const bool boundary = !global_existence_indicator(0.5, 1.0, 1.0, 16.0).flag &&
                        global_existence_indicator(std::nextafter(0.5, 0.0), 1.0, 1.0, 16.0).flag &&
                        !global_existence_indicator(std::nextafter(0.5, 1.0), 1.0, 1.0, 16.0).flag;
  Outcome o;
  o.pass = exact && boundary;
  o.detail = "threshold " + format_double(r.threshold) + ", flag(0.4) " + (r.flag ? "true" : "false") +
             ", strict boundary " + (boundary ? "ok" : "broken");
  return o;
}

// ---------------------------------------------------------------------------
// 10. determinism and CSV round trip

Outcome criterion10() {
  ScenarioConfig sc = load_scenario("souza_auricchio_plate_2d");
  const std::string a = format_timeseries(run(*sc.model, sc.initial, sc.coupling).reports);
  const std::string b = format_timeseries(run(*sc.model, sc.initial, sc.coupling).reports);
  const auto reports = run(*sc.model, sc.initial, sc.coupling).reports;
  const auto back = parse_timeseries(format_timeseries(reports));
  double worst = 0.0;
  bool same = back.size() == reports.size();
  for (std::size_t k = 0; same && k < back.size(); ++k) {
    const StepReport &x = reports[k], &y = back[k];
    const double pairs[][2] = {{x.t, y.t},
                               {x.dt, y.dt},
                               {x.free_energy, y.free_energy},
                               {x.entropy, y.entropy},
                               {x.internal_energy, y.internal_energy},
                               {x.dissipation, y.dissipation},
                               {x.entropy_production, y.entropy_production},
                               {x.energy_residual, y.energy_residual},
                               {x.entropy_residual, y.entropy_residual},
                               {x.external_power, y.external_power},
                               {x.theta_min, y.theta_min},
                               {x.theta_max, y.theta_max},
                               {x.phi, y.phi},
                               {x.positivity_margin, y.positivity_margin},
                               {x.monitor, y.monitor},
                               {static_cast<double>(x.picard_iters), static_cast<double>(y.picard_iters)},
                               {x.picard_residual, y.picard_residual}};
    for (const auto& p : pairs) worst = std::max(worst, std::abs(p[0] - p[1]) / std::max(std::abs(p[0]), 1e-300));
  }
  Outcome o;
  o.pass = a == b && same && worst <= 1e-15;
  o.detail = std::string("byte-identical CSV ") + (a == b ? "yes" : "no") + ", max round-trip relative error " +
             fmt("%.2e", worst);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"dissipation potential axioms", criterion1},
      {"inclusion solver vs grid scan", criterion2},
      {"gradients vs finite differences", criterion3},
      {"thermodynamic consistency of shipped scenarios", criterion4},
      {"internal energy balance", criterion5},
      {"heat equation manufactured solution", criterion6},
      {"point hysteresis vs fine reference", criterion7},
      {"decoupled limit", criterion8},
      {"indicator arithmetic", criterion9},
      {"determinism and CSV round trip", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", checks[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
