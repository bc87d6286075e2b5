#include "tgsm/coupling.hpp"

#include <cmath>
#include <sstream>

#include "tgsm/errors.hpp"

namespace tgsm {

double l4_norm(const Model& model, const Vec& v) {
  const Vec& w = model.ops().volume_lumped;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += w(i) * std::pow(v(i), 4);
  return std::pow(sum, 0.25);
}

namespace {

PositivityParams positivity_params(const Model& model, const CouplingConfig& cfg) {
  if (cfg.positivity) return *cfg.positivity;
  const MaterialModel& mat = model.material();
  return PositivityParams::from_material(mat, mat.resolved_bounds(model.disc().sample_points()));
}

double z_inf(const Vec& z) { return z.size() ? z.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace

StepReport initial_report(const Model& model, const SimState& state, const CouplingConfig& cfg) {
  StepReport r;
  r.t = state.t;
  const EnergyTotals e = energy_totals(model, state.u, state.z, state.theta, state.t);
  r.free_energy = e.free_energy;
  r.entropy = e.entropy;
  r.internal_energy = e.internal_energy;
  r.theta_min = state.theta.minCoeff();
  r.theta_max = state.theta.maxCoeff();
  r.phi = std::exp(-state.phi_exponent);
  r.positivity_margin = r.theta_min - positivity_params(model, cfg).theta_bar * r.phi;
  r.monitor = global_estimate_monitor(model, state.u, state.z, state.theta);
  return r;
}

StepOutcome picard_step(const Model& model, const SimState& state, const CouplingConfig& cfg, double dt_override) {
  const double dt = dt_override > 0.0 ? dt_override : state.dt;
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (cfg.picard_max < 1) throw DomainError("picard_max must be at least 1");
  const double t_new = state.t + dt;

  MechStepConfig mcfg = cfg.mech;
  mcfg.dt = dt;
  HeatStepConfig hcfg = cfg.heat;
  hcfg.dt = dt;

  const std::vector<Vec> eps_prev = model.strains(state.u, state.t);
  Vec theta_tilde = state.theta;
  std::vector<double> trace;
  MechResult mech;
  HeatSourceField source;
  Vec theta;
  const int max_iter = cfg.mode == CouplingMode::staggered_once ? 1 : cfg.picard_max;
  bool converged = false;
  for (int k = 1; k <= max_iter; ++k) {
    mech = mech_step(model, state, theta_tilde, mcfg);
    const std::vector<Vec> eps_new = model.strains(mech.u, t_new);
    source = heat_rhs(model, eps_new, eps_prev, mech.z, state.z, dt);
    theta = heat_step(model, state.theta, source, hcfg, theta_tilde);
    if (!theta.allFinite()) throw NumericError("temperature is not finite");
    const double r = l4_norm(model, theta - theta_tilde);
    trace.push_back(r);
    if (cfg.mode == CouplingMode::staggered_once || r <= cfg.picard_tol) {
      converged = true;
      break;
    }
    theta_tilde = (1.0 - cfg.relaxation) * theta_tilde + cfg.relaxation * theta;
  }
  if (!converged) throw ConvergenceError("Picard iteration did not converge", trace);

  StepOutcome out;
  SimState& s = out.state;
  s = state;
  s.step = state.step + 1;
  s.t_prev = state.t;
  s.u_prev = state.u;
  s.z_prev = state.z;
  s.theta_prev = state.theta;
  s.eps_point_prev = state.eps_point;
  s.t = t_new;
  s.u = mech.u;
  s.z = mech.z;
  s.theta = theta;
  s.eps_point = mech.eps_point;

  const PositivityParams pp = positivity_params(model, cfg);
  const double rate_prev = state.step == 0 && state.phi_rate == 0.0
                               ? phi_rate(pp, state.theta.lpNorm<Eigen::Infinity>(), z_inf(state.z))
                               : state.phi_rate;
  s.phi_rate = phi_rate(pp, theta.lpNorm<Eigen::Infinity>(), z_inf(mech.z));
  s.phi_exponent = state.phi_exponent + 0.5 * dt * (rate_prev + s.phi_rate);

  StepReport& r = out.report;
  r.t = t_new;
  r.dt = dt;
  const EnergyTotals e0 = energy_totals(model, state.u, state.z, state.theta, state.t);
  const EnergyTotals e1 = energy_totals(model, s.u, s.z, s.theta, t_new);
  r.free_energy = e1.free_energy;
  r.entropy = e1.entropy;
  r.internal_energy = e1.internal_energy;
  r.dissipation = dt * dissipation_rate(source);
  r.entropy_production = entropy_production(model, theta, source);
  const double ds = e1.entropy - e0.entropy;
  r.entropy_residual = std::abs(ds - dt * r.entropy_production) / (1.0 + std::abs(ds));
  const double work = external_work(model, state, mech.u, mech.z, mech.eps_point, theta_tilde, dt);
  r.external_power = work / dt;
  r.energy_residual = energy_balance_residual(e1.internal_energy - e0.internal_energy, work);
  r.theta_min = theta.minCoeff();
  r.theta_max = theta.maxCoeff();
  r.phi = std::exp(-s.phi_exponent);
  r.positivity_margin = r.theta_min - pp.theta_bar * r.phi;
  r.monitor = global_estimate_monitor(model, s.u, s.z, s.theta);
  r.picard_iters = static_cast<int>(trace.size());
  r.picard_residual = trace.back();
  r.picard_trace = trace;
  return out;
}

RunResult run(const Model& model, const SimState& initial, const CouplingConfig& cfg_in, int max_steps) {
  CouplingConfig cfg = cfg_in;
  cfg.positivity = positivity_params(model, cfg_in);
  if (!(cfg.t_end > 0.0) || !(cfg.dt > 0.0) || !(cfg.picard_tol > 0.0))
    throw DomainError("t_end, dt and picard_tol must be positive");
  RunResult res;
  const PositivityParams pp = positivity_params(model, cfg);
  SimState state = initial;
  if (!(state.dt > 0.0)) state.dt = state.dt_initial = cfg.dt;
  res.trajectory.push_back(state);
  res.reports.push_back(initial_report(model, state, cfg));
  res.monitor_max = res.reports.back().monitor;

  std::vector<double> source_l2;
  const double t_tol = 1e-12 * std::max(1.0, cfg.t_end);
  int steps = 0;
  while (state.t < cfg.t_end - t_tol && (max_steps < 0 || steps < max_steps)) {
    double dt = std::min(state.dt, cfg.t_end - state.t);
    if (cfg.t_end - (state.t + dt) < t_tol) dt = cfg.t_end - state.t;
    StepOutcome out;
    try {
      out = picard_step(model, state, cfg, dt);
    } catch (const ConvergenceError& e) {
      res.failure_trace = e.trace();
      res.message = e.what();
    } catch (const NumericError& e) {
      res.failure_trace = {e.residual()};
      res.message = e.what();
    } catch (const DomainError& e) {
      res.failure_trace.clear();
      res.message = e.what();
    }
    if (out.report.dt == 0.0) {
      ++res.step_cuts;
      state.clean_steps = 0;
      state.dt = 0.5 * dt;
      if (!cfg.adapt_dt || state.dt < cfg.dt_min) {
        std::ostringstream os;
        os << "step at t = " << state.t << " failed with dt = " << dt << ": " << res.message;
        res.status = RunStatus::solver_abort;
        res.message = os.str();
        break;
      }
      continue;
    }
    res.failure_trace.clear();
    if (res.status == RunStatus::ok) res.message.clear();
    SimState next = out.state;
    next.dt = state.dt;
    next.clean_steps = state.clean_steps + 1;
    if (cfg.adapt_dt && next.clean_steps >= 5 && 2.0 * next.dt <= next.dt_initial * (1.0 + 1e-12)) {
      next.dt *= 2.0;
      next.clean_steps = 0;
    }
    state = next;
    ++steps;
    const StepReport& rep = out.report;
    res.monitor_max = std::max(res.monitor_max, rep.monitor);
    {
      // source norm at the accepted state for the a priori monitor
      const std::vector<Vec> e1 = model.strains(state.u, state.t);
      const std::vector<Vec> e0 = model.strains(state.u_prev, state.t_prev);
      source_l2.push_back(source_l2_norm(heat_rhs(model, e1, e0, state.z, state.z_prev, rep.dt), state.theta));
    }
    res.trajectory.push_back(state);
    res.reports.push_back(rep);
    if (res.status == RunStatus::ok) {
      const double scale = 1.0 + rep.monitor;
      std::ostringstream os;
      if (!(rep.positivity_margin >= -pp.tol_rel * pp.theta_bar)) {
        os << "positivity violated at step " << state.step << " (t = " << state.t << "): theta_min = " << rep.theta_min
           << ", theta_bar * phi = " << pp.theta_bar * rep.phi;
      } else if (!(rep.dissipation >= -1e-12 * scale)) {
        os << "negative dissipation at step " << state.step;
      } else if (!(rep.entropy_production >= -1e-10 * scale)) {
        os << "negative entropy production at step " << state.step;
      } else if (!std::isfinite(rep.monitor) || rep.monitor > cfg.c0) {
        os << "global estimate monitor " << rep.monitor << " exceeds bound at step " << state.step;
      }
      if (!os.str().empty()) {
        res.status = RunStatus::diagnostic_violation;
        res.message = os.str();
      }
    }
  }
  std::vector<double> times;
  std::vector<Vec> thetas;
  for (const SimState& s : res.trajectory) {
    times.push_back(s.t);
    thetas.push_back(s.theta);
  }
  res.a_priori = a_priori_monitor(model, times, thetas, source_l2, cfg.c_theta);
  return res;
}

Vec point_stress(const Model& model, const SimState& s) {
  if (!model.disc().point_mode()) throw DomainError("point stress needs the point mode");
  const MaterialModel& mat = model.material();
  Vec sigma = mat.elastic_stress(s.eps_point, s.z.head(model.z_dim()), s.theta(0));
  const double dt = s.t - s.t_prev;
  if (s.step > 0 && dt > 0.0) sigma += mat.tensors().viscosity_a * (s.eps_point - s.eps_point_prev) / dt;
  return sigma;
}

IndicatorResult global_existence_indicator(double beta, double c_hat, double t_end, double q,
                                           std::optional<double> c_h2, double c0) {
  if (!(c_hat > 0.0)) throw DomainError("C_hat must be positive");
  if (!(t_end > 0.0)) throw DomainError("T_end must be positive");
  if (!(q > 8.0)) throw DomainError("q must exceed 8");
  if (!(beta >= 0.0)) throw DomainError("beta must be nonnegative");
  IndicatorResult r;
  r.threshold = 1.0 / (2.0 * c_hat * std::pow(t_end, 1.0 / q));
  r.flag = 0.0 < beta && beta < r.threshold;
  r.decoupled = beta == 0.0;
  std::ostringstream os;
  if (r.decoupled) {
    os << "decoupled/global by construction";
  } else {
    os << "threshold " << r.threshold << (r.flag ? ": beta below threshold" : ": beta not below threshold");
  }
  if (c_h2) {
    r.has_alpha_branch = true;
    const double k = beta * beta + (*c_h2) * (*c_h2);
    auto gamma = [&](double rr) {
      const double x = k * rr * rr;
      return c_hat * std::pow(x + 1.0, 4) * std::exp(4.0 * c0 * (x + 1.0) * t_end) - rr;
    };
    double best_r = 0.0, best = std::numeric_limits<double>::infinity();
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
      const double rr = std::pow(10.0, -12.0 + 24.0 * i / n);
      const double g = gamma(rr);
      if (g < best) {
        best = g;
        best_r = rr;
      }
    }
    // golden-section refinement in log R around the best grid point
    double lo = std::log(best_r) - 24.0 * std::log(10.0) / n, hi = std::log(best_r) + 24.0 * std::log(10.0) / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
      const double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
      if (gamma(std::exp(a)) < gamma(std::exp(b))) hi = b; else lo = a;
    }
    const double rr = std::exp(0.5 * (lo + hi));
    if (gamma(rr) < best) {
      best = gamma(rr);
      best_r = rr;
    }
    r.r_best = best_r;
    r.gamma_min = best;
    r.alpha_flag = k > 0.0 && best < 0.0;
    os << "; alpha > 0 branch: min gamma = " << best << " at R = " << best_r
       << (r.alpha_flag ? " (self-map radius found)" : " (no self-map radius)");
  }
  r.message = os.str();
  return r;
}

}  // namespace tgsm
