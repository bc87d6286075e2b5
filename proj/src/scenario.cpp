#include "tgsm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "tgsm/config.hpp"
#include "tgsm/errors.hpp"
#include "tgsm/expression.hpp"

#ifndef TGSM_SCENARIO_DIR
#define TGSM_SCENARIO_DIR "scenarios"
#endif

namespace tgsm {

namespace fs = std::filesystem;
using config::Document;
using config::Value;

namespace {

std::string scenario_dir() {
  if (const char* env = std::getenv("TGSM_SCENARIO_DIR"); env && *env) return env;
  return TGSM_SCENARIO_DIR;
}

[[noreturn]] void bad_value(const Value& v, const std::string& msg) { throw ParseError(msg, v.line, v.column); }

Mat matrix_from(const Value& v, int n, const std::string& what) {
  if (v.is_number()) return v.number() * Mat::Identity(n, n);
  const auto& rows = v.array();
  if (static_cast<int>(rows.size()) != n) bad_value(v, what + " must be a number or a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    const std::vector<double> r = rows[static_cast<std::size_t>(i)].numbers();
    if (static_cast<int>(r.size()) != n) bad_value(rows[static_cast<std::size_t>(i)], what + " row has wrong length");
    for (int j = 0; j < n; ++j) m(i, j) = r[static_cast<std::size_t>(j)];
  }
  return m;
}

Mat rect_matrix_from(const Value& v, const std::string& what) {
  const auto& rows = v.array();
  if (rows.empty()) bad_value(v, what + " must be a non-empty matrix");
  const std::size_t cols = rows.front().numbers().size();
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::vector<double> r = rows[i].numbers();
    if (r.size() != cols) bad_value(rows[i], what + " rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[j];
  }
  return m;
}

Vec vector_from(const Value& v) {
  const std::vector<double> d = v.numbers();
  return Eigen::Map<const Vec>(d.data(), static_cast<Eigen::Index>(d.size()));
}

Vec vector_of_size(const Value& v, int n, const std::string& what) {
  if (v.is_number()) return Vec::Constant(n, v.number());
  Vec out = vector_from(v);
  if (out.size() != n) bad_value(v, what + " must have " + std::to_string(n) + " entries");
  return out;
}

Expression expression_from(const Value& v) {
  if (v.is_number()) return Expression::constant(v.number());
  try {
    return Expression::parse(v.string());
  } catch (const ParseError& e) {
    throw ParseError(e.what(), v.line, v.column + e.column());
  }
}

ScalarField field_from(const Value& v) {
  const Expression e = expression_from(v);
  return [e](const Vec& x) { return e(x.size() > 0 ? x(0) : 0.0, x.size() > 1 ? x(1) : 0.0, 0.0); };
}

double coord(const Vec& x, int i) { return x.size() > i ? x(i) : 0.0; }

struct Builder {
  const Document& doc;
  std::vector<std::string> violations;

  void violate(const std::string& tag, const std::string& msg) { violations.push_back(tag + ": " + msg); }
};

GeometrySpec read_geometry(const Document& doc) {
  GeometrySpec g;
  g.dim = static_cast<int>(doc.number("mesh.dim", 1));
  g.tensor_dim = g.dim == 0 ? static_cast<int>(doc.number("mesh.tensor_dim", 1)) : g.dim;
  if (g.dim > 0) {
    const Value& len = doc.at("mesh.length");
    const Value& cells = doc.at("mesh.cells");
    const std::vector<double> l = len.numbers(), c = cells.numbers();
    if (static_cast<int>(l.size()) != g.dim) bad_value(len, "mesh.length must have one entry per dimension");
    if (static_cast<int>(c.size()) != g.dim) bad_value(cells, "mesh.cells must have one entry per dimension");
    for (int i = 0; i < g.dim; ++i) {
      g.length[static_cast<std::size_t>(i)] = l[static_cast<std::size_t>(i)];
      if (c[static_cast<std::size_t>(i)] != std::floor(c[static_cast<std::size_t>(i)])) bad_value(cells, "element counts must be integers");
      g.cells[static_cast<std::size_t>(i)] = static_cast<int>(c[static_cast<std::size_t>(i)]);
      if (g.cells[static_cast<std::size_t>(i)] <= 0) bad_value(cells, "element counts must be positive");
      if (!(g.length[static_cast<std::size_t>(i)] > 0.0)) bad_value(len, "extents must be positive");
    }
  }
  return g;
}

std::shared_ptr<const MaterialModel> read_material(Builder& b, const GeometrySpec& g) {
  const Document& doc = b.doc;
  const int td = g.tensor_dim;
  const int n = tensor::sym_size(td);

  TensorParams tp;
  tp.tensor_dim = td;
  if (doc.has("material.lame")) {
    const Value& v = doc.at("material.lame");
    const std::vector<double> lm = v.numbers();
    if (lm.size() != 2) bad_value(v, "material.lame must be [lambda, mu]");
    tp.elasticity = tensor::isotropic(td, lm[0], lm[1]);
  } else {
    tp.elasticity = matrix_from(doc.at("material.elasticity"), n, "material.elasticity");
  }
  if (doc.has("material.elasticity_scale")) tp.elasticity_scale = field_from(doc.at("material.elasticity_scale"));
  tp.viscosity_a = matrix_from(doc.at("material.viscosity_a"), n, "material.viscosity_a");
  tp.alpha = doc.number("material.alpha", 0.0);
  tp.beta = doc.number("material.beta", 0.0);

  // hardening kind decides the default inelastic map
  const std::string hkind = doc.string("material.hardening.kind", "melan_prager");
  std::string qkind = doc.string("material.inelastic.kind", hkind == "mixture" ? "mixture" : "identity");
  if (qkind == "deviatoric" && td == 1) qkind = "identity";

  MixtureParams mix;
  if (hkind == "mixture") {
    const Value& ps = doc.at("material.hardening.phase_strains");
    for (const Value& e : ps.array()) {
      Vec s = vector_from(e);
      if (s.size() != n) bad_value(e, "phase strain must have " + std::to_string(n) + " Mandel entries");
      mix.phase_strains.push_back(s);
    }
    if (mix.phase_strains.size() < 2) bad_value(ps, "mixture needs at least two phase strains");
  }

  if (qkind == "identity") {
    tp.q_lin = Mat::Identity(n, n);
  } else if (qkind == "deviatoric") {
    tp.q_lin = tensor::deviatoric_basis(td);
  } else if (qkind == "matrix") {
    tp.q_lin = rect_matrix_from(doc.at("material.inelastic.q_lin"), "material.inelastic.q_lin");
  } else if (qkind == "mixture") {
    if (mix.phase_strains.empty()) bad_value(doc.at("material.inelastic.kind"), "inelastic kind mixture needs mixture hardening");
    auto [q, aff] = mixture_inelastic_map(mix.phase_strains);
    tp.q_lin = q;
    tp.q_aff = aff;
  } else {
    bad_value(doc.at("material.inelastic.kind"), "unknown inelastic kind '" + qkind + "'");
  }
  if (tp.q_lin.rows() != n) {
    b.violate("(A-5)", "Q_lin must have " + std::to_string(n) + " rows");
    return nullptr;
  }
  if (doc.has("material.inelastic.q_aff")) tp.q_aff = vector_of_size(doc.at("material.inelastic.q_aff"), n, "q_aff");
  if (tp.q_aff.size() == 0) tp.q_aff = Vec::Zero(n);
  const int m = static_cast<int>(tp.q_lin.cols());
  if (m == 0) {
    b.violate("(A-5)", "the internal variable space is empty");
    return nullptr;
  }
  tp.viscosity_b = matrix_from(doc.at("material.viscosity_b"), m, "material.viscosity_b");

  auto num = [&](const std::string& k, double d) { return doc.number("material.hardening." + k, d); };
  auto mat_or = [&](const std::string& k, int size) {
    const std::string key = "material.hardening." + k;
    return doc.has(key) ? matrix_from(doc.at(key), size, key) : Mat::Zero(size, size);
  };
  auto vec_or = [&](const std::string& k, int size) {
    const std::string key = "material.hardening." + k;
    return doc.has(key) ? vector_of_size(doc.at(key), size, key) : Vec(Vec::Zero(size));
  };
  std::optional<HardeningModel> hard;
  try {
    if (hkind == "melan_prager") {
      hard = HardeningModel::melan_prager(matrix_from(doc.at("material.hardening.l"), m, "material.hardening.l"));
    } else if (hkind == "prandtl_reuss") {
      hard = HardeningModel::prandtl_reuss(m);
    } else if (hkind == "souza_auricchio") {
      SouzaAuricchioParams p;
      p.c1 = num("c1", 0.0);
      p.c2 = num("c2", 0.0);
      p.c3 = num("c3", 1.0);
      p.delta = num("delta", 1e-3);
      p.c1_theta = num("c1_theta", 0.0);
      p.c2_theta = num("c2_theta", 0.0);
      hard = HardeningModel::souza_auricchio(m, p);
    } else if (hkind == "mixture") {
      mix.w1 = mat_or("w1", m);
      mix.a1 = vec_or("a1", m);
      mix.w2 = mat_or("w2", m);
      mix.a2 = vec_or("a2", m);
      mix.delta = num("delta", 1e-3);
      hard = HardeningModel::mixture(mix);
    } else if (hkind == "custom") {
      hard = HardeningModel::custom(mat_or("l1", m), vec_or("a1", m), mat_or("l2", m), vec_or("a2", m));
    } else {
      bad_value(doc.at("material.hardening.kind"), "unknown hardening kind '" + hkind + "'");
    }
  } catch (const DomainError& e) {
    b.violate("(A-2)", e.what());
    return nullptr;
  } catch (const ShapeError& e) {
    b.violate("(A-2)", e.what());
    return nullptr;
  }

  const std::string dkind = doc.string("material.dissipation.kind", "norm");
  std::optional<DissipationPotential> psi;
  if (dkind == "norm") {
    psi = DissipationPotential::norm_scaled(doc.number("material.dissipation.yield", 0.0));
  } else if (dkind == "norm_deviatoric") {
    psi = DissipationPotential::norm_scaled_projected(doc.number("material.dissipation.yield", 0.0),
                                                      deviatoric_projector(tp.q_lin, td));
  } else if (dkind == "weighted_l1") {
    const Value& w = doc.at("material.dissipation.weights");
    psi = DissipationPotential::weighted_l1(vector_of_size(w, m, "material.dissipation.weights"));
  } else if (dkind == "zero") {
    psi = DissipationPotential::zero();
  } else {
    bad_value(doc.at("material.dissipation.kind"), "unknown dissipation kind '" + dkind + "'");
  }

  ThermalParams th;
  if (doc.has("material.thermal.heat_capacity")) th.heat_capacity = field_from(doc.at("material.thermal.heat_capacity"));
  if (doc.has("material.thermal.conductivity")) th.conductivity = field_from(doc.at("material.thermal.conductivity"));
  if (g.dim > 0) {
    th.conductivity_matrix = doc.has("material.thermal.conductivity_matrix")
                                 ? matrix_from(doc.at("material.thermal.conductivity_matrix"), g.dim, "conductivity_matrix")
                                 : Mat(Mat::Identity(g.dim, g.dim));
  }
  th.theta_bar = doc.number("material.thermal.theta_bar", 1.0);

  MaterialBounds bounds;
  auto bound = [&](const char* k, std::optional<double>& slot) {
    const std::string key = std::string("material.bounds.") + k;
    if (doc.has(key)) slot = doc.number(key, 0.0);
  };
  bound("c_e", bounds.c_e);
  bound("c_a", bounds.c_a);
  bound("big_c_a", bounds.big_c_a);
  bound("c_b", bounds.c_b);
  bound("big_c_b", bounds.big_c_b);
  bound("c_c", bounds.c_c);
  bound("big_c_c", bounds.big_c_c);
  bound("c_kappa", bounds.c_kappa);
  bound("big_c_kappa", bounds.big_c_kappa);
  bound("c_h1", bounds.c_h1);
  bound("c_h1_tilde", bounds.c_h1_tilde);
  bound("big_c_h1_zz", bounds.big_c_h1_zz);
  bound("big_c_h2_zz", bounds.big_c_h2_zz);
  bound("big_c_h2_z", bounds.big_c_h2_z);

  return std::make_shared<const MaterialModel>(std::move(tp), std::move(*hard), std::move(th), std::move(*psi), bounds);
}

Loading read_loading(Builder& b, const Mesh& mesh, int nsym) {
  const Document& doc = b.doc;
  Loading ld;
  const std::string kind = doc.string("loading.kind", "none");
  const int d = mesh.dim;
  const int ndof = d * mesh.num_nodes();
  if (kind == "none") return ld;
  if (kind == "expression") {
    if (d == 0) bad_value(doc.at("loading.kind"), "point mode is driven by a strain path");
    const Value& f = doc.at("loading.force");
    std::vector<Expression> ex;
    if (f.is_array()) {
      for (const Value& e : f.array()) ex.push_back(expression_from(e));
    } else {
      ex.push_back(expression_from(f));
    }
    if (static_cast<int>(ex.size()) != d) bad_value(f, "loading.force needs one expression per component");
    std::vector<Vec> nodes = mesh.nodes;
    ld.nodal_force = [ex, nodes, d, ndof](double t) {
      Vec out(ndof);
      for (std::size_t i = 0; i < nodes.size(); ++i)
        for (int k = 0; k < d; ++k)
          out(static_cast<Eigen::Index>(i) * d + k) = ex[static_cast<std::size_t>(k)](coord(nodes[i], 0), coord(nodes[i], 1), t);
      return out;
    };
  } else if (kind == "table") {
    const Value& tv = doc.at("loading.times");
    const Value& vv = doc.at("loading.values");
    const std::vector<double> times = tv.numbers();
    std::vector<Vec> values;
    for (const Value& row : vv.array()) {
      Vec r = vector_from(row);
      if (r.size() != ndof) bad_value(row, "each loading.values row needs " + std::to_string(ndof) + " nodal entries");
      values.push_back(r);
    }
    if (times.size() != values.size() || times.empty()) bad_value(vv, "loading.values needs one row per time");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1])) bad_value(tv, "loading.times must increase");
    ld.nodal_force = [times, values](double t) {
      if (t <= times.front()) return values.front();
      if (t >= times.back()) return values.back();
      const auto it = std::upper_bound(times.begin(), times.end(), t);
      const std::size_t k = static_cast<std::size_t>(it - times.begin());
      const double s = (t - times[k - 1]) / (times[k] - times[k - 1]);
      return Vec((1.0 - s) * values[k - 1] + s * values[k]);
    };
  } else if (kind == "strain_expression" || kind == "strain_triangle") {
    if (d != 0) bad_value(doc.at("loading.kind"), "strain paths drive the point mode only");
    if (kind == "strain_expression") {
      const Value& sv = doc.at("loading.strain");
      std::vector<Expression> ex;
      if (sv.is_array()) {
        for (const Value& e : sv.array()) ex.push_back(expression_from(e));
      } else {
        ex.push_back(expression_from(sv));
      }
      if (static_cast<int>(ex.size()) > nsym) bad_value(sv, "too many strain components");
      ld.strain_path = [ex, nsym](double t) {
        Vec e = Vec::Zero(nsym);
        for (std::size_t k = 0; k < ex.size(); ++k) e(static_cast<Eigen::Index>(k)) = ex[k](0.0, 0.0, t);
        return e;
      };
    } else {
      const double amp = doc.number("loading.amplitude", 0.01);
      const double period = doc.number("loading.period", 1.0);
      const int comp = static_cast<int>(doc.number("loading.component", 0));
      if (!(period > 0.0)) bad_value(doc.at("loading.period"), "period must be positive");
      if (comp < 0 || comp >= nsym) bad_value(doc.at("loading.component"), "strain component out of range");
      ld.strain_path = [amp, period, comp, nsym](double t) {
        Vec e = Vec::Zero(nsym);
        double s = std::fmod(t / period, 1.0);
        if (s < 0) s += 1.0;
        // 0 -> amp at s = 1/4, -> -amp at 3/4, -> 0 at 1
        double v = s < 0.25 ? 4.0 * s : (s < 0.75 ? 2.0 - 4.0 * s : 4.0 * s - 4.0);
        e(comp) = amp * v;
        return e;
      };
    }
  } else {
    bad_value(doc.at("loading.kind"), "unknown loading kind '" + kind + "'");
  }
  return ld;
}

Vec nodal_field(const Value& v, const Mesh& mesh, int comps, const std::string& what) {
  const int nn = mesh.num_nodes();
  Vec out(static_cast<Eigen::Index>(nn) * comps);
  if (v.is_number()) return Vec::Constant(out.size(), v.number());
  std::vector<Expression> ex;
  if (v.is_string()) {
    ex.push_back(expression_from(v));
  } else if (!v.array().empty() && v.array().front().is_string()) {
    for (const Value& e : v.array()) ex.push_back(expression_from(e));
  }
  if (!ex.empty()) {
    if (static_cast<int>(ex.size()) != comps) bad_value(v, what + " needs " + std::to_string(comps) + " expressions");
    for (int i = 0; i < nn; ++i)
      for (int k = 0; k < comps; ++k)
        out(static_cast<Eigen::Index>(i) * comps + k) =
            ex[static_cast<std::size_t>(k)](coord(mesh.nodes[static_cast<std::size_t>(i)], 0),
                                           coord(mesh.nodes[static_cast<std::size_t>(i)], 1), 0.0);
    return out;
  }
  Vec arr = vector_from(v);
  if (arr.size() != out.size()) bad_value(v, what + " array must have " + std::to_string(out.size()) + " entries");
  return arr;
}

CouplingConfig read_coupling(const Document& doc) {
  CouplingConfig c;
  c.t_end = doc.number("coupling.t_end", 1.0);
  c.dt = doc.number("coupling.dt", 1e-2);
  c.dt_min = doc.number("coupling.dt_min", c.dt * 1e-4);
  c.adapt_dt = doc.boolean("coupling.adapt_dt", true);
  c.picard_tol = doc.number("coupling.picard_tol", 1e-8);
  c.picard_max = static_cast<int>(doc.number("coupling.picard_max", 50));
  c.relaxation = doc.number("coupling.relaxation", 1.0);
  const std::string mode = doc.string("coupling.mode", "picard_to_convergence");
  if (mode == "staggered_once") {
    c.mode = CouplingMode::staggered_once;
  } else if (mode == "picard_to_convergence") {
    c.mode = CouplingMode::picard_to_convergence;
  } else {
    bad_value(doc.at("coupling.mode"), "mode must be staggered_once or picard_to_convergence");
  }
  c.mech.tol_uz = doc.number("coupling.mech_tol", 1e-9);
  c.mech.max_iter = static_cast<int>(doc.number("coupling.mech_max_iter", 200));
  const std::string lin = doc.string("coupling.linearization", "frozen_z");
  if (lin == "frozen_z") {
    c.mech.linearization = Linearization::frozen_z;
  } else if (lin == "newton_local") {
    c.mech.linearization = Linearization::newton_local;
  } else {
    bad_value(doc.at("coupling.linearization"), "linearization must be frozen_z or newton_local");
  }
  const std::string treat = doc.string("coupling.heat_treatment", "semi_implicit");
  if (treat == "semi_implicit") {
    c.heat.treatment = CouplingTreatment::semi_implicit;
  } else if (treat == "explicit") {
    c.heat.treatment = CouplingTreatment::explicit_;
  } else {
    bad_value(doc.at("coupling.heat_treatment"), "heat_treatment must be semi_implicit or explicit");
  }
  const std::string mass = doc.string("coupling.heat_mass", "lumped");
  if (mass == "lumped") {
    c.heat.mass = MassKind::lumped;
  } else if (mass == "consistent") {
    c.heat.mass = MassKind::consistent;
  } else {
    bad_value(doc.at("coupling.heat_mass"), "heat_mass must be lumped or consistent");
  }
  c.c_theta = doc.number("diagnostics.c_theta", 1.0);
  c.c0 = doc.number("diagnostics.c0", std::numeric_limits<double>::infinity());
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0)) bad_value(doc.at(key), std::string(key) + " must be positive");
  };
  if (doc.has("coupling.picard_tol")) positive("coupling.picard_tol", c.picard_tol);
  if (doc.has("coupling.dt_min")) positive("coupling.dt_min", c.dt_min);
  if (doc.has("coupling.mech_tol")) positive("coupling.mech_tol", c.mech.tol_uz);
  if (doc.has("coupling.picard_max") && c.picard_max < 1) bad_value(doc.at("coupling.picard_max"), "picard_max must be >= 1");
  if (doc.has("coupling.relaxation") && !(c.relaxation > 0.0 && c.relaxation <= 1.0))
    bad_value(doc.at("coupling.relaxation"), "relaxation must lie in (0, 1]");
  return c;
}

ScenarioConfig build(const Document& doc, const std::string& name, const std::string& path) {
  Builder b{doc, {}};
  ScenarioConfig sc;
  sc.name = doc.string("name", name);
  sc.path = path;
  sc.seed = static_cast<std::uint64_t>(doc.number("seed", 1));
  sc.geometry = read_geometry(doc);
  sc.quadrature_order = static_cast<int>(doc.number("mesh.quadrature_order", 2));
  if (sc.quadrature_order < 1 || sc.quadrature_order > 2) bad_value(doc.at("mesh.quadrature_order"), "quadrature order must be 1 or 2");
  Mesh mesh = build_mesh(sc.geometry);
  mesh.quadrature_order = sc.quadrature_order;

  sc.coupling = read_coupling(doc);
  if (!(sc.coupling.t_end > 0.0)) b.violate("(A-6)", "final time T must be positive");
  if (!(sc.coupling.dt > 0.0)) b.violate("(A-6)", "time step must be positive");

  sc.material = read_material(b, sc.geometry);
  Loading loading = read_loading(b, mesh, tensor::sym_size(sc.geometry.tensor_dim));

  // load finiteness on the time grid (f in H1(0,T;L2) is checked as finite nodal data)
  if (loading.nodal_force && sc.coupling.t_end > 0.0 && sc.coupling.dt > 0.0) {
    const int n = static_cast<int>(std::min(10000.0, std::ceil(sc.coupling.t_end / sc.coupling.dt)));
    for (int k = 0; k <= n; ++k) {
      const double t = sc.coupling.t_end * k / std::max(n, 1);
      if (!loading.nodal_force(t).allFinite()) {
        std::ostringstream os;
        os << "loading f is not finite at t = " << t;
        b.violate("(A-6)", os.str());
        break;
      }
    }
  }
  if (loading.strain_path && sc.coupling.t_end > 0.0 && sc.coupling.dt > 0.0) {
    const int n = static_cast<int>(std::min(10000.0, std::ceil(sc.coupling.t_end / sc.coupling.dt)));
    for (int k = 0; k <= n; ++k)
      if (!loading.strain_path(sc.coupling.t_end * k / std::max(n, 1)).allFinite()) {
        b.violate("(A-6)", "prescribed strain path is not finite");
        break;
      }
  }

  if (!sc.material) throw ValidationError(b.violations);

  auto model = std::make_shared<Model>(mesh, sc.material, std::move(loading));
  for (const std::string& v : sc.material->validate(model->disc().sample_points(), sc.seed)) b.violations.push_back(v);

  const int m = model->z_dim();
  Vec u0 = doc.has("initial.u") ? nodal_field(doc.at("initial.u"), mesh, mesh.dim, "initial.u") : Vec();
  Vec z0;
  if (doc.has("initial.z")) {
    const Value& zv = doc.at("initial.z");
    if (zv.is_number()) {
      z0 = Vec::Constant(static_cast<Eigen::Index>(model->disc().num_z_points()) * m, zv.number());
    } else {
      z0 = vector_from(zv);
      if (z0.size() != m && z0.size() != static_cast<Eigen::Index>(model->disc().num_z_points()) * m)
        bad_value(zv, "initial.z must have dim Z entries or one block per z point");
    }
  }
  const Vec theta0 = nodal_field(doc.at("initial.theta"), mesh, 1, "initial.theta");
  const double theta_bar = sc.material->thermal().theta_bar;
  if (!theta0.allFinite()) {
    b.violate("(A-8)", "initial temperature is not finite");
  } else if (theta0.minCoeff() < theta_bar) {
    std::ostringstream os;
    os << "initial temperature " << theta0.minCoeff() << " below theta_bar = " << theta_bar;
    b.violate("(A-8)", os.str());
  }
  if (u0.size() && !u0.allFinite()) b.violate("(A-6)", "initial displacement is not finite");

  sc.output.timeseries = doc.boolean("output.timeseries", true);
  sc.output.fields = doc.boolean("output.fields", true);
  sc.output.field_every = static_cast<int>(doc.number("output.field_every", 0));
  sc.output.summary = doc.boolean("output.summary", true);

  for (const std::string& k : doc.unused_keys()) sc.warnings.push_back("unknown key '" + k + "' ignored");
  if (!b.violations.empty()) throw ValidationError(b.violations);

  sc.model = model;
  sc.initial = model->initial_state(u0, z0, theta0, sc.coupling.dt);
  return sc;
}

}  // namespace

std::string resolve_scenario_path(const std::string& name_or_path) {
  if (fs::exists(name_or_path) && fs::is_regular_file(name_or_path)) return name_or_path;
  const fs::path p = fs::path(scenario_dir()) / (name_or_path + ".cfg");
  if (fs::exists(p)) return p.string();
  const fs::path q = fs::path(TGSM_SCENARIO_DIR) / (name_or_path + ".cfg");
  if (fs::exists(q)) return q.string();
  throw std::runtime_error("scenario '" + name_or_path + "' not found (looked in " + scenario_dir() + ")");
}

std::vector<std::string> list_scenarios() {
  std::vector<std::string> out;
  const fs::path dir(scenario_dir());
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".cfg") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
  const std::string path = resolve_scenario_path(name_or_path);
  const Document doc = config::parse_file(path);
  return build(doc, fs::path(path).stem().string(), path);
}

ScenarioConfig load_scenario_text(const std::string& text, const std::string& name) {
  return build(config::parse(text), name, "");
}

void reset_initial_step(ScenarioConfig& sc) {
  sc.initial.dt = sc.initial.dt_initial = sc.coupling.dt;
  sc.initial.clean_steps = 0;
}

}  // namespace tgsm
