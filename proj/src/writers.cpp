#include "tgsm/writers.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "tgsm/errors.hpp"

namespace tgsm {

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw std::runtime_error("invalid number '" + s + "' in CSV");
  return v;
}

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec json_vec(const nlohmann::json& j) {
  const std::vector<double> d = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(d.data(), static_cast<Eigen::Index>(d.size()));
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

const std::vector<std::string>& timeseries_columns() {
  static const std::vector<std::string> cols = {
      "t",       "dt",           "free_energy",       "entropy",           "internal_energy", "dissipation",
      "entropy_production",      "energy_residual",   "entropy_residual",  "external_power",  "theta_min",
      "theta_max", "phi",        "positivity_margin", "monitor",           "picard_iters",    "picard_residual"};
  return cols;
}

std::string format_timeseries(const std::vector<StepReport>& reports) {
  std::string out;
  const auto& cols = timeseries_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (const StepReport& r : reports) {
    const double v[] = {r.t,           r.dt,        r.free_energy, r.entropy,           r.internal_energy,
                        r.dissipation, r.entropy_production, r.energy_residual, r.entropy_residual,
                        r.external_power, r.theta_min, r.theta_max, r.phi, r.positivity_margin, r.monitor};
    for (std::size_t i = 0; i < std::size(v); ++i) out += (i ? "," : "") + format_double(v[i]);
    out += "," + std::to_string(r.picard_iters) + "," + format_double(r.picard_residual) + '\n';
  }
  return out;
}

void write_timeseries(const std::vector<StepReport>& reports, const std::string& path) {
  write_file(path, format_timeseries(reports));
}

std::vector<StepReport> parse_timeseries(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  std::string expect;
  const auto& cols = timeseries_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) expect += (i ? "," : "") + cols[i];
  if (line != expect) throw std::runtime_error("unexpected CSV header");
  std::vector<StepReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != cols.size()) throw std::runtime_error("CSV row has wrong number of fields");
    StepReport r;
    double* slots[] = {&r.t,           &r.dt,        &r.free_energy, &r.entropy,           &r.internal_energy,
                       &r.dissipation, &r.entropy_production, &r.energy_residual, &r.entropy_residual,
                       &r.external_power, &r.theta_min, &r.theta_max, &r.phi, &r.positivity_margin, &r.monitor};
    for (std::size_t i = 0; i < std::size(slots); ++i) *slots[i] = parse_double(f[i]);
    r.picard_iters = static_cast<int>(parse_double(f[15]));
    r.picard_residual = parse_double(f[16]);
    out.push_back(r);
  }
  return out;
}

std::vector<StepReport> read_timeseries(const std::string& path) { return parse_timeseries(read_file(path)); }

std::string format_fields(const Model& model, const SimState& state) {
  const Discretization& disc = model.disc();
  const Mesh& mesh = disc.mesh();
  const int nn = mesh.num_nodes();
  const int d = mesh.dim;
  const int m = model.z_dim();
  std::string o;
  o += "# vtk DataFile Version 3.0\n";
  o += "thermo-visco-plastic state t=" + format_double(state.t) + "\n";
  o += "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  o += "POINTS " + std::to_string(nn) + " double\n";
  for (const Vec& x : mesh.nodes) {
    for (int k = 0; k < 3; ++k) o += (k ? " " : "") + format_double(k < x.size() ? x(k) : 0.0);
    o += '\n';
  }
  const int ncell = d == 0 ? 1 : mesh.num_elements();
  const int nv = d + 1;
  o += "CELLS " + std::to_string(ncell) + " " + std::to_string(ncell * (nv + 1)) + "\n";
  if (d == 0) {
    o += "1 0\n";
  } else {
    for (const auto& e : mesh.elements) {
      o += std::to_string(e.size());
      for (int a : e) o += " " + std::to_string(a);
      o += '\n';
    }
  }
  o += "CELL_TYPES " + std::to_string(ncell) + "\n";
  const char* type = d == 0 ? "1\n" : (d == 1 ? "3\n" : "5\n");
  for (int c = 0; c < ncell; ++c) o += type;

  o += "POINT_DATA " + std::to_string(nn) + "\n";
  o += "VECTORS u double\n";
  for (int i = 0; i < nn; ++i) {
    for (int k = 0; k < 3; ++k) o += (k ? " " : "") + format_double(k < d ? state.u(i * d + k) : 0.0);
    o += '\n';
  }
  o += "SCALARS theta double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < nn; ++i) o += format_double(state.theta(i)) + '\n';

  // z averaged to nodes with the interpolation weights of the z points
  Mat zn = Mat::Zero(nn, m);
  Vec wsum = Vec::Zero(nn);
  for (int p = 0; p < disc.num_z_points(); ++p) {
    const ZPoint& zp = disc.z_points()[static_cast<std::size_t>(p)];
    for (const auto& [i, phi] : zp.theta) {
      const double w = phi * zp.weight;
      zn.row(i) += w * state.z.segment(p * m, m).transpose();
      wsum(i) += w;
    }
  }
  for (int k = 0; k < m; ++k) {
    o += "SCALARS z_" + std::to_string(k) + " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < nn; ++i) o += format_double(wsum(i) > 0.0 ? zn(i, k) / wsum(i) : 0.0) + '\n';
  }
  return o;
}

void write_fields(const Model& model, const SimState& state, const std::string& path) {
  write_file(path, format_fields(model, state));
}

std::string format_summary(const SummaryInfo& s) {
  nlohmann::ordered_json j;
  j["scenario"] = s.scenario;
  j["status"] = s.status;
  j["message"] = s.message;
  j["steps"] = s.steps;
  j["t_final"] = s.t_final;
  j["step_cuts"] = s.step_cuts;
  j["monitor_max"] = s.monitor_max;
  j["max_energy_residual"] = s.max_energy_residual;
  j["min_positivity_margin"] = s.min_positivity_margin;
  j["korn_constant"] = s.korn;
  j["a_priori"] = {{"max_theta_h1", s.a_priori.max_theta_h1}, {"theta_dot_l2l2", s.a_priori.theta_dot_l2l2},
                   {"lhs", s.a_priori.lhs},                    {"bound", s.a_priori.bound},
                   {"ratio", s.a_priori.ratio}};
  return j.dump(2) + "\n";
}

void write_summary(const SummaryInfo& info, const std::string& path) { write_file(path, format_summary(info)); }

std::string format_checkpoint(const SimState& s) {
  nlohmann::ordered_json j;
  j["step"] = s.step;
  j["t"] = s.t;
  j["u"] = vec_json(s.u);
  j["z"] = vec_json(s.z);
  j["theta"] = vec_json(s.theta);
  j["eps_point"] = vec_json(s.eps_point);
  j["t_prev"] = s.t_prev;
  j["u_prev"] = vec_json(s.u_prev);
  j["z_prev"] = vec_json(s.z_prev);
  j["theta_prev"] = vec_json(s.theta_prev);
  j["eps_point_prev"] = vec_json(s.eps_point_prev);
  j["dt"] = s.dt;
  j["dt_initial"] = s.dt_initial;
  j["clean_steps"] = s.clean_steps;
  j["phi_exponent"] = s.phi_exponent;
  j["phi_rate"] = s.phi_rate;
  return j.dump(1) + "\n";
}

SimState parse_checkpoint(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SimState s;
  s.step = j.at("step").get<int>();
  s.t = j.at("t").get<double>();
  s.u = json_vec(j.at("u"));
  s.z = json_vec(j.at("z"));
  s.theta = json_vec(j.at("theta"));
  s.eps_point = json_vec(j.at("eps_point"));
  s.t_prev = j.at("t_prev").get<double>();
  s.u_prev = json_vec(j.at("u_prev"));
  s.z_prev = json_vec(j.at("z_prev"));
  s.theta_prev = json_vec(j.at("theta_prev"));
  s.eps_point_prev = json_vec(j.at("eps_point_prev"));
  s.dt = j.at("dt").get<double>();
  s.dt_initial = j.at("dt_initial").get<double>();
  s.clean_steps = j.at("clean_steps").get<int>();
  s.phi_exponent = j.at("phi_exponent").get<double>();
  s.phi_rate = j.at("phi_rate").get<double>();
  return s;
}

void save_checkpoint(const SimState& state, const std::string& path) { write_file(path, format_checkpoint(state)); }

SimState load_checkpoint(const std::string& path) { return parse_checkpoint(read_file(path)); }

}  // namespace tgsm
