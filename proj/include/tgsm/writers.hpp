#pragma once

// Output formats: time-series CSV, legacy VTK ASCII snapshots, JSON run summary,
// and state checkpoints.

#include <string>
#include <vector>

#include "tgsm/coupling.hpp"

namespace tgsm {

/// Fixed CSV column order.
const std::vector<std::string>& timeseries_columns();

/// Header plus one row per report. Numbers use the shortest round-trip form
/// with '.' as decimal point independent of the locale.
std::string format_timeseries(const std::vector<StepReport>& reports);
void write_timeseries(const std::vector<StepReport>& reports, const std::string& path);
std::vector<StepReport> parse_timeseries(const std::string& text);
std::vector<StepReport> read_timeseries(const std::string& path);

/// Legacy VTK unstructured grid with point data u, theta, z_0 .. z_{m-1}.
/// Values of z stored at Gauss points are averaged to the nodes.
std::string format_fields(const Model& model, const SimState& state);
void write_fields(const Model& model, const SimState& state, const std::string& path);

struct SummaryInfo {
  std::string scenario;
  std::string status;
  std::string message;
  int steps = 0;
  double t_final = 0.0;
  double monitor_max = 0.0;
  double max_energy_residual = 0.0;
  double min_positivity_margin = 0.0;
  double korn = 0.0;
  APrioriReport a_priori;
  int step_cuts = 0;
};
std::string format_summary(const SummaryInfo& info);
void write_summary(const SummaryInfo& info, const std::string& path);

/// Complete SimState as JSON; doubles are written in round-trip form.
std::string format_checkpoint(const SimState& state);
SimState parse_checkpoint(const std::string& text);
void save_checkpoint(const SimState& state, const std::string& path);
SimState load_checkpoint(const std::string& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace tgsm
