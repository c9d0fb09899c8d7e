#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tcoord/analysis.hpp"
#include "tcoord/scenario.hpp"
#include "tcoord/sim.hpp"

namespace tcoord {

/// Run metrics gathered for the summary document.
struct RunSummary {
  std::string status;  // "ok", "contract_violation" or "non_finite"
  std::optional<RunError> error;
  std::size_t steps = 0;
  double t_last = 0.0;
  std::vector<std::optional<double>> arrival_times;
  std::optional<double> arrival_spread;  // max - min, only when all arrived
  std::optional<double> coordination_time;
  double coordination_epsilon = 0.0;
  std::vector<int> event_counts;
  double max_e_pf_norm = 0.0;
  ZenoReport zeno;
  IssReport iss;
  double settle_deadline = 0.0;  // 3 / lambda_TC
};

RunSummary summarize(const Scenario& s, const AnalyticConstants& c, const RunResult& r);

/// Header: t, per agent gamma_i, gamma_dot_i, alpha_i, accel_i, p_x_i,
/// p_y_i, p_z_i, e_pf_norm_i, then xi_norm and gamma_spread.
void write_timeseries(std::ostream& out, const RunResult& r);
void write_events(std::ostream& out, const RunResult& r);

std::string certify_document(const Scenario& s, const AnalyticConstants& c);
std::string summary_document(const Scenario& s, const AnalyticConstants& c, const RunSummary& m);

}  // namespace tcoord
