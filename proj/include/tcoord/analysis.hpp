#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tcoord/consensus.hpp"
#include "tcoord/scenario.hpp"
#include "tcoord/sim.hpp"

namespace tcoord {

/// Analytic constants of a scenario: Lyapunov certificate (Xi = I), rate
/// estimate, ISS gain, the forcing bound and the inter-event lower bound.
struct AnalyticConstants {
  Matrix laplacian;
  Matrix q;
  Matrix lbar;
  LyapunovCertificate cert;
  double lambda_tc = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double xi0_norm = 0.0;
  double u_bar = 0.0;
  double error_system_norm = 0.0;
  double inter_event_bound = 0.0;
};

/// ||xi_TC(0)|| from the scenario's initial conditions.
double initial_error_norm(const Scenario& s);

/// Throws NotStabilizingError when the graph lacks a directed spanning tree.
/// `xi0_norm` overrides the value computed from the initial conditions.
AnalyticConstants certify(const Scenario& s, std::optional<double> xi0_norm = std::nullopt);

/// Earliest sample time after which max_{i<j}|gamma_i - gamma_j| stays below
/// epsilon until the end of the run; nullopt if the last sample is not below.
std::optional<double> coordination_achieved_time(const RunResult& r, double epsilon);

/// Time at which the first agent reached t_f, or the last sample time.
double active_end_time(const RunResult& r);

struct IssFloorPolicy {
  /// The floor is the largest ||xi_TC|| over the final `tail_fraction` of
  /// the active (pre-arrival) run.
  double tail_fraction = 0.25;
};

struct IssSample {
  double t = 0.0;
  double measured = 0.0;
  double envelope = 0.0;
  bool violation = false;
};

struct IssReport {
  double xi0_norm = 0.0;
  double floor = 0.0;
  double kappa1 = 0.0;
  double lambda_tc = 0.0;
  std::vector<IssSample> samples;  // 10 ms grid over the active run
  int violations = 0;              // decay-term violations before the floor dominates
  /// Earliest grid time from which ||xi_TC|| stays at or below
  /// 0.1 ||xi_TC(0)|| + floor until the end of the first constant-pace
  /// segment of the active run.
  std::optional<double> settle_time;
  double settle_window_end = 0.0;
  std::string note;
};

IssReport iss_envelope_check(const RunResult& r, double kappa1, double lambda_tc,
                             const IssFloorPolicy& policy = {});

struct ZenoReport {
  std::vector<std::optional<double>> min_gap;  // per agent, nullopt with < 2 events
  std::optional<double> overall_min_gap;
  double bound = 0.0;
  bool all_positive = true;
  bool all_above_bound = true;
  std::string message;
};

ZenoReport zeno_report(const RunResult& r, double bound);

/// Events of `agent` (1-based) with t in [t0, t1).
int count_events(const RunResult& r, int agent, double t0, double t1);

}  // namespace tcoord
