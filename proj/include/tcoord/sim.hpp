#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcoord/etc.hpp"
#include "tcoord/scenario.hpp"

namespace tcoord {

/// Per-agent values recorded at one step boundary.
struct AgentSample {
  double gamma = 0.0;
  double gamma_dot = 0.0;
  double alpha = 0.0;
  double accel = 0.0;
  Vec3 p = Vec3::Zero();
  double e_pf_norm = 0.0;
  bool done = false;
};

struct StepSample {
  double t = 0.0;
  double pace = 0.0;
  std::vector<AgentSample> agents;
  double xi_norm = 0.0;       // ||xi_TC||
  double gamma_spread = 0.0;  // max_{i<j} |gamma_i - gamma_j|
  double e_pf_norm = 0.0;     // stacked ||e_PF||
};

struct RunError {
  enum class Kind { kContractViolation, kNonFinite };
  Kind kind = Kind::kContractViolation;
  double t = 0.0;
  std::string message;
};

/// Output of one run. On abort `series`/`events` hold everything up to and
/// including the failing step and `error` names the cause.
struct RunResult {
  int n = 0;
  double dt = 0.0;
  double t_f = 0.0;
  std::vector<StepSample> series;
  std::vector<EventRecord> events;
  std::vector<std::optional<double>> arrival_times;  // per agent
  std::optional<RunError> error;

  bool ok() const noexcept { return !error.has_value(); }
  std::vector<double> times() const;
};

/// Raised by run() when validate() reports errors.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& message, Diagnostics diagnostics)
      : std::runtime_error(message), diagnostics_(std::move(diagnostics)) {}
  const Diagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  Diagnostics diagnostics_;
};

/// Number of step boundaries floor(t_end / dt) + 1, robust to the rounding
/// of t_end / dt.
long step_count(double t_end, double dt);

/// Fixed-step closed loop. Per step: propagate every estimator replica,
/// evaluate triggers and fire events (ascending agent id), compute the
/// coupling and accelerations from the post-event snapshot, record the
/// sample, then commit coordination states and step the vehicles from the
/// same snapshot. Every agent broadcasts once at t = 0. Terminates at t_end
/// or once all agents have arrived.
RunResult run(const Scenario& scenario);

}  // namespace tcoord
