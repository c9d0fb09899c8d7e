#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcoord/graph.hpp"

namespace tcoord {

/// Trigger level h(t) = c1 + c2 exp(-c3 t).
struct ThresholdFunction {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  double operator()(double t) const;

  /// Field-name + message pairs for every violated parameter constraint.
  std::vector<std::pair<std::string, std::string>> problems() const;

  bool operator==(const ThresholdFunction&) const = default;
};

/// Piecewise-constant desired pace gamma_dot_d(t). The value switches to
/// `breakpoints[k].value` at `breakpoints[k].t` (inclusive).
class PaceProfile {
 public:
  struct Breakpoint {
    double t = 0.0;
    double value = 0.0;
    bool operator==(const Breakpoint&) const = default;
  };

  PaceProfile() = default;
  /// Throws std::invalid_argument unless breakpoint times are positive and
  /// strictly increasing and all values are finite.
  PaceProfile(double initial, std::vector<Breakpoint> breakpoints);

  double value(double t) const;
  double initial() const noexcept { return initial_; }
  const std::vector<Breakpoint>& breakpoints() const noexcept { return breakpoints_; }

  bool operator==(const PaceProfile&) const = default;

 private:
  double initial_ = 1.0;
  std::vector<Breakpoint> breakpoints_;
};

/// Shared estimator data for one transmitting agent, valid from its last event.
struct EstimatorState {
  double gamma_hat = 0.0;      // transmitted gamma at t_k
  double gamma_hat_dot = 0.0;  // transmitted gamma_dot at t_k
  double t_k = 0.0;            // time of the last event
  int k = -1;                  // index of the last event, -1 before the first

  bool operator==(const EstimatorState&) const = default;
};

struct Estimate {
  double gamma = 0.0;
  double gamma_dot = 0.0;
};

/// Closed-form solution of gamma_hat'' = -b (gamma_hat' - gamma_dot_d) from
/// the reset data at t_k to time t, composed across pace breakpoints.
/// Throws std::invalid_argument when t < t_k.
Estimate propagate_estimator(const EstimatorState& est, const PaceProfile& pace, double t, double b);

/// e_j = gamma_hat_j - gamma_j; positive when agent j lags its estimate.
inline double estimation_error(const Estimate& propagated, double gamma_true) {
  return propagated.gamma - gamma_true;
}

/// True iff |e| - h(t) > 0.
bool check_trigger(double e, double t, const ThresholdFunction& h);

/// One transmission by `agent` (1-based).
struct EventRecord {
  double t = 0.0;
  int agent = 0;
  int k = 0;
  double gamma = 0.0;
  double gamma_dot = 0.0;

  bool operator==(const EventRecord&) const = default;
};

/// Event bus for one run: the self-monitoring estimator of each agent and
/// the replicas held by each of its out-neighbors. Delivery is instantaneous,
/// so a fired event resets sender and receivers to identical data.
class EventBus {
 public:
  explicit EventBus(const Digraph& graph);

  /// Appends an EventRecord and resets every estimator of `agent`.
  /// Throws std::invalid_argument when t does not exceed the agent's last
  /// event time.
  const EventRecord& fire(int agent, double t, double gamma, double gamma_dot);

  const EstimatorState& self_estimator(int agent) const;
  /// Replica of `sender`'s estimator held by `receiver`; sender must be in
  /// the receiver's neighborhood (std::out_of_range otherwise).
  const EstimatorState& replica(int receiver, int sender) const;
  /// In-neighbors of `receiver`, ascending.
  const std::vector<int>& neighbors(int receiver) const;

  int event_count(int agent) const;
  const std::vector<EventRecord>& log() const noexcept { return log_; }
  int size() const noexcept { return static_cast<int>(self_.size()); }

 private:
  std::vector<EstimatorState> self_;
  std::vector<std::vector<int>> neighbors_;             // per receiver
  std::vector<std::vector<EstimatorState>> replicas_;  // parallel to neighbors_
  std::vector<std::vector<std::pair<int, int>>> listeners_;  // per sender: (receiver, slot)
  std::vector<EventRecord> log_;
};

/// Event log line: {"t":..,"agent":..,"k":..,"gamma":..,"gamma_dot":..}
/// with shortest round-trip doubles.
std::string format_event_line(const EventRecord& ev);
/// Inverse of format_event_line. Throws std::invalid_argument on malformed input.
EventRecord parse_event_line(std::string_view line);

}  // namespace tcoord
