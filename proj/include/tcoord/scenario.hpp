#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tcoord/consensus.hpp"
#include "tcoord/etc.hpp"
#include "tcoord/graph.hpp"
#include "tcoord/trajectory.hpp"
#include "tcoord/vehicle.hpp"

namespace tcoord {

enum class Communication {
  kEventTriggered,  // transmit when |e_j| > h(t)
  kEveryStep,       // transmit at every step (continuous-communication reference)
};

struct AgentInit {
  double gamma0 = 0.0;
  double gamma_dot0 = 1.0;
  Vec3 initial_offset = Vec3::Zero();  // p(0) - p_d(gamma0)
  PFConfig vehicle;

  bool operator==(const AgentInit& o) const {
    return gamma0 == o.gamma0 && gamma_dot0 == o.gamma_dot0 && initial_offset == o.initial_offset &&
           vehicle == o.vehicle;
  }
};

struct AgentDisturbance {
  int agent = 1;  // 1-based
  Disturbance window;

  bool operator==(const AgentDisturbance&) const = default;
};

struct SimSettings {
  double dt = 1e-3;
  double t_end = 25.0;
  Communication communication = Communication::kEventTriggered;

  bool operator==(const SimSettings&) const = default;
};

/// Policy values for the analytic bounds and the run diagnostics.
struct AnalysisSettings {
  double beta = 1.0;              // Lyapunov weight on xi_2
  double kappa2 = 0.0;            // ISS input gain policy value
  double gamma_ddot_d_max = 0.0;  // bound on |gamma_ddot_d| between pace steps
  double coordination_epsilon = 0.1;
  double min_separation = 10.0;   // [m]
  double iss_tail_fraction = 0.25;

  bool operator==(const AnalysisSettings&) const = default;
};

/// Complete description of one coordinated path-following run.
struct Scenario {
  std::string name;
  Digraph graph;
  TrajectorySet trajectories;
  GainSet gains;
  ThresholdFunction threshold;
  PaceProfile pace;
  std::vector<AgentInit> agents;
  std::vector<AgentDisturbance> disturbances;
  double rho = 5.0;  // bound on the stacked path-following error [m]
  SimSettings sim;
  AnalysisSettings analysis;
  std::uint64_t seed = 0;  // reserved; runs are deterministic

  int size() const noexcept { return graph.size(); }
  bool operator==(const Scenario&) const = default;
};

struct Diagnostic {
  enum class Severity { kError, kWarning };
  Severity severity = Severity::kError;
  std::string path;  // dotted field path, e.g. "threshold.c1"
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

int error_count(const Diagnostics& d);
int warning_count(const Diagnostics& d);

/// Semantic checks: directed spanning tree, gain and threshold validity,
/// vehicle limits, initial conditions, disturbance windows, the eta versus
/// speed-range condition, dt versus the inter-event bound and the minimum
/// virtual-target separation.
Diagnostics validate(const Scenario& s);

/// Malformed scenario document; `path` names the offending field.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Unreadable or unwritable file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural parse of a scenario JSON document. Throws ScenarioError.
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& s);

/// Reads and parses a scenario file, applying `key=value` overrides (dotted
/// keys into the document, values parsed as JSON, falling back to strings)
/// before the structural parse. Throws IoError or ScenarioError.
Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Applies overrides to a raw scenario document.
std::string apply_overrides(std::string_view text, const std::vector<std::string>& overrides);

}  // namespace tcoord
