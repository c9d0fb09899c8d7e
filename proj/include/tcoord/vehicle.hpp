#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tcoord/trajectory.hpp"

namespace tcoord {

/// Kinematic path-following stand-in parameters.
struct PFConfig {
  double k_p = 1.0;    // tracking gain [1/s]
  double v_min = 0.0;  // speed floor while moving [m/s]
  double v_max = 25.0; // speed ceiling [m/s]
  double rho = 5.0;    // path-following error bound [m]

  std::vector<std::pair<std::string, std::string>> problems() const;

  bool operator==(const PFConfig&) const = default;
};

/// Additive velocity applied on [t_start, t_end).
struct Disturbance {
  double t_start = 0.0;
  double t_end = 0.0;
  Vec3 velocity = Vec3::Zero();

  bool active(double t) const noexcept { return t >= t_start && t < t_end; }
  bool operator==(const Disturbance& o) const {
    return t_start == o.t_start && t_end == o.t_end && velocity == o.velocity;
  }
};

struct VehicleState {
  Vec3 p = Vec3::Zero();
  std::vector<Disturbance> disturbances;

  Vec3 disturbance_at(double t) const;
};

/// e_PF = p - p_d(gamma).
Vec3 pf_error(const Vec3& p, const BezierTrajectory& traj, double gamma);

/// Rescales a non-zero velocity so its norm lies in [v_min, v_max]; the zero
/// vector is returned unchanged.
Vec3 saturate_speed(const Vec3& v, double v_min, double v_max);

/// Commanded velocity: target velocity - k_p e_PF + active disturbance,
/// speed-saturated.
Vec3 pf_command(const VehicleState& v, const BezierTrajectory& traj, double gamma, double gamma_dot,
                const PFConfig& cfg, double t);

/// Explicit Euler step of the vehicle from t to t + dt.
VehicleState pf_step(const VehicleState& v, const BezierTrajectory& traj, double gamma, double gamma_dot,
                     const PFConfig& cfg, double t, double dt);

/// Adds a disturbance window. An empty window (t_start == t_end) is a no-op;
/// reversed or overlapping windows throw std::invalid_argument.
VehicleState inject_disturbance(VehicleState v, const Disturbance& d);

}  // namespace tcoord
