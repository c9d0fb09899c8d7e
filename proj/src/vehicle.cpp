#include "tcoord/vehicle.hpp"

#include <cmath>
#include <stdexcept>

namespace tcoord {

std::vector<std::pair<std::string, std::string>> PFConfig::problems() const {
  std::vector<std::pair<std::string, std::string>> out;
  if (!(k_p > 0.0) || !std::isfinite(k_p)) out.emplace_back("k_p", "tracking gain must be positive");
  if (!(v_min >= 0.0)) out.emplace_back("v_min", "minimum speed must be non-negative");
  if (!(v_max > v_min) || !std::isfinite(v_max)) out.emplace_back("v_max", "maximum speed must exceed v_min");
  if (!(rho > 0.0) || !std::isfinite(rho)) out.emplace_back("rho", "error bound must be positive");
  return out;
}

Vec3 VehicleState::disturbance_at(double t) const {
  Vec3 sum = Vec3::Zero();
  for (const auto& d : disturbances) {
    if (d.active(t)) sum += d.velocity;
  }
  return sum;
}

Vec3 pf_error(const Vec3& p, const BezierTrajectory& traj, double gamma) {
  return p - traj.position(gamma);
}

Vec3 saturate_speed(const Vec3& v, double v_min, double v_max) {
  const double speed = v.norm();
  if (speed == 0.0) return v;
  if (speed > v_max) return v * (v_max / speed);
  if (speed < v_min) return v * (v_min / speed);
  return v;
}

Vec3 pf_command(const VehicleState& v, const BezierTrajectory& traj, double gamma, double gamma_dot,
                const PFConfig& cfg, double t) {
  const Vec3 command = virtual_target_velocity(traj, gamma, gamma_dot) -
                       cfg.k_p * pf_error(v.p, traj, gamma) + v.disturbance_at(t);
  return saturate_speed(command, cfg.v_min, cfg.v_max);
}

VehicleState pf_step(const VehicleState& v, const BezierTrajectory& traj, double gamma, double gamma_dot,
                     const PFConfig& cfg, double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pf_step: dt must be positive");
  VehicleState next = v;
  next.p += dt * pf_command(v, traj, gamma, gamma_dot, cfg, t);
  return next;
}

VehicleState inject_disturbance(VehicleState v, const Disturbance& d) {
  if (d.t_end < d.t_start) throw std::invalid_argument("disturbance window is reversed");
  if (d.t_end == d.t_start) return v;
  for (const auto& other : v.disturbances) {
    if (d.t_start < other.t_end && other.t_start < d.t_end) {
      throw std::invalid_argument("disturbance windows on the same agent overlap");
    }
  }
  v.disturbances.push_back(d);
  return v;
}

}  // namespace tcoord
