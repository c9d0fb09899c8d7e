#pragma once

#include <vector>

#include <Eigen/Core>

namespace tcoord {

using Vec3 = Eigen::Vector3d;

/// Desired trajectory p_d : [0, t_f] -> R^3 as a Bezier curve in virtual time.
class BezierTrajectory {
 public:
  /// Throws std::invalid_argument for fewer than 2 control points, a
  /// non-positive t_f or non-finite coordinates.
  BezierTrajectory(std::vector<Vec3> control_points, double t_f);

  /// de Casteljau evaluation at s / t_f. Throws std::domain_error outside [0, t_f].
  Vec3 position(double s) const;

  /// dp_d/ds, i.e. the hodograph scaled by 1 / t_f.
  Vec3 velocity(double s) const;

  int degree() const noexcept { return static_cast<int>(points_.size()) - 1; }
  double final_time() const noexcept { return t_f_; }
  const std::vector<Vec3>& control_points() const noexcept { return points_; }

  bool operator==(const BezierTrajectory& other) const;

 private:
  void check_domain(double s) const;

  std::vector<Vec3> points_;
  std::vector<Vec3> hodograph_;  // degree * (P_{k+1} - P_k) / t_f
  double t_f_;
};

/// Velocity of the virtual target, dp_d/dgamma * gamma_dot.
Vec3 virtual_target_velocity(const BezierTrajectory& traj, double gamma, double gamma_dot);

/// One trajectory per agent, all sharing the arrival time t_f.
class TrajectorySet {
 public:
  /// Throws std::invalid_argument when empty or when final times differ.
  explicit TrajectorySet(std::vector<BezierTrajectory> trajectories);

  std::size_t size() const noexcept { return trajectories_.size(); }
  double final_time() const noexcept { return trajectories_.front().final_time(); }
  const BezierTrajectory& operator[](std::size_t i) const { return trajectories_.at(i); }
  const std::vector<BezierTrajectory>& all() const noexcept { return trajectories_; }

  bool operator==(const TrajectorySet&) const = default;

 private:
  std::vector<BezierTrajectory> trajectories_;
};

struct SeparationSample {
  double distance = 0.0;
  double virtual_time = 0.0;
  int agent_a = 0;  // 1-based
  int agent_b = 0;
};

/// Minimum pairwise distance between virtual targets at matched virtual
/// times, sampled on `samples` + 1 evenly spaced points of [0, t_f].
SeparationSample min_separation(const TrajectorySet& set, int samples = 2000);

}  // namespace tcoord
