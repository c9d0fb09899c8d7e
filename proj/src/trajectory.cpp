#include "tcoord/trajectory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tcoord {

namespace {

Vec3 de_casteljau(std::vector<Vec3> work, double u) {
  for (std::size_t level = work.size() - 1; level > 0; --level) {
    for (std::size_t k = 0; k < level; ++k) work[k] = (1.0 - u) * work[k] + u * work[k + 1];
  }
  return work.front();
}

}  // namespace

BezierTrajectory::BezierTrajectory(std::vector<Vec3> control_points, double t_f)
    : points_(std::move(control_points)), t_f_(t_f) {
  if (points_.size() < 2) throw std::invalid_argument("Bezier curve needs at least 2 control points");
  if (!(t_f_ > 0.0) || !std::isfinite(t_f_)) throw std::invalid_argument("t_f must be positive");
  for (const auto& p : points_) {
    if (!p.allFinite()) throw std::invalid_argument("non-finite control point");
  }
  const double d = static_cast<double>(degree());
  hodograph_.reserve(points_.size() - 1);
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    hodograph_.push_back(d * (points_[k + 1] - points_[k]) / t_f_);
  }
}

void BezierTrajectory::check_domain(double s) const {
  if (!(s >= 0.0 && s <= t_f_)) {
    throw std::domain_error("virtual time " + std::to_string(s) + " outside [0, " +
                            std::to_string(t_f_) + "]");
  }
}

Vec3 BezierTrajectory::position(double s) const {
  check_domain(s);
  return de_casteljau(points_, s / t_f_);
}

Vec3 BezierTrajectory::velocity(double s) const {
  check_domain(s);
  return de_casteljau(hodograph_, s / t_f_);
}

bool BezierTrajectory::operator==(const BezierTrajectory& other) const {
  return t_f_ == other.t_f_ && points_ == other.points_;
}

Vec3 virtual_target_velocity(const BezierTrajectory& traj, double gamma, double gamma_dot) {
  return traj.velocity(gamma) * gamma_dot;
}

TrajectorySet::TrajectorySet(std::vector<BezierTrajectory> trajectories)
    : trajectories_(std::move(trajectories)) {
  if (trajectories_.empty()) throw std::invalid_argument("trajectory set is empty");
  const double t_f = trajectories_.front().final_time();
  for (const auto& t : trajectories_) {
    if (t.final_time() != t_f) {
      throw std::invalid_argument("all trajectories must share the same t_f");
    }
  }
}

SeparationSample min_separation(const TrajectorySet& set, int samples) {
  SeparationSample best;
  best.distance = std::numeric_limits<double>::infinity();
  const double t_f = set.final_time();
  for (int k = 0; k <= samples; ++k) {
    const double s = k == samples ? t_f : t_f * k / samples;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const Vec3 pi = set[i].position(s);
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        const double d = (pi - set[j].position(s)).norm();
        if (d < best.distance) {
          best = {d, s, static_cast<int>(i) + 1, static_cast<int>(j) + 1};
        }
      }
    }
  }
  return best;
}

}  // namespace tcoord
