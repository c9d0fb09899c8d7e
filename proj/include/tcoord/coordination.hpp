#pragma once

#include <span>

#include "tcoord/consensus.hpp"
#include "tcoord/trajectory.hpp"

namespace tcoord {

/// Path-following coupling k_PF (p_d_dot . e_PF) / (||p_d_dot|| + eta).
double alpha_bar(const Vec3& p_d_dot, const Vec3& e_pf, double k_pf, double eta);

/// gamma_i'' = -b (gamma_dot_i - pace) - a sum_j (gamma_i - gamma_hat_j) + alpha_i.
double coordination_accel(double gamma, double gamma_dot, std::span<const double> neighbor_estimates,
                          double pace, const GainSet& gains, double alpha);

/// Virtual time of one agent.
struct CoordinationState {
  double gamma = 0.0;
  double gamma_dot = 0.0;
  bool done = false;  // reached t_f; frozen from then on

  bool operator==(const CoordinationState&) const = default;
};

/// Semi-implicit Euler step clamped to [0, t_f]. On reaching t_f the state
/// freezes with gamma = t_f and gamma_dot = 0. A done state is returned
/// unchanged. Throws std::domain_error for non-finite acceleration and
/// std::invalid_argument for dt <= 0.
CoordinationState step_coordination(CoordinationState state, double accel, double dt, double t_f);

/// xi_1 = Q gamma, xi_2 = gamma_dot - pace 1, and the norm of the stack.
struct CoordinationError {
  Vector xi1;
  Vector xi2;
  double norm = 0.0;
};

/// Throws std::invalid_argument on dimension mismatch.
CoordinationError coordination_error(const Matrix& q, const Vector& gamma, const Vector& gamma_dot,
                                     double pace);

}  // namespace tcoord
