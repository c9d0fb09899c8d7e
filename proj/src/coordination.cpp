#include "tcoord/coordination.hpp"

#include <cmath>
#include <stdexcept>

namespace tcoord {

double alpha_bar(const Vec3& p_d_dot, const Vec3& e_pf, double k_pf, double eta) {
  return k_pf * p_d_dot.dot(e_pf) / (p_d_dot.norm() + eta);
}

double coordination_accel(double gamma, double gamma_dot, std::span<const double> neighbor_estimates,
                          double pace, const GainSet& gains, double alpha) {
  double coupling = 0.0;
  for (double estimate : neighbor_estimates) coupling += gamma - estimate;
  return -gains.b * (gamma_dot - pace) - gains.a * coupling + alpha;
}

CoordinationState step_coordination(CoordinationState state, double accel, double dt, double t_f) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_coordination: dt must be positive");
  if (state.done) return state;
  if (!std::isfinite(accel)) throw std::domain_error("step_coordination: non-finite acceleration");
  state.gamma_dot += dt * accel;
  state.gamma += dt * state.gamma_dot;
  if (state.gamma >= t_f) {
    state = {t_f, 0.0, true};
  } else if (state.gamma < 0.0) {
    state.gamma = 0.0;
  }
  return state;
}

CoordinationError coordination_error(const Matrix& q, const Vector& gamma, const Vector& gamma_dot,
                                     double pace) {
  if (gamma.size() != gamma_dot.size() || q.cols() != gamma.size() || q.rows() != gamma.size() - 1) {
    throw std::invalid_argument("coordination_error: dimension mismatch");
  }
  CoordinationError out;
  out.xi1 = q * gamma;
  out.xi2 = gamma_dot.array() - pace;
  out.norm = std::sqrt(out.xi1.squaredNorm() + out.xi2.squaredNorm());
  return out;
}

}  // namespace tcoord
