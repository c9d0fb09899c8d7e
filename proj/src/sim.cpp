#include "tcoord/sim.hpp"

#include <algorithm>
#include <cmath>

#include "tcoord/coordination.hpp"

namespace tcoord {

std::vector<double> RunResult::times() const {
  std::vector<double> t;
  t.reserve(series.size());
  for (const auto& s : series) t.push_back(s.t);
  return t;
}

long step_count(double t_end, double dt) {
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  const double steps = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::floor(ratio);
  return static_cast<long>(steps) + 1;
}

namespace {

double spread(const std::vector<CoordinationState>& states) {
  double lo = states.front().gamma;
  double hi = lo;
  for (const auto& s : states) {
    lo = std::min(lo, s.gamma);
    hi = std::max(hi, s.gamma);
  }
  return hi - lo;
}

}  // namespace

RunResult run(const Scenario& scenario) {
  const Diagnostics diagnostics = validate(scenario);
  if (error_count(diagnostics) > 0) {
    std::string message = "scenario is invalid:";
    for (const auto& d : diagnostics) {
      if (d.severity == Diagnostic::Severity::kError) message += " [" + d.path + "] " + d.message;
    }
    throw ValidationError(message, diagnostics);
  }

  const int n = scenario.size();
  const double dt = scenario.sim.dt;
  const double t_f = scenario.trajectories.final_time();
  const long steps = step_count(scenario.sim.t_end, dt);
  const Matrix q = build_q(n);
  const GainSet& gains = scenario.gains;

  RunResult result;
  result.n = n;
  result.dt = dt;
  result.t_f = t_f;
  result.arrival_times.assign(n, std::nullopt);
  result.series.reserve(static_cast<std::size_t>(steps));

  std::vector<CoordinationState> coord(n);
  std::vector<VehicleState> vehicles(n);
  for (int i = 0; i < n; ++i) {
    const auto& init = scenario.agents[i];
    const auto& traj = scenario.trajectories[i];
    coord[i] = {init.gamma0, init.gamma_dot0, init.gamma0 >= t_f};
    if (coord[i].done) {
      coord[i].gamma_dot = 0.0;
      result.arrival_times[i] = 0.0;
    }
    vehicles[i].p = traj.position(coord[i].gamma) + init.initial_offset;
  }
  for (const auto& d : scenario.disturbances) {
    vehicles[d.agent - 1] = inject_disturbance(std::move(vehicles[d.agent - 1]), d.window);
  }

  EventBus bus(scenario.graph);
  std::vector<double> neighbor_estimates;
  Vector gamma(n);
  Vector gamma_dot(n);

  for (long step = 0; step < steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    const double pace = scenario.pace.value(t);

    // (1)+(2) self-monitoring and event firing, ascending agent id.
    for (int j = 1; j <= n; ++j) {
      const auto& state = coord[j - 1];
      bool fire = step == 0 || scenario.sim.communication == Communication::kEveryStep;
      if (!fire) {
        const Estimate own = propagate_estimator(bus.self_estimator(j), scenario.pace, t, gains.b);
        fire = check_trigger(estimation_error(own, state.gamma), t, scenario.threshold);
      }
      if (fire) bus.fire(j, t, state.gamma, state.gamma_dot);
    }

    // (3) coupling and accelerations from the post-event snapshot.
    StepSample sample;
    sample.t = t;
    sample.pace = pace;
    sample.agents.resize(n);
    double e_pf_sq = 0.0;
    bool finite = true;
    for (int i = 1; i <= n; ++i) {
      const auto& state = coord[i - 1];
      const auto& traj = scenario.trajectories[i - 1];
      neighbor_estimates.clear();
      for (int j : bus.neighbors(i)) {
        neighbor_estimates.push_back(propagate_estimator(bus.replica(i, j), scenario.pace, t, gains.b).gamma);
      }
      const Vec3 e_pf = pf_error(vehicles[i - 1].p, traj, state.gamma);
      const double alpha = alpha_bar(traj.velocity(state.gamma), e_pf, gains.k_pf, gains.eta);
      const double accel =
          state.done ? 0.0 : coordination_accel(state.gamma, state.gamma_dot, neighbor_estimates, pace, gains, alpha);

      AgentSample& a = sample.agents[i - 1];
      a.gamma = state.gamma;
      a.gamma_dot = state.gamma_dot;
      a.alpha = alpha;
      a.accel = accel;
      a.p = vehicles[i - 1].p;
      a.e_pf_norm = e_pf.norm();
      a.done = state.done;
      e_pf_sq += e_pf.squaredNorm();
      finite = finite && std::isfinite(accel) && vehicles[i - 1].p.allFinite();
      gamma(i - 1) = state.gamma;
      gamma_dot(i - 1) = state.gamma_dot;
    }
    sample.e_pf_norm = std::sqrt(e_pf_sq);
    sample.gamma_spread = spread(coord);
    sample.xi_norm = coordination_error(q, gamma, gamma_dot, pace).norm;
    result.series.push_back(std::move(sample));

    if (!finite) {
      result.error = RunError{RunError::Kind::kNonFinite, t, "non-finite state or acceleration"};
      break;
    }
    if (result.series.back().e_pf_norm > scenario.rho) {
      result.error = RunError{RunError::Kind::kContractViolation, t,
                              "path-following error " + std::to_string(result.series.back().e_pf_norm) +
                                  " m exceeds rho = " + std::to_string(scenario.rho) + " m"};
      break;
    }
    const bool all_done = std::all_of(coord.begin(), coord.end(), [](const auto& s) { return s.done; });
    if (all_done || step + 1 == steps) break;

    // (4)+(5) commit; vehicles advance from the snapshot at t.
    const double t_next = static_cast<double>(step + 1) * dt;
    const auto& snapshot = result.series.back().agents;
    for (int i = 0; i < n; ++i) {
      const auto& traj = scenario.trajectories[i];
      vehicles[i] = pf_step(vehicles[i], traj, snapshot[i].gamma, snapshot[i].gamma_dot,
                            scenario.agents[i].vehicle, t, dt);
      const bool was_done = coord[i].done;
      coord[i] = step_coordination(coord[i], snapshot[i].accel, dt, t_f);
      if (coord[i].done && !was_done) result.arrival_times[i] = t_next;
    }
  }

  result.events = bus.log();
  return result;
}

}  // namespace tcoord
