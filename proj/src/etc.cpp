#include "tcoord/etc.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace tcoord {

double ThresholdFunction::operator()(double t) const { return c1 + c2 * std::exp(-c3 * t); }

std::vector<std::pair<std::string, std::string>> ThresholdFunction::problems() const {
  std::vector<std::pair<std::string, std::string>> out;
  if (!(c1 > 0.0) || !std::isfinite(c1)) out.emplace_back("c1", "threshold floor must be positive");
  if (!(c2 >= 0.0) || !std::isfinite(c2)) out.emplace_back("c2", "threshold surplus must be non-negative");
  if (!(c3 >= 0.0) || !std::isfinite(c3)) out.emplace_back("c3", "threshold decay rate must be non-negative");
  return out;
}

PaceProfile::PaceProfile(double initial, std::vector<Breakpoint> breakpoints)
    : initial_(initial), breakpoints_(std::move(breakpoints)) {
  if (!std::isfinite(initial_)) throw std::invalid_argument("pace: initial value must be finite");
  double last = 0.0;
  for (const auto& bp : breakpoints_) {
    if (!(bp.t > last) || !std::isfinite(bp.t)) {
      throw std::invalid_argument("pace: breakpoint times must be positive and strictly increasing");
    }
    if (!std::isfinite(bp.value)) throw std::invalid_argument("pace: breakpoint value must be finite");
    last = bp.t;
  }
}

double PaceProfile::value(double t) const {
  double v = initial_;
  for (const auto& bp : breakpoints_) {
    if (t < bp.t) break;
    v = bp.value;
  }
  return v;
}

namespace {

// Exact solution over [0, dt] with constant pace.
Estimate advance(Estimate s, double pace, double dt, double b) {
  const double one_minus_decay = -std::expm1(-b * dt);
  return {s.gamma + pace * dt + (s.gamma_dot - pace) * one_minus_decay / b,
          s.gamma_dot + (pace - s.gamma_dot) * one_minus_decay};
}

}  // namespace

Estimate propagate_estimator(const EstimatorState& est, const PaceProfile& pace, double t, double b) {
  if (t < est.t_k) throw std::invalid_argument("propagate_estimator: t precedes the last event");
  Estimate s{est.gamma_hat, est.gamma_hat_dot};
  double from = est.t_k;
  for (const auto& bp : pace.breakpoints()) {
    if (bp.t <= from) continue;
    if (bp.t > t) break;
    s = advance(s, pace.value(from), bp.t - from, b);
    from = bp.t;
  }
  return advance(s, pace.value(from), t - from, b);
}

bool check_trigger(double e, double t, const ThresholdFunction& h) { return std::abs(e) - h(t) > 0.0; }

EventBus::EventBus(const Digraph& graph)
    : self_(graph.size()),
      neighbors_(graph.size()),
      replicas_(graph.size()),
      listeners_(graph.size()) {
  for (int i = 1; i <= graph.size(); ++i) {
    neighbors_[i - 1] = graph.neighborhood(i);
    replicas_[i - 1].resize(neighbors_[i - 1].size());
    for (std::size_t slot = 0; slot < neighbors_[i - 1].size(); ++slot) {
      listeners_[neighbors_[i - 1][slot] - 1].emplace_back(i - 1, static_cast<int>(slot));
    }
  }
}

const EventRecord& EventBus::fire(int agent, double t, double gamma, double gamma_dot) {
  EstimatorState& own = self_.at(agent - 1);
  if (own.k >= 0 && !(t > own.t_k)) {
    throw std::invalid_argument("event times of agent " + std::to_string(agent) +
                                " must be strictly increasing");
  }
  const EstimatorState reset{gamma, gamma_dot, t, own.k + 1};
  own = reset;
  for (const auto& [receiver, slot] : listeners_[agent - 1]) replicas_[receiver][slot] = reset;
  log_.push_back({t, agent, reset.k, gamma, gamma_dot});
  return log_.back();
}

const EstimatorState& EventBus::self_estimator(int agent) const { return self_.at(agent - 1); }

const EstimatorState& EventBus::replica(int receiver, int sender) const {
  const auto& nbrs = neighbors_.at(receiver - 1);
  for (std::size_t slot = 0; slot < nbrs.size(); ++slot) {
    if (nbrs[slot] == sender) return replicas_[receiver - 1][slot];
  }
  throw std::out_of_range("agent " + std::to_string(sender) + " is not a neighbor of agent " +
                          std::to_string(receiver));
}

const std::vector<int>& EventBus::neighbors(int receiver) const { return neighbors_.at(receiver - 1); }

int EventBus::event_count(int agent) const { return self_.at(agent - 1).k + 1; }

std::string format_event_line(const EventRecord& ev) {
  nlohmann::ordered_json j;
  j["t"] = ev.t;
  j["agent"] = ev.agent;
  j["k"] = ev.k;
  j["gamma"] = ev.gamma;
  j["gamma_dot"] = ev.gamma_dot;
  return j.dump();
}

EventRecord parse_event_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    return {j.at("t").get<double>(), j.at("agent").get<int>(), j.at("k").get<int>(),
            j.at("gamma").get<double>(), j.at("gamma_dot").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed event line: ") + e.what());
  }
}

}  // namespace tcoord
