#include "tcoord/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tcoord/coordination.hpp"

namespace tcoord {

double initial_error_norm(const Scenario& s) {
  const int n = s.size();
  Vector gamma(n);
  Vector gamma_dot(n);
  for (int i = 0; i < n; ++i) {
    gamma(i) = s.agents[i].gamma0;
    gamma_dot(i) = s.agents[i].gamma_dot0;
  }
  return coordination_error(build_q(n), gamma, gamma_dot, s.pace.value(0.0)).norm;
}

AnalyticConstants certify(const Scenario& s, std::optional<double> xi0_norm) {
  AnalyticConstants c;
  const int n = s.size();
  c.laplacian = laplacian(s.graph);
  c.q = build_q(n);
  c.lbar = reduced_laplacian(c.laplacian, c.q);
  c.cert = solve_lyapunov(c.lbar, Matrix::Identity(n - 1, n - 1));
  c.lambda_tc = convergence_rate(s.gains, c.cert);
  c.kappa1 = kappa1(s.gains.b, s.analysis.beta, c.cert, n);
  c.kappa2 = s.analysis.kappa2;
  c.xi0_norm = xi0_norm.value_or(initial_error_norm(s));
  c.u_bar = u_bar({.gains = s.gains,
                   .n = n,
                   .kappa1 = c.kappa1,
                   .kappa2 = c.kappa2,
                   .xi0_norm = c.xi0_norm,
                   .threshold_c1 = s.threshold.c1,
                   .threshold_c2 = s.threshold.c2,
                   .rho = s.rho,
                   .gamma_ddot_d_max = s.analysis.gamma_ddot_d_max});
  c.error_system_norm = error_system_norm(s.gains.b);
  c.inter_event_bound = min_inter_event_interval(s.gains.b, s.threshold.c1, c.u_bar);
  return c;
}

std::optional<double> coordination_achieved_time(const RunResult& r, double epsilon) {
  if (r.series.empty()) return std::nullopt;
  for (std::size_t k = r.series.size(); k-- > 0;) {
    if (!(r.series[k].gamma_spread < epsilon)) {
      if (k + 1 == r.series.size()) return std::nullopt;
      return r.series[k + 1].t;
    }
  }
  return r.series.front().t;
}

double active_end_time(const RunResult& r) {
  std::optional<double> first;
  for (const auto& a : r.arrival_times) {
    if (a && (!first || *a < *first)) first = a;
  }
  if (first) return *first;
  return r.series.empty() ? 0.0 : r.series.back().t;
}

namespace {

bool active(const StepSample& s) {
  return std::none_of(s.agents.begin(), s.agents.end(), [](const AgentSample& a) { return a.done; });
}

}  // namespace

IssReport iss_envelope_check(const RunResult& r, double kappa1, double lambda_tc, const IssFloorPolicy& policy) {
  IssReport rep;
  rep.kappa1 = kappa1;
  rep.lambda_tc = lambda_tc;
  rep.note =
      "floor replaces the kappa2 input term (not computable); it is the largest measured ||xi_TC|| over the "
      "final tail of the active run";
  if (r.series.empty()) return rep;

  rep.xi0_norm = r.series.front().xi_norm;
  std::size_t active_len = 0;
  while (active_len < r.series.size() && active(r.series[active_len])) ++active_len;
  if (active_len == 0) return rep;
  const double t_end = r.series[active_len - 1].t;

  const double tail_start = (1.0 - policy.tail_fraction) * t_end;
  for (std::size_t k = 0; k < active_len; ++k) {
    if (r.series[k].t >= tail_start) rep.floor = std::max(rep.floor, r.series[k].xi_norm);
  }

  const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.01 / r.dt)));
  for (std::size_t k = 0; k < active_len; k += stride) {
    const auto& s = r.series[k];
    const double decay = kappa1 * rep.xi0_norm * std::exp(-lambda_tc * s.t);
    IssSample sample{s.t, s.xi_norm, decay + rep.floor, false};
    sample.violation = sample.measured > sample.envelope && decay > rep.floor;
    if (sample.violation) ++rep.violations;
    rep.samples.push_back(sample);
  }

  // First constant-pace segment of the active run.
  double window_end = t_end;
  const double pace0 = r.series.front().pace;
  for (std::size_t k = 0; k < active_len; ++k) {
    if (r.series[k].pace != pace0) {
      window_end = r.series[k].t;
      break;
    }
  }
  rep.settle_window_end = window_end;
  const double level = 0.1 * rep.xi0_norm + rep.floor;
  std::optional<std::size_t> last_above;
  std::size_t last_in_window = 0;
  for (std::size_t k = 0; k < rep.samples.size() && rep.samples[k].t < window_end; ++k) {
    last_in_window = k;
    if (rep.samples[k].measured > level) last_above = k;
  }
  if (!last_above) {
    rep.settle_time = rep.samples.front().t;
  } else if (*last_above < last_in_window) {
    rep.settle_time = rep.samples[*last_above + 1].t;
  }
  return rep;
}

ZenoReport zeno_report(const RunResult& r, double bound) {
  ZenoReport rep;
  rep.bound = bound;
  rep.min_gap.assign(r.n, std::nullopt);
  std::vector<std::optional<double>> last(r.n);
  for (const auto& ev : r.events) {
    auto& prev = last[ev.agent - 1];
    if (prev) {
      const double gap = ev.t - *prev;
      auto& g = rep.min_gap[ev.agent - 1];
      if (!g || gap < *g) g = gap;
      if (!rep.overall_min_gap || gap < *rep.overall_min_gap) rep.overall_min_gap = gap;
    }
    prev = ev.t;
  }
  if (!rep.overall_min_gap) {
    rep.message = "no gaps";
    return rep;
  }
  rep.all_positive = *rep.overall_min_gap > 0.0;
  rep.all_above_bound = *rep.overall_min_gap >= bound;
  rep.message = rep.all_above_bound ? "all inter-event gaps respect the analytic lower bound"
                                    : "an inter-event gap is shorter than the analytic lower bound";
  return rep;
}

int count_events(const RunResult& r, int agent, double t0, double t1) {
  return static_cast<int>(std::count_if(r.events.begin(), r.events.end(), [&](const EventRecord& ev) {
    return ev.agent == agent && ev.t >= t0 && ev.t < t1;
  }));
}

}  // namespace tcoord
