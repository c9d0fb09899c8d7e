#include "tcoord/report.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <fmt/format.h>
#include <json.hpp>

namespace tcoord {

using json = nlohmann::ordered_json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json constants_json(const AnalyticConstants& c) {
  json j;
  j["laplacian"] = matrix_json(c.laplacian);
  j["q"] = matrix_json(c.q);
  j["lbar"] = matrix_json(c.lbar);
  j["xi"] = matrix_json(c.cert.xi);
  j["psi"] = matrix_json(c.cert.psi);
  j["residual_norm"] = number(c.cert.residual_norm);
  j["psi_min"] = number(c.cert.psi_min);
  j["psi_max"] = number(c.cert.psi_max);
  j["lambda_tc"] = number(c.lambda_tc);
  j["kappa1"] = number(c.kappa1);
  j["kappa2"] = number(c.kappa2);
  j["kappa2_policy"] =
      "kappa2 is a policy value (default 0): its defining constants are not available, so u_bar omits the "
      "input-gain term unless analysis.kappa2 is set; with the default it is a lower-envelope estimate";
  j["xi0_norm"] = number(c.xi0_norm);
  j["u_bar"] = number(c.u_bar);
  j["error_system_norm"] = number(c.error_system_norm);
  j["inter_event_bound"] = number(c.inter_event_bound);
  return j;
}

}  // namespace

RunSummary summarize(const Scenario& s, const AnalyticConstants& c, const RunResult& r) {
  RunSummary m;
  m.error = r.error;
  m.status = !r.error                                        ? "ok"
             : r.error->kind == RunError::Kind::kNonFinite ? "non_finite"
                                                             : "contract_violation";
  m.steps = r.series.size();
  m.t_last = r.series.empty() ? 0.0 : r.series.back().t;
  m.arrival_times = r.arrival_times;
  if (!r.arrival_times.empty() &&
      std::all_of(r.arrival_times.begin(), r.arrival_times.end(), [](const auto& a) { return a.has_value(); })) {
    const auto [lo, hi] = std::minmax_element(r.arrival_times.begin(), r.arrival_times.end());
    m.arrival_spread = **hi - **lo;
  }
  m.coordination_epsilon = s.analysis.coordination_epsilon;
  m.coordination_time = coordination_achieved_time(r, m.coordination_epsilon);
  m.event_counts.assign(r.n, 0);
  for (const auto& ev : r.events) ++m.event_counts[ev.agent - 1];
  for (const auto& step : r.series) m.max_e_pf_norm = std::max(m.max_e_pf_norm, step.e_pf_norm);
  m.zeno = zeno_report(r, c.inter_event_bound);
  m.iss = iss_envelope_check(r, c.kappa1, c.lambda_tc, {s.analysis.iss_tail_fraction});
  m.settle_deadline = 3.0 / c.lambda_tc;
  return m;
}

void write_timeseries(std::ostream& out, const RunResult& r) {
  fmt::memory_buffer buf;
  buf.append(std::string_view("t"));
  for (int i = 1; i <= r.n; ++i) {
    fmt::format_to(std::back_inserter(buf),
                   ",gamma_{0},gamma_dot_{0},alpha_{0},accel_{0},p_x_{0},p_y_{0},p_z_{0},e_pf_norm_{0}", i);
  }
  buf.append(std::string_view(",xi_norm,gamma_spread\n"));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));

  for (const auto& s : r.series) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{}", s.t);
    for (const auto& a : s.agents) {
      fmt::format_to(std::back_inserter(buf), ",{},{},{},{},{},{},{},{}", a.gamma, a.gamma_dot, a.alpha, a.accel,
                     a.p.x(), a.p.y(), a.p.z(), a.e_pf_norm);
    }
    fmt::format_to(std::back_inserter(buf), ",{},{}\n", s.xi_norm, s.gamma_spread);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_events(std::ostream& out, const RunResult& r) {
  for (const auto& ev : r.events) out << format_event_line(ev) << '\n';
}

std::string certify_document(const Scenario& s, const AnalyticConstants& c) {
  json j;
  j["scenario"] = s.name;
  j["n"] = s.size();
  j["constants"] = constants_json(c);
  return j.dump(2) + "\n";
}

std::string summary_document(const Scenario& s, const AnalyticConstants& c, const RunSummary& m) {
  json j;
  j["scenario"] = s.name;
  j["status"] = m.status;
  if (m.error) {
    j["error"] = {{"t", number(m.error->t)}, {"message", m.error->message}};
  } else {
    j["error"] = nullptr;
  }
  j["n"] = s.size();
  j["dt"] = number(s.sim.dt);
  j["t_end"] = number(s.sim.t_end);
  j["t_f"] = number(s.trajectories.final_time());
  j["steps"] = m.steps;
  j["t_last"] = number(m.t_last);
  j["communication"] = s.sim.communication == Communication::kEveryStep ? "every_step" : "event_triggered";

  json arrivals = json::array();
  for (const auto& a : m.arrival_times) arrivals.push_back(optional_number(a));
  j["arrival_times"] = std::move(arrivals);
  j["arrival_spread"] = optional_number(m.arrival_spread);
  j["coordination_epsilon"] = number(m.coordination_epsilon);
  j["coordination_achieved_time"] = optional_number(m.coordination_time);
  j["event_counts"] = m.event_counts;
  j["max_e_pf_norm"] = number(m.max_e_pf_norm);
  j["rho"] = number(s.rho);

  json gaps = json::array();
  for (const auto& g : m.zeno.min_gap) gaps.push_back(optional_number(g));
  j["zeno"] = {{"min_gap", std::move(gaps)},
               {"overall_min_gap", optional_number(m.zeno.overall_min_gap)},
               {"bound", number(m.zeno.bound)},
               {"all_positive", m.zeno.all_positive},
               {"all_above_bound", m.zeno.all_above_bound},
               {"message", m.zeno.message}};

  json samples = json::array();
  for (const auto& p : m.iss.samples) {
    samples.push_back(json::array({number(p.t), number(p.measured), number(p.envelope), p.violation}));
  }
  j["iss"] = {{"xi0_norm", number(m.iss.xi0_norm)},
              {"floor", number(m.iss.floor)},
              {"kappa1", number(m.iss.kappa1)},
              {"lambda_tc", number(m.iss.lambda_tc)},
              {"violations", m.iss.violations},
              {"settle_time", optional_number(m.iss.settle_time)},
              {"settle_window_end", number(m.iss.settle_window_end)},
              {"settle_deadline", number(m.settle_deadline)},
              {"note", m.iss.note},
              {"sample_columns", json::array({"t", "measured", "envelope", "violation"})},
              {"samples", std::move(samples)}};
  j["constants"] = constants_json(c);
  return j.dump(2) + "\n";
}

}  // namespace tcoord
