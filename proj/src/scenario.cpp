#include "tcoord/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tcoord/analysis.hpp"

namespace tcoord {

using json = nlohmann::ordered_json;

int error_count(const Diagnostics& d) {
  return static_cast<int>(std::count_if(d.begin(), d.end(), [](const Diagnostic& x) {
    return x.severity == Diagnostic::Severity::kError;
  }));
}

int warning_count(const Diagnostics& d) {
  return static_cast<int>(d.size()) - error_count(d);
}

// ---------------------------------------------------------------------------
// validation

Diagnostics validate(const Scenario& s) {
  Diagnostics out;
  auto error = [&](std::string path, std::string msg) {
    out.push_back({Diagnostic::Severity::kError, std::move(path), std::move(msg)});
  };
  auto warning = [&](std::string path, std::string msg) {
    out.push_back({Diagnostic::Severity::kWarning, std::move(path), std::move(msg)});
  };

  const int n = s.size();
  if (!has_spanning_tree(s.graph)) error("graph.edges", "no directed spanning tree in the communication graph");
  for (const auto& [field, msg] : s.gains.problems()) error("gains." + field, msg);
  for (const auto& [field, msg] : s.threshold.problems()) error("threshold." + field, msg);

  if (!(s.pace.initial() > 0.0)) error("gamma_dot_d.initial", "desired pace must be positive");
  for (std::size_t k = 0; k < s.pace.breakpoints().size(); ++k) {
    if (!(s.pace.breakpoints()[k].value > 0.0)) {
      error("gamma_dot_d.breakpoints." + std::to_string(k) + ".value", "desired pace must be positive");
    }
  }

  if (!(s.rho > 0.0) || !std::isfinite(s.rho)) error("vehicle.rho", "error bound must be positive");
  if (static_cast<int>(s.agents.size()) != n || static_cast<int>(s.trajectories.size()) != n) {
    error("agents", "agent, trajectory and graph sizes differ");
    return out;
  }

  const double t_f = s.trajectories.final_time();
  double v_min = std::numeric_limits<double>::infinity();
  double v_max = -std::numeric_limits<double>::infinity();
  double initial_pf_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& a = s.agents[i];
    const std::string base = "agents." + std::to_string(i);
    if (!(a.gamma0 >= 0.0 && a.gamma0 <= t_f)) error(base + ".gamma0", "must lie in [0, t_f]");
    if (!std::isfinite(a.gamma_dot0)) error(base + ".gamma_dot0", "must be finite");
    if (!a.initial_offset.allFinite()) error(base + ".initial_offset", "must be finite");
    for (const auto& [field, msg] : a.vehicle.problems()) error(base + ".vehicle." + field, msg);
    v_min = std::min(v_min, a.vehicle.v_min);
    v_max = std::max(v_max, a.vehicle.v_max);
    initial_pf_sq += a.initial_offset.squaredNorm();
  }
  if (std::sqrt(initial_pf_sq) > s.rho) {
    error("agents", "initial path-following error exceeds vehicle.rho");
  }

  std::vector<VehicleState> windows(n);
  for (std::size_t k = 0; k < s.disturbances.size(); ++k) {
    const auto& d = s.disturbances[k];
    const std::string base = "disturbances." + std::to_string(k);
    if (d.agent < 1 || d.agent > n) {
      error(base + ".agent", "unknown agent id");
      continue;
    }
    try {
      windows[d.agent - 1] = inject_disturbance(windows[d.agent - 1], d.window);
    } catch (const std::invalid_argument& e) {
      error(base, e.what());
    }
  }

  if (!(s.sim.dt > 0.0) || !std::isfinite(s.sim.dt)) error("sim.dt", "time step must be positive");
  if (!(s.sim.t_end > 0.0) || !std::isfinite(s.sim.t_end)) error("sim.t_end", "end time must be positive");

  if (!(s.analysis.beta > 0.0)) error("analysis.beta", "must be positive");
  if (!(s.analysis.kappa2 >= 0.0)) error("analysis.kappa2", "must be non-negative");
  if (!(s.analysis.gamma_ddot_d_max >= 0.0)) error("analysis.gamma_ddot_d_max", "must be non-negative");
  if (!(s.analysis.coordination_epsilon > 0.0)) error("analysis.coordination_epsilon", "must be positive");
  if (!(s.analysis.iss_tail_fraction > 0.0 && s.analysis.iss_tail_fraction <= 1.0)) {
    error("analysis.iss_tail_fraction", "must lie in (0, 1]");
  }

  if (error_count(out) > 0) return out;

  if (!(s.gains.eta > v_max - v_min)) {
    warning("gains.eta", "eta should exceed v_max - v_min (" + std::to_string(v_max - v_min) + ")");
  }
  if (s.sim.communication == Communication::kEventTriggered) {
    try {
      const auto constants = certify(s);
      if (s.sim.dt > constants.inter_event_bound / 10.0) {
        warning("sim.dt", "dt exceeds one tenth of the inter-event lower bound (" +
                              std::to_string(constants.inter_event_bound) + " s)");
      }
    } catch (const std::invalid_argument&) {
      // u_bar overflowed
      warning("gains", "inter-event lower bound is not computable for these gains");
    }
  }
  const auto sep = min_separation(s.trajectories);
  if (sep.distance < s.analysis.min_separation) {
    warning("trajectories", "agents " + std::to_string(sep.agent_a) + " and " + std::to_string(sep.agent_b) +
                                " come within " + std::to_string(sep.distance) + " m at virtual time " +
                                std::to_string(sep.virtual_time));
  }
  return out;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ScenarioError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ScenarioError(join(path, key), "unknown field");
    }
  }
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ScenarioError(join(path, key), "missing field");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ScenarioError(path, "expected a number");
  return v.get<double>();
}

double number(const json& obj, const std::string& path, const char* key) {
  return number(field(obj, path, key), join(path, key));
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, path, key) : fallback;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ScenarioError(path, "expected an integer");
  return v.get<int>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ScenarioError(path, "expected an array");
  return v;
}

Vec3 vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ScenarioError(path, "expected [x, y, z]");
  return {number(v[0], path + ".0"), number(v[1], path + ".1"), number(v[2], path + ".2")};
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

PFConfig parse_vehicle(const json& obj, const std::string& path, PFConfig base, bool allow_rho) {
  if (allow_rho) {
    check_keys(obj, path, {"k_p", "v_min", "v_max", "rho"});
  } else {
    check_keys(obj, path, {"k_p", "v_min", "v_max"});
  }
  base.k_p = number_or(obj, path, "k_p", base.k_p);
  base.v_min = number_or(obj, path, "v_min", base.v_min);
  base.v_max = number_or(obj, path, "v_max", base.v_max);
  base.rho = number_or(obj, path, "rho", base.rho);
  return base;
}

Scenario parse_document(const json& doc) {
  check_keys(doc, "", {"name", "seed", "agents", "graph", "trajectories", "gains", "threshold", "gamma_dot_d",
                       "vehicle", "sim", "analysis", "disturbances"});

  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ScenarioError("name", "expected a string");
    name = doc["name"].get<std::string>();
  }
  std::uint64_t seed = 0;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ScenarioError("seed", "expected an unsigned integer");
    seed = doc["seed"].get<std::uint64_t>();
  }

  // vehicle defaults
  const PFConfig fleet = parse_vehicle(field(doc, "", "vehicle"), "vehicle", PFConfig{}, true);

  // agents
  const json& agents_doc = array(field(doc, "", "agents"), "agents");
  const int n = static_cast<int>(agents_doc.size());
  std::vector<AgentInit> agents(n);
  std::vector<char> seen(n, 0);
  for (int k = 0; k < n; ++k) {
    const std::string path = "agents." + std::to_string(k);
    const json& a = agents_doc[k];
    check_keys(a, path, {"id", "gamma0", "gamma_dot0", "initial_offset", "vehicle"});
    const int id = integer(field(a, path, "id"), path + ".id");
    if (id < 1 || id > n || seen[id - 1]) throw ScenarioError(path + ".id", "ids must be a permutation of 1..n");
    seen[id - 1] = 1;
    AgentInit init;
    init.gamma0 = number_or(a, path, "gamma0", 0.0);
    init.gamma_dot0 = number_or(a, path, "gamma_dot0", 1.0);
    if (a.contains("initial_offset")) init.initial_offset = vec3(a["initial_offset"], path + ".initial_offset");
    init.vehicle = a.contains("vehicle") ? parse_vehicle(a["vehicle"], path + ".vehicle", fleet, false) : fleet;
    agents[id - 1] = init;
  }

  // graph
  const json& graph_doc = field(doc, "", "graph");
  check_keys(graph_doc, "graph", {"edges"});
  std::vector<Digraph::Edge> edges;
  const json& edges_doc = array(field(graph_doc, "graph", "edges"), "graph.edges");
  for (std::size_t k = 0; k < edges_doc.size(); ++k) {
    const std::string path = "graph.edges." + std::to_string(k);
    const json& e = edges_doc[k];
    if (!e.is_array() || e.size() != 2) throw ScenarioError(path, "expected [i, j]");
    edges.emplace_back(integer(e[0], path + ".0"), integer(e[1], path + ".1"));
  }
  std::optional<Digraph> graph;
  try {
    graph.emplace(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("graph.edges", e.what());
  }

  // trajectories
  const json& traj_doc = field(doc, "", "trajectories");
  check_keys(traj_doc, "trajectories", {"t_f", "paths"});
  const double t_f = number(traj_doc, "trajectories", "t_f");
  const json& paths = array(field(traj_doc, "trajectories", "paths"), "trajectories.paths");
  std::vector<std::optional<BezierTrajectory>> by_agent(n);
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const std::string path = "trajectories.paths." + std::to_string(k);
    const json& p = paths[k];
    check_keys(p, path, {"agent", "control_points"});
    const int id = integer(field(p, path, "agent"), path + ".agent");
    if (id < 1 || id > n || by_agent[id - 1]) {
      throw ScenarioError(path + ".agent", "each agent needs exactly one path");
    }
    const json& cps = array(field(p, path, "control_points"), path + ".control_points");
    std::vector<Vec3> points;
    for (std::size_t c = 0; c < cps.size(); ++c) {
      points.push_back(vec3(cps[c], path + ".control_points." + std::to_string(c)));
    }
    try {
      by_agent[id - 1].emplace(std::move(points), t_f);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(path, e.what());
    }
  }
  std::vector<BezierTrajectory> trajectories;
  for (int i = 0; i < n; ++i) {
    if (!by_agent[i]) throw ScenarioError("trajectories.paths", "no path for agent " + std::to_string(i + 1));
    trajectories.push_back(std::move(*by_agent[i]));
  }

  // gains
  const json& gains_doc = field(doc, "", "gains");
  check_keys(gains_doc, "gains", {"a", "b", "k_pf", "eta"});
  GainSet gains{number(gains_doc, "gains", "a"), number(gains_doc, "gains", "b"),
                number(gains_doc, "gains", "k_pf"), number(gains_doc, "gains", "eta")};

  const json& thr_doc = field(doc, "", "threshold");
  check_keys(thr_doc, "threshold", {"c1", "c2", "c3"});
  ThresholdFunction threshold{number(thr_doc, "threshold", "c1"), number_or(thr_doc, "threshold", "c2", 0.0),
                              number_or(thr_doc, "threshold", "c3", 0.0)};

  const json& pace_doc = field(doc, "", "gamma_dot_d");
  check_keys(pace_doc, "gamma_dot_d", {"initial", "breakpoints"});
  std::vector<PaceProfile::Breakpoint> breakpoints;
  if (pace_doc.contains("breakpoints")) {
    const json& bps = array(pace_doc["breakpoints"], "gamma_dot_d.breakpoints");
    for (std::size_t k = 0; k < bps.size(); ++k) {
      const std::string path = "gamma_dot_d.breakpoints." + std::to_string(k);
      check_keys(bps[k], path, {"t", "value"});
      breakpoints.push_back({number(bps[k], path, "t"), number(bps[k], path, "value")});
    }
  }
  PaceProfile pace;
  try {
    pace = PaceProfile(number(pace_doc, "gamma_dot_d", "initial"), std::move(breakpoints));
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("gamma_dot_d", e.what());
  }

  SimSettings sim;
  const json& sim_doc = field(doc, "", "sim");
  check_keys(sim_doc, "sim", {"dt", "t_end", "communication"});
  sim.dt = number(sim_doc, "sim", "dt");
  sim.t_end = number(sim_doc, "sim", "t_end");
  if (sim_doc.contains("communication")) {
    const json& c = sim_doc["communication"];
    if (c == "event_triggered") {
      sim.communication = Communication::kEventTriggered;
    } else if (c == "every_step") {
      sim.communication = Communication::kEveryStep;
    } else {
      throw ScenarioError("sim.communication", "expected \"event_triggered\" or \"every_step\"");
    }
  }

  AnalysisSettings analysis;
  if (doc.contains("analysis")) {
    const json& an = doc["analysis"];
    check_keys(an, "analysis", {"beta", "kappa2", "gamma_ddot_d_max", "coordination_epsilon", "min_separation",
                                "iss_tail_fraction"});
    analysis.beta = number_or(an, "analysis", "beta", analysis.beta);
    analysis.kappa2 = number_or(an, "analysis", "kappa2", analysis.kappa2);
    analysis.gamma_ddot_d_max = number_or(an, "analysis", "gamma_ddot_d_max", analysis.gamma_ddot_d_max);
    analysis.coordination_epsilon =
        number_or(an, "analysis", "coordination_epsilon", analysis.coordination_epsilon);
    analysis.min_separation = number_or(an, "analysis", "min_separation", analysis.min_separation);
    analysis.iss_tail_fraction = number_or(an, "analysis", "iss_tail_fraction", analysis.iss_tail_fraction);
  }

  std::vector<AgentDisturbance> disturbances;
  if (doc.contains("disturbances")) {
    const json& ds = array(doc["disturbances"], "disturbances");
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const std::string path = "disturbances." + std::to_string(k);
      check_keys(ds[k], path, {"agent", "t_start", "t_end", "velocity"});
      AgentDisturbance d;
      d.agent = integer(field(ds[k], path, "agent"), path + ".agent");
      d.window.t_start = number(ds[k], path, "t_start");
      d.window.t_end = number(ds[k], path, "t_end");
      d.window.velocity = vec3(field(ds[k], path, "velocity"), path + ".velocity");
      disturbances.push_back(d);
    }
  }

  return Scenario{std::move(name),
                  std::move(*graph),
                  TrajectorySet(std::move(trajectories)),
                  gains,
                  threshold,
                  std::move(pace),
                  std::move(agents),
                  std::move(disturbances),
                  fleet.rho,
                  sim,
                  analysis,
                  seed};
}

json vehicle_json(const PFConfig& v, bool with_rho) {
  json j;
  j["k_p"] = v.k_p;
  j["v_min"] = v.v_min;
  j["v_max"] = v.v_max;
  if (with_rho) j["rho"] = v.rho;
  return j;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("<document>", e.what());
  }
  return parse_document(doc);
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["seed"] = s.seed;

  PFConfig fleet = s.agents.empty() ? PFConfig{} : s.agents.front().vehicle;
  fleet.rho = s.rho;

  json agents = json::array();
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& a = s.agents[i];
    json j;
    j["id"] = i + 1;
    j["gamma0"] = a.gamma0;
    j["gamma_dot0"] = a.gamma_dot0;
    j["initial_offset"] = to_json(a.initial_offset);
    PFConfig own = a.vehicle;
    own.rho = fleet.rho;
    if (!(own == fleet)) j["vehicle"] = vehicle_json(a.vehicle, false);
    agents.push_back(std::move(j));
  }
  doc["agents"] = std::move(agents);

  json edges = json::array();
  for (const auto& [i, j] : s.graph.edges()) edges.push_back(json::array({i, j}));
  doc["graph"]["edges"] = std::move(edges);

  doc["trajectories"]["t_f"] = s.trajectories.final_time();
  json paths = json::array();
  for (std::size_t i = 0; i < s.trajectories.size(); ++i) {
    json cps = json::array();
    for (const auto& p : s.trajectories[i].control_points()) cps.push_back(to_json(p));
    paths.push_back({{"agent", i + 1}, {"control_points", std::move(cps)}});
  }
  doc["trajectories"]["paths"] = std::move(paths);

  doc["gains"] = {{"a", s.gains.a}, {"b", s.gains.b}, {"k_pf", s.gains.k_pf}, {"eta", s.gains.eta}};
  doc["threshold"] = {{"c1", s.threshold.c1}, {"c2", s.threshold.c2}, {"c3", s.threshold.c3}};

  json bps = json::array();
  for (const auto& bp : s.pace.breakpoints()) bps.push_back({{"t", bp.t}, {"value", bp.value}});
  doc["gamma_dot_d"] = {{"initial", s.pace.initial()}, {"breakpoints", std::move(bps)}};

  doc["vehicle"] = vehicle_json(fleet, true);
  doc["sim"] = {{"dt", s.sim.dt},
                {"t_end", s.sim.t_end},
                {"communication",
                 s.sim.communication == Communication::kEveryStep ? "every_step" : "event_triggered"}};
  doc["analysis"] = {{"beta", s.analysis.beta},
                     {"kappa2", s.analysis.kappa2},
                     {"gamma_ddot_d_max", s.analysis.gamma_ddot_d_max},
                     {"coordination_epsilon", s.analysis.coordination_epsilon},
                     {"min_separation", s.analysis.min_separation},
                     {"iss_tail_fraction", s.analysis.iss_tail_fraction}};

  json ds = json::array();
  for (const auto& d : s.disturbances) {
    ds.push_back({{"agent", d.agent},
                  {"t_start", d.window.t_start},
                  {"t_end", d.window.t_end},
                  {"velocity", to_json(d.window.velocity)}});
  }
  doc["disturbances"] = std::move(ds);
  return doc.dump(2) + "\n";
}

std::string apply_overrides(std::string_view text, const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("<document>", e.what());
  }
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ScenarioError(item, "override must look like key=value");
    const std::string key = item.substr(0, eq);
    const std::string raw = item.substr(eq + 1);

    std::string pointer;
    std::stringstream parts(key);
    for (std::string part; std::getline(parts, part, '.');) pointer += "/" + part;
    const json::json_pointer ptr(pointer);
    if (!doc.contains(ptr.parent_pointer())) throw ScenarioError(key, "override target does not exist");

    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    try {
      doc[ptr] = std::move(value);
    } catch (const json::exception& e) {
      throw ScenarioError(key, e.what());
    }
  }
  return doc.dump();
}

Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  const std::string text = buffer.str();
  return parse_scenario(overrides.empty() ? text : apply_overrides(text, overrides));
}

}  // namespace tcoord
