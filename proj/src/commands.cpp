#include "tcoord/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "tcoord/analysis.hpp"
#include "tcoord/report.hpp"
#include "tcoord/scenario.hpp"
#include "tcoord/sim.hpp"

namespace tcoord {

namespace fs = std::filesystem;

namespace {

const char* severity_name(Diagnostic::Severity s) {
  return s == Diagnostic::Severity::kError ? "error" : "warning";
}

void print_diagnostics(const Diagnostics& d, std::ostream& os) {
  for (const auto& item : d) os << severity_name(item.severity) << " " << item.path << ": " << item.message << "\n";
}

Scenario load(const CommandOptions& opt) {
  if (fs::is_directory(opt.scenario)) throw IoError("scenario path is a directory: " + opt.scenario.string());
  Scenario s = load_scenario(opt.scenario, opt.overrides);
  if (opt.dt) s.sim.dt = *opt.dt;
  if (opt.seed) s.seed = *opt.seed;
  return s;
}

// Load and validate; returns an exit code on failure.
std::optional<int> prepare(const CommandOptions& opt, std::optional<Scenario>& s, std::ostream& err) {
  try {
    s.emplace(load(opt));
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ScenarioError& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitValidation;
  }
  const Diagnostics d = validate(*s);
  if (error_count(d) > 0) {
    print_diagnostics(d, err);
    return kExitValidation;
  }
  return std::nullopt;
}

using Writer = std::function<void(std::ostream&)>;

// Stage every file as <name>.tmp, then rename. Any failure removes what was staged.
void write_artifacts(const fs::path& dir, const std::vector<std::pair<std::string, Writer>>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<fs::path> staged;
  auto cleanup = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [name, writer] : files) {
    const fs::path tmp = dir / (name + ".tmp");
    staged.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) writer(out);
    out.flush();
    if (!out) {
      cleanup();
      throw IoError("cannot write " + tmp.string());
    }
  }
  for (std::size_t k = 0; k < files.size(); ++k) {
    fs::rename(staged[k], dir / files[k].first, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot move " + staged[k].string() + ": " + ec.message());
    }
  }
}

int exit_for(const RunResult& r) { return r.ok() ? kExitOk : kExitContract; }

}  // namespace

int validate_command(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<Scenario> s;
  try {
    s.emplace(load(opt));
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ScenarioError& e) {
    err << "error " << e.what() << "\n";
    return kExitValidation;
  }
  const Diagnostics d = validate(*s);
  print_diagnostics(d, out);
  out << fmt::format("{}: {} error(s), {} warning(s)\n", opt.scenario.string(), error_count(d), warning_count(d));
  return error_count(d) > 0 ? kExitValidation : kExitOk;
}

int certify_command(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<Scenario> loaded;
  if (auto code = prepare(opt, loaded, err)) return *code;
  const Scenario& s = *loaded;
  try {
    out << certify_document(s, certify(s));
  } catch (const NotStabilizingError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

int run_command(const CommandOptions& opt, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  std::optional<Scenario> loaded;
  if (auto code = prepare(opt, loaded, err)) return *code;
  const Scenario& s = *loaded;
  const AnalyticConstants c = certify(s);
  const RunResult r = run(s);
  const RunSummary m = summarize(s, c, r);
  try {
    write_artifacts(out_dir, {
                                 {"timeseries.csv", [&](std::ostream& os) { write_timeseries(os, r); }},
                                 {"events.jsonl", [&](std::ostream& os) { write_events(os, r); }},
                                 {"summary.json", [&](std::ostream& os) { os << summary_document(s, c, m); }},
                             });
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
  if (!r.ok()) {
    err << fmt::format("run aborted at t = {}: {}\n", r.error->t, r.error->message);
    return exit_for(r);
  }
  out << fmt::format("{}: {} steps, {} events, artifacts in {}\n", s.name, r.series.size(), r.events.size(),
                     out_dir.string());
  return kExitOk;
}

int sweep_command(const CommandOptions& opt, const fs::path& out_dir, const std::string& key,
                  const std::vector<std::string>& values, int jobs, std::ostream& out, std::ostream& err) {
  struct Point {
    int code = kExitOk;
    std::string summary;
    std::string message;
    nlohmann::ordered_json brief;
  };
  std::vector<Point> points(values.size());

  auto evaluate = [&](std::size_t k) {
    Point& p = points[k];
    CommandOptions point_opt = opt;
    point_opt.overrides.push_back(key + "=" + values[k]);
    std::optional<Scenario> loaded;
    std::ostringstream diag;
    if (auto code = prepare(point_opt, loaded, diag)) {
      p.code = *code;
      p.message = diag.str();
      return;
    }
    const Scenario& s = *loaded;
    try {
      const AnalyticConstants c = certify(s);
      const RunResult r = run(s);
      const RunSummary m = summarize(s, c, r);
      p.code = exit_for(r);
      p.summary = summary_document(s, c, m);
      p.brief = {{"status", m.status},
                 {"lambda_tc", c.lambda_tc},
                 {"inter_event_bound", c.inter_event_bound},
                 {"coordination_achieved_time",
                  m.coordination_time ? nlohmann::ordered_json(*m.coordination_time) : nullptr},
                 {"arrival_spread", m.arrival_spread ? nlohmann::ordered_json(*m.arrival_spread) : nullptr},
                 {"event_counts", m.event_counts}};
    } catch (const std::exception& e) {
      p.code = kExitValidation;
      p.message = e.what();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs > 0 ? jobs : 1, 1, std::max<std::size_t>(1, values.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < values.size(); k = next++) evaluate(k);
    });
  }
  for (auto& t : pool) t.join();

  nlohmann::ordered_json index;
  index["key"] = key;
  index["points"] = nlohmann::ordered_json::array();
  std::vector<std::pair<std::string, Writer>> files;
  int code = kExitOk;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Point& p = points[k];
    nlohmann::ordered_json entry{{"value", values[k]}, {"exit_code", p.code}};
    if (!p.summary.empty()) {
      const std::string name = fmt::format("point_{:03d}.json", k);
      entry["summary"] = name;
      entry["result"] = p.brief;
      files.emplace_back(name, [&p](std::ostream& os) { os << p.summary; });
    } else {
      entry["message"] = p.message;
      err << fmt::format("{}={}: {}", key, values[k], p.message);
    }
    index["points"].push_back(std::move(entry));
    if (code == kExitOk) code = p.code;
  }
  const std::string index_text = index.dump(2) + "\n";
  files.emplace_back("sweep.json", [&](std::ostream& os) { os << index_text; });
  try {
    write_artifacts(out_dir, files);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
  out << fmt::format("{} point(s) over {} written to {}\n", values.size(), key, out_dir.string());
  return code;
}

}  // namespace tcoord
