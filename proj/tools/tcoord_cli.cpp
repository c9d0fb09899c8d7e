#include <iostream>

#include <CLI11.hpp>

#include "tcoord/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Event-triggered time coordination of multi-vehicle path following"};
  app.require_subcommand(1);

  tcoord::CommandOptions opt;
  std::string scenario;
  std::string out_dir = "out";
  double dt = 0.0;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "scenario JSON file")->required();
    sub->add_option("--set", opt.overrides, "override key=value (dotted key), repeatable");
    sub->add_option("--dt", dt, "integration step [s], overrides sim.dt")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "reserved; runs are deterministic");
  };

  auto* validate = app.add_subcommand("validate", "check a scenario and print diagnostics");
  common(validate);

  auto* run = app.add_subcommand("run", "simulate and write timeseries.csv, events.jsonl, summary.json");
  common(run);
  run->add_option("--out", out_dir, "output directory");

  auto* certify = app.add_subcommand("certify", "print the analytic constants");
  common(certify);

  std::string key;
  std::vector<std::string> values;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "one run per value of an override key");
  common(sweep);
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--key", key, "dotted key to vary")->required();
  sweep->add_option("--values", values, "values for the key")->required()->delimiter(',');
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tcoord::kExitValidation;
  }

  opt.scenario = scenario;
  for (auto* sub : {validate, run, certify, sweep}) {
    if (sub->parsed()) {
      if (sub->count("--dt") > 0) opt.dt = dt;
      if (sub->count("--seed") > 0) opt.seed = seed;
    }
  }

  if (validate->parsed()) return tcoord::validate_command(opt, std::cout, std::cerr);
  if (certify->parsed()) return tcoord::certify_command(opt, std::cout, std::cerr);
  if (run->parsed()) return tcoord::run_command(opt, out_dir, std::cout, std::cerr);
  return tcoord::sweep_command(opt, out_dir, key, values, jobs, std::cout, std::cerr);
}
