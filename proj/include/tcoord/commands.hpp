#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tcoord {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitContract = 3,  // contract violation or non-finite state
  kExitIo = 4,
};

struct CommandOptions {
  std::filesystem::path scenario;
  std::vector<std::string> overrides;  // key=value
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
};

/// Prints one line per diagnostic.
int validate_command(const CommandOptions& opt, std::ostream& out, std::ostream& err);

/// Writes timeseries.csv, events.jsonl and summary.json into `out_dir`.
/// Nothing is written when loading or validation fails; files are staged
/// and renamed so an I/O failure leaves no partial artifacts.
int run_command(const CommandOptions& opt, const std::filesystem::path& out_dir, std::ostream& out,
                std::ostream& err);

/// Prints the analytic constants as JSON.
int certify_command(const CommandOptions& opt, std::ostream& out, std::ostream& err);

/// One run per value of `key`; writes point_<k>.json per grid point plus a
/// sweep.json index. Output does not depend on `jobs`.
int sweep_command(const CommandOptions& opt, const std::filesystem::path& out_dir, const std::string& key,
                  const std::vector<std::string>& values, int jobs, std::ostream& out, std::ostream& err);

}  // namespace tcoord
