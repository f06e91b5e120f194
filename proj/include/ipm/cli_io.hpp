#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ipm {

enum class Command { profile, shoot, evolve, decay, coercivity, spectrum, norms };

std::string to_string(Command c);

// Unset optionals take per-command defaults (see resolved()).
struct RunConfig {
  Command command = Command::profile;
  double A = 1.0;
  std::optional<double> target_L;
  std::optional<std::size_t> n;
  std::optional<std::string> grid;  // "clustered" | "uniform"
  std::string frame = "t";          // evolve: "t" | "s"
  double dt = 1e-2;
  double t_max = 0.9;
  double s_max = 5.0;
  std::optional<double> cutoff_a;  // decay; default 0.02·L
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  std::optional<double> l1, B;
  std::string output_dir;

  // n and grid filled in: profile/evolve/decay 256, coercivity/norms 192
  // clustered, spectrum 128 uniform; evolve and decay default to uniform.
  RunConfig resolved() const;
  nlohmann::json to_json() const;
};

// Keys of a JSON config file; each is also a flag with '_' spelled '-'.
const std::vector<std::string>& config_keys();

// Applies a JSON object onto cfg. Throws UsageError naming any unknown key or
// mistyped value.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

// Throws UsageError when a field is outside its module's domain.
void validate(const RunConfig& cfg);

// argv without the program name: <command> [--config file.json] [--flag value]...
// Flags override the file. Throws UsageError; returns nullopt for --help.
std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::string* help = nullptr);

std::string sha256_hex(const std::filesystem::path& file);

// Writes rows with a header line, numbers with 17 significant digits.
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct RunOutcome {
  int exit_code = 0;  // 0 success, 1 scientific failure
  nlohmann::json manifest;
  std::filesystem::path directory;
};

// Output directory: cfg.output_dir, else $IPM_OUTPUT_DIR, else the working
// directory. Writes manifest.json with {command, config, version, grids,
// wall_time_s, results, files: [{name, sha256}]}.
RunOutcome run(const RunConfig& cfg);

// Full CLI: parse, run, report. Returns the process exit code.
int cli_main(const std::vector<std::string>& args);

}  // namespace ipm
