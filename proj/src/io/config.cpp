#include <cmath>
#include <fstream>
#include <numbers>

#include "CLI11.hpp"
#include "ipm/cli_io.hpp"
#include "ipm/errors.hpp"

namespace ipm {
namespace {

const std::vector<std::pair<std::string, Command>> kCommands{
    {"profile", Command::profile},       {"shoot", Command::shoot},
    {"evolve", Command::evolve},         {"decay", Command::decay},
    {"coercivity", Command::coercivity}, {"spectrum", Command::spectrum},
    {"norms", Command::norms}};

Command command_from(const std::string& s) {
  for (const auto& [name, c] : kCommands)
    if (name == s) return c;
  throw UsageError("unknown command '" + s + "'");
}

template <class T>
T get(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [name, k] : kCommands)
    if (k == c) return name;
  return "?";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "command", "A", "target_L", "n",       "grid", "frame", "dt", "t_max",
      "s_max",   "cutoff_a", "seed", "samples", "l1", "B",     "output_dir"};
  return keys;
}

RunConfig RunConfig::resolved() const {
  RunConfig c = *this;
  if (!c.n) {
    switch (c.command) {
      case Command::coercivity:
      case Command::norms: c.n = 192; break;
      case Command::spectrum: c.n = 128; break;
      default: c.n = 256;
    }
  }
  if (!c.grid) {
    const bool uniform = c.command == Command::evolve || c.command == Command::decay ||
                         c.command == Command::spectrum;
    c.grid = uniform ? "uniform" : "clustered";
  }
  return c;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = to_string(command);
  j["A"] = A;
  j["target_L"] = target_L ? nlohmann::json(*target_L) : nlohmann::json();
  j["n"] = n ? nlohmann::json(*n) : nlohmann::json();
  j["grid"] = grid ? nlohmann::json(*grid) : nlohmann::json();
  j["frame"] = frame;
  j["dt"] = dt;
  j["t_max"] = t_max;
  j["s_max"] = s_max;
  j["cutoff_a"] = cutoff_a ? nlohmann::json(*cutoff_a) : nlohmann::json();
  j["seed"] = seed;
  j["samples"] = samples;
  j["l1"] = l1 ? nlohmann::json(*l1) : nlohmann::json();
  j["B"] = B ? nlohmann::json(*B) : nlohmann::json();
  j["output_dir"] = output_dir;
  return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw UsageError("unknown config key '" + key + "'");
    if (v.is_null()) continue;
    if (key == "command") c.command = command_from(get<std::string>(v, key));
    else if (key == "A") c.A = get<double>(v, key);
    else if (key == "target_L") c.target_L = get<double>(v, key);
    else if (key == "n") c.n = get<std::size_t>(v, key);
    else if (key == "grid") c.grid = get<std::string>(v, key);
    else if (key == "frame") c.frame = get<std::string>(v, key);
    else if (key == "dt") c.dt = get<double>(v, key);
    else if (key == "t_max") c.t_max = get<double>(v, key);
    else if (key == "s_max") c.s_max = get<double>(v, key);
    else if (key == "cutoff_a") c.cutoff_a = get<double>(v, key);
    else if (key == "seed") c.seed = get<std::uint64_t>(v, key);
    else if (key == "samples") c.samples = get<std::size_t>(v, key);
    else if (key == "l1") c.l1 = get<double>(v, key);
    else if (key == "B") c.B = get<double>(v, key);
    else if (key == "output_dir") c.output_dir = get<std::string>(v, key);
  }
}

void validate(const RunConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
  };
  need(std::isfinite(c.A) && c.A > 0.0, "A must be positive");
  if (c.target_L) need(*c.target_L > 0.0 && *c.target_L < std::numbers::pi / 2, "target_L must lie in (0, pi/2)");
  if (c.n) need(*c.n >= 16 && *c.n <= 4096, "n must lie in [16, 4096]");
  if (c.grid) need(*c.grid == "clustered" || *c.grid == "uniform", "grid must be clustered or uniform");
  need(c.frame == "t" || c.frame == "s", "frame must be t or s");
  need(c.dt > 0.0, "dt must be positive");
  need(c.t_max > 0.0 && c.t_max < 1.0, "t_max must lie in (0, 1)");
  need(c.s_max > 0.0, "s_max must be positive");
  if (c.cutoff_a) need(*c.cutoff_a >= 0.0, "cutoff_a must be non-negative");
  need(c.samples >= 1, "samples must be at least 1");
  if (c.l1) need(*c.l1 > 0.0 && *c.l1 < 1.0, "l1 must lie in (0, 1)");
  if (c.B) need(*c.B > 0.0, "B must be positive");
  const RunConfig r = c.resolved();
  if (r.command == Command::coercivity || r.command == Command::spectrum)
    need(*r.n <= 1024, "dense operator runs need n <= 1024");
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::string* help) {
  CLI::App app{"Self-similar blow-up numerics for the inviscid porous medium equation", "ipm"};
  std::string command, config_path;
  std::optional<double> A, target_L, dt, t_max, s_max, cutoff_a, l1, B;
  std::optional<std::size_t> n, samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid, frame, output_dir;

  std::vector<std::string> names;
  for (const auto& [name, c] : kCommands) names.push_back(name);
  app.add_option("command", command, "experiment to run")->required()->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "JSON file with the same keys as the flags");
  app.add_option("--A", A, "profile parameter A = -M''(0)/2");
  app.add_option("--target-L", target_L, "shoot: wanted root angle");
  app.add_option("--n", n, "grid nodes");
  app.add_option("--grid", grid, "clustered | uniform");
  app.add_option("--frame", frame, "evolve: t | s");
  app.add_option("--dt", dt, "time step");
  app.add_option("--t-max", t_max, "evolve: final physical time");
  app.add_option("--s-max", s_max, "evolve/decay: final logarithmic time");
  app.add_option("--cutoff-a", cutoff_a, "decay: truncation width (default 0.02 L)");
  app.add_option("--seed", seed, "sample seed");
  app.add_option("--samples", samples, "coercivity/norms: number of samples");
  app.add_option("--l1", l1, "weight parameter l1");
  app.add_option("--B", B, "weight parameter B");
  app.add_option("--output-dir", output_dir, "output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    if (help) *help = app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig c;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot open config file '" + config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    apply_json(c, j);
  }
  c.command = command_from(command);
  if (A) c.A = *A;
  if (target_L) c.target_L = target_L;
  if (n) c.n = n;
  if (grid) c.grid = grid;
  if (frame) c.frame = *frame;
  if (dt) c.dt = *dt;
  if (t_max) c.t_max = *t_max;
  if (s_max) c.s_max = *s_max;
  if (cutoff_a) c.cutoff_a = cutoff_a;
  if (seed) c.seed = *seed;
  if (samples) c.samples = *samples;
  if (l1) c.l1 = l1;
  if (B) c.B = B;
  if (output_dir) c.output_dir = *output_dir;
  validate(c);
  return c;
}

}  // namespace ipm
