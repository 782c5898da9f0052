#pragma once

// Experiment configuration: a flat sectioned key-value file, dotted-key
// overrides, fail-fast validation. Unknown keys are errors; validation
// collects every violated field before reporting.
//
//   [environment]
//   name = deep_sea
//   size = 10
//   [strategy]
//   name = vdsc
//   ...
//
// serialize() emits the effective config in the same format, which the
// harness writes next to the results so any run can be reproduced from its
// own output directory.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vdsc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // [environment]
  std::string env_name = "deep_sea";
  int env_size = 10;
  int env_width = 8;
  int env_height = 8;
  int env_max_episode_steps = 0;  // 0 = per-environment default

  // [strategy]
  std::string strategy_name = "vdsc";
  int vpd_k = 5;
  int simhash_kappa = 256;
  double rho_initial = 1.0;
  double rho_final = 0.01;
  long decay_steps = 25000;
  double var_epsilon = 1e-8;

  // [agent]
  double agent_alpha = 0.1;
  double agent_gamma = 0.99;

  // [run]
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  long total_steps = 50000;
  long eval_interval = 1000;
  int smoothing_window = 10;
  bool trace = false;
  long trace_start = 0;
  int trace_episodes = 0;  // 0 = unbounded when trace is on
  std::string out_dir = "out";

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text, const std::string& origin);

  // "section.key=value", applied after file parse and before validation.
  void apply_override(const std::string& assignment);

  // Throws ConfigError listing every violated field.
  void validate() const;

  std::string serialize() const;

 private:
  void set(const std::string& dotted_key, const std::string& value);
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline long parse_long(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not an integer: '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("key '" + key + "': not an integer: '" + value + "'");
  return out;
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not a number: '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("key '" + key + "': not a number: '" + value + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("key '" + key + "': not a boolean: '" + value + "'");
}

inline std::vector<std::uint64_t> parse_seed_list(const std::string& key,
                                                  const std::string& value) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("key '" + key + "': empty entry in seed list");
    out.push_back(static_cast<std::uint64_t>(parse_long(key, item)));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty seed list");
  return out;
}

}  // namespace detail

inline void ExperimentConfig::set(const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "environment.name") env_name = value;
  else if (key == "environment.size") env_size = static_cast<int>(parse_long(key, value));
  else if (key == "environment.width") env_width = static_cast<int>(parse_long(key, value));
  else if (key == "environment.height") env_height = static_cast<int>(parse_long(key, value));
  else if (key == "environment.max_episode_steps")
    env_max_episode_steps = static_cast<int>(parse_long(key, value));
  else if (key == "strategy.name") strategy_name = value;
  else if (key == "strategy.k") vpd_k = static_cast<int>(parse_long(key, value));
  else if (key == "strategy.kappa") simhash_kappa = static_cast<int>(parse_long(key, value));
  else if (key == "strategy.rho_initial") rho_initial = parse_double(key, value);
  else if (key == "strategy.rho_final") rho_final = parse_double(key, value);
  else if (key == "strategy.decay_steps") decay_steps = parse_long(key, value);
  else if (key == "strategy.var_epsilon") var_epsilon = parse_double(key, value);
  else if (key == "agent.alpha") agent_alpha = parse_double(key, value);
  else if (key == "agent.gamma") agent_gamma = parse_double(key, value);
  else if (key == "run.seeds") seeds = parse_seed_list(key, value);
  else if (key == "run.total_steps") total_steps = parse_long(key, value);
  else if (key == "run.eval_interval") eval_interval = parse_long(key, value);
  else if (key == "run.smoothing_window")
    smoothing_window = static_cast<int>(parse_long(key, value));
  else if (key == "run.trace") trace = parse_bool(key, value);
  else if (key == "run.trace_start") trace_start = parse_long(key, value);
  else if (key == "run.trace_episodes")
    trace_episodes = static_cast<int>(parse_long(key, value));
  else if (key == "run.out_dir") out_dir = value;
  else throw ConfigError("unknown config key: '" + key + "'");
}

inline ExperimentConfig ExperimentConfig::from_string(const std::string& text,
                                                      const std::string& origin) {
  static const char* kSections[] = {"environment", "strategy", "agent", "run"};
  ExperimentConfig config;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    const std::string at = origin + ":" + std::to_string(line_no);
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw ConfigError(at + ": malformed section header: " + stripped);
      section = detail::trim(stripped.substr(1, stripped.size() - 2));
      bool known = false;
      for (const char* s : kSections) known = known || section == s;
      if (!known) throw ConfigError(at + ": unknown config section: '" + section + "'");
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(at + ": expected 'key = value', got: " + stripped);
    if (section.empty())
      throw ConfigError(at + ": key outside of any [section]");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    try {
      config.set(section + "." + key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(at + ": " + e.what());
    }
  }
  return config;
}

inline ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str(), path);
}

inline void ExperimentConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  const std::string key = detail::trim(assignment.substr(0, eq));
  const std::string value = detail::trim(assignment.substr(eq + 1));
  if (key.find('.') == std::string::npos)
    throw ConfigError("override key must be section-qualified: '" + key + "'");
  set(key, value);
}

inline void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  auto require = [&](bool ok, const std::string& message) {
    if (!ok) problems.push_back(message);
  };

  require(env_name == "river_swim" || env_name == "deep_sea" ||
              env_name == "sparse_grid" || env_name == "dense_grid",
          "environment.name: unknown environment '" + env_name + "'");
  require(env_size >= 2, "environment.size: must be >= 2");
  require(env_width >= 2, "environment.width: must be >= 2");
  require(env_height >= 2, "environment.height: must be >= 2");
  require(env_max_episode_steps >= 0, "environment.max_episode_steps: must be >= 0");

  require(strategy_name == "vdsc" || strategy_name == "vpd_only" ||
              strategy_name == "counts_only" || strategy_name == "epsilon_greedy" ||
              strategy_name == "boltzmann",
          "strategy.name: unknown strategy '" + strategy_name + "'");
  require(vpd_k >= 1, "strategy.k: must be >= 1");
  require(simhash_kappa >= 1, "strategy.kappa: must be >= 1");
  // The homeostat needs rho strictly positive (its time constant is 5/rho);
  // blind dithering strategies tolerate a zero rate (never explore).
  const bool uses_homeostat = strategy_name == "vdsc" || strategy_name == "vpd_only" ||
                              strategy_name == "counts_only";
  if (uses_homeostat) {
    require(rho_initial > 0.0 && rho_initial <= 1.0,
            "strategy.rho_initial: must lie in (0, 1]");
    require(rho_final > 0.0 && rho_final <= 1.0, "strategy.rho_final: must lie in (0, 1]");
  } else {
    require(rho_initial >= 0.0 && rho_initial <= 1.0,
            "strategy.rho_initial: must lie in [0, 1]");
    require(rho_final >= 0.0 && rho_final <= 1.0, "strategy.rho_final: must lie in [0, 1]");
  }
  require(decay_steps >= 1, "strategy.decay_steps: must be >= 1");
  require(var_epsilon > 0.0, "strategy.var_epsilon: must be positive");

  require(agent_alpha > 0.0 && agent_alpha <= 1.0, "agent.alpha: must lie in (0, 1]");
  require(agent_gamma > 0.0 && agent_gamma <= 1.0, "agent.gamma: must lie in (0, 1]");

  require(!seeds.empty(), "run.seeds: at least one seed required");
  require(total_steps >= 0, "run.total_steps: must be >= 0");
  require(eval_interval >= 1, "run.eval_interval: must be >= 1");
  require(smoothing_window >= 1, "run.smoothing_window: must be >= 1");
  require(trace_start >= 0, "run.trace_start: must be >= 0");
  require(trace_episodes >= 0, "run.trace_episodes: must be >= 0");
  require(!out_dir.empty(), "run.out_dir: must not be empty");

  if (!problems.empty()) {
    std::string message = "invalid config (" + std::to_string(problems.size()) + " problem" +
                          (problems.size() == 1 ? "" : "s") + "):";
    for (const auto& p : problems) message += "\n  - " + p;
    throw ConfigError(message);
  }
}

inline std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "[environment]\n";
  out << "name = " << env_name << "\n";
  out << "size = " << env_size << "\n";
  out << "width = " << env_width << "\n";
  out << "height = " << env_height << "\n";
  out << "max_episode_steps = " << env_max_episode_steps << "\n";
  out << "\n[strategy]\n";
  out << "name = " << strategy_name << "\n";
  out << "k = " << vpd_k << "\n";
  out << "kappa = " << simhash_kappa << "\n";
  out << "rho_initial = " << num(rho_initial) << "\n";
  out << "rho_final = " << num(rho_final) << "\n";
  out << "decay_steps = " << decay_steps << "\n";
  out << "var_epsilon = " << num(var_epsilon) << "\n";
  out << "\n[agent]\n";
  out << "alpha = " << num(agent_alpha) << "\n";
  out << "gamma = " << num(agent_gamma) << "\n";
  out << "\n[run]\n";
  out << "seeds = ";
  for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
  out << "\n";
  out << "total_steps = " << total_steps << "\n";
  out << "eval_interval = " << eval_interval << "\n";
  out << "smoothing_window = " << smoothing_window << "\n";
  out << "trace = " << (trace ? "true" : "false") << "\n";
  out << "trace_start = " << trace_start << "\n";
  out << "trace_episodes = " << trace_episodes << "\n";
  out << "out_dir = " << out_dir << "\n";
  return out.str();
}

}  // namespace vdsc
