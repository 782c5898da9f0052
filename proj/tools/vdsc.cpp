// Command-line harness for the exploration-timing experiments.
//
// Subcommands:
//   run     one experiment -> episodes.csv, summary.csv, config_resolved.ini
//   ablate  signal ablation (vdsc / vpd_only / counts_only / epsilon_greedy)
//           over shared seeds -> per-variant directories + joined.csv
//   trace   per-step exploration raster for the first seed -> trace.csv, raster.csv
//   sweep   repeat a run across several values of one config key -> sweep.csv
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vdsc/config.hpp"
#include "vdsc/harness.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  int parallel = 1;
  int trace_episodes = -1;  // -1: not given on the command line
  long trace_start = -1;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "INI configuration file");
  cmd->add_option("--set", opt.overrides,
                  "override one key, e.g. --set run.total_steps=20000 (repeatable)");
  cmd->add_option("--out", opt.out_dir, "output directory (overrides run.out_dir)");
  cmd->add_option("--parallel", opt.parallel, "worker threads across seeds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--trace-episodes", opt.trace_episodes,
                  "trace this many consecutive episodes (implies tracing)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--trace-start", opt.trace_start,
                  "first global step eligible for tracing (implies tracing)")
      ->check(CLI::NonNegativeNumber);
}

vdsc::ExperimentConfig build_config(const CliOptions& opt) {
  vdsc::ExperimentConfig config;
  if (!opt.config_path.empty())
    config = vdsc::ExperimentConfig::from_file(opt.config_path);
  for (const auto& assignment : opt.overrides) config.apply_override(assignment);
  if (!opt.out_dir.empty()) config.out_dir = opt.out_dir;
  if (opt.trace_episodes >= 0) {
    config.trace_episodes = opt.trace_episodes;
    config.trace = true;
  }
  if (opt.trace_start >= 0) {
    config.trace_start = opt.trace_start;
    config.trace = true;
  }
  config.validate();
  return config;
}

void print_final_bin(const vdsc::RunSummary& run) {
  if (run.summary.empty()) {
    std::printf("no bins produced (total_steps = 0)\n");
    return;
  }
  const auto& last = run.summary.back();
  std::printf("final bin %ld: mean return %.6g (95%% CI [%.6g, %.6g], n = %d)\n",
              last.bin, last.mean_return, last.ci_low, last.ci_high, last.n_seeds);
}

int cmd_run(const CliOptions& opt) {
  const vdsc::ExperimentConfig config = build_config(opt);
  const vdsc::RunSummary run = vdsc::run_experiment(config, opt.parallel);
  vdsc::write_outputs(run, config.out_dir);
  std::printf("run complete: %zu seeds, %zu bins -> %s\n", run.seeds.size(),
              run.summary.size(), config.out_dir.c_str());
  print_final_bin(run);
  return 0;
}

int cmd_ablate(const CliOptions& opt) {
  const vdsc::ExperimentConfig base = build_config(opt);
  const std::vector<std::string> variants = {"vdsc", "vpd_only", "counts_only",
                                             "epsilon_greedy"};
  std::string joined = "strategy,bin,mean_return,ci_low,ci_high,n_seeds\n";
  for (const auto& name : variants) {
    vdsc::ExperimentConfig config = base;
    config.strategy_name = name;
    config.out_dir = (std::filesystem::path(base.out_dir) / name).string();
    const vdsc::RunSummary run = vdsc::run_experiment(config, opt.parallel);
    vdsc::write_outputs(run, config.out_dir);
    for (const auto& bin : run.summary) {
      joined += name;
      joined += ',';
      joined += std::to_string(bin.bin);
      joined += ',';
      joined += vdsc::detail::format_double(bin.mean_return);
      joined += ',';
      joined += vdsc::detail::format_double(bin.ci_low);
      joined += ',';
      joined += vdsc::detail::format_double(bin.ci_high);
      joined += ',';
      joined += std::to_string(bin.n_seeds);
      joined += '\n';
    }
    std::printf("ablate %s: done\n", name.c_str());
  }
  std::error_code ec;
  std::filesystem::create_directories(base.out_dir, ec);
  vdsc::write_text_file(std::filesystem::path(base.out_dir) / "joined.csv", joined);
  std::printf("ablation complete -> %s/joined.csv\n", base.out_dir.c_str());
  return 0;
}

int cmd_trace(const CliOptions& opt) {
  vdsc::ExperimentConfig config = build_config(opt);
  config.trace = true;
  if (config.trace_episodes == 0) config.trace_episodes = 30;
  if (config.seeds.size() > 1) config.seeds.resize(1);
  const vdsc::RunSummary run = vdsc::run_experiment(config, 1);
  vdsc::write_outputs(run, config.out_dir, /*with_raster=*/true);
  std::size_t traced = run.seeds.empty() ? 0 : run.seeds.front().trace.size();
  std::printf("trace complete: seed %llu, %zu step records -> %s\n",
              static_cast<unsigned long long>(config.seeds.front()), traced,
              config.out_dir.c_str());
  return 0;
}

std::string sanitize_for_path(const std::string& value) {
  std::string out;
  for (char c : value)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return out.empty() ? std::string("value") : out;
}

int cmd_sweep(const CliOptions& opt, const std::string& param,
              const std::string& values_csv) {
  std::vector<std::string> values;
  std::string current;
  for (char c : values_csv) {
    if (c == ',') {
      values.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  values.push_back(current);
  if (values.size() == 1 && values.front().empty())
    throw vdsc::ConfigError("sweep: --values must list at least one value");

  const CliOptions base_opt = opt;
  std::string table = param + ",final_mean_return,ci_low,ci_high,n_seeds\n";
  std::string base_out;
  for (const auto& value : values) {
    CliOptions variant = base_opt;
    variant.overrides.push_back(param + "=" + value);
    vdsc::ExperimentConfig config = build_config(variant);
    base_out = config.out_dir;
    config.out_dir =
        (std::filesystem::path(base_out) / sanitize_for_path(value)).string();
    const vdsc::RunSummary run = vdsc::run_experiment(config, opt.parallel);
    vdsc::write_outputs(run, config.out_dir);
    const vdsc::BinSummary last =
        run.summary.empty() ? vdsc::BinSummary{} : run.summary.back();
    table += value;
    table += ',';
    table += vdsc::detail::format_double(last.mean_return);
    table += ',';
    table += vdsc::detail::format_double(last.ci_low);
    table += ',';
    table += vdsc::detail::format_double(last.ci_high);
    table += ',';
    table += std::to_string(last.n_seeds);
    table += '\n';
    std::printf("sweep %s = %s: done\n", param.c_str(), value.c_str());
  }
  std::error_code ec;
  std::filesystem::create_directories(base_out, ec);
  vdsc::write_text_file(std::filesystem::path(base_out) / "sweep.csv", table);
  std::printf("sweep complete -> %s/sweep.csv\n", base_out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exploration-timing experiment harness"};
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  add_common_flags(run, opt);
  CLI::App* ablate =
      app.add_subcommand("ablate", "compare signal ablations over shared seeds");
  add_common_flags(ablate, opt);
  CLI::App* trace =
      app.add_subcommand("trace", "record a per-step exploration raster (first seed)");
  add_common_flags(trace, opt);
  CLI::App* sweep = app.add_subcommand("sweep", "repeat a run across one key's values");
  add_common_flags(sweep, opt);
  std::string sweep_param;
  std::string sweep_values;
  sweep->add_option("--param", sweep_param, "config key to vary, e.g. strategy.kappa")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (ablate->parsed()) return cmd_ablate(opt);
    if (trace->parsed()) return cmd_trace(opt);
    return cmd_sweep(opt, sweep_param, sweep_values);
  } catch (const vdsc::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
