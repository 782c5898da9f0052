#pragma once

// Deterministic experiment runner. One seed = one fully independent
// pipeline (environment, agent, strategy), every random stream derived
// from the seed by name via derive_seed(). Seeds may run in parallel;
// results are merged in seed-list order, so outputs never depend on
// scheduling.
//
// Output files (written under the config's out_dir):
//   episodes.csv  seed,episode,return,steps,explore_fraction,mean_abs_vpd,mean_bonus,mean_p_bar
//   trace.csv     seed,global_step,episode,episode_step,y,p_bar,vpd,bonus
//   summary.csv   bin,mean_return,ci_low,ci_high,n_seeds
//   summary_meta.txt, config_resolved.ini

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "vdsc/config.hpp"
#include "vdsc/environments.hpp"
#include "vdsc/qtable.hpp"
#include "vdsc/rng.hpp"
#include "vdsc/strategies.hpp"

namespace vdsc {

struct EpisodeRecord {
  std::uint64_t seed = 0;
  long episode = 0;
  double episode_return = 0.0;
  long steps = 0;
  double explore_fraction = 0.0;
  double mean_abs_vpd = 0.0;
  double mean_bonus = 0.0;
  double mean_p_bar = 0.0;
  long end_step = 0;  // global step of the episode's last transition
};

struct StepTraceRecord {
  std::uint64_t seed = 0;
  long global_step = 0;
  long episode = 0;
  long episode_step = 0;
  int y = 0;
  double p_bar = 0.0;
  std::optional<double> vpd;
  double bonus = 0.0;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> episodes;
  std::vector<StepTraceRecord> trace;
};

struct BinSummary {
  long bin = 0;
  double mean_return = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n_seeds = 0;
};

struct RunSummary {
  ExperimentConfig config;
  std::vector<SeedResult> seeds;
  std::vector<BinSummary> summary;
};

inline std::unique_ptr<ExplorationStrategy> make_strategy(const ExperimentConfig& config,
                                                          const EnvSpec& env_spec,
                                                          std::uint64_t master_seed) {
  const DecaySchedule schedule(config.rho_initial, config.rho_final, config.decay_steps);
  const std::uint64_t strategy_seed = derive_seed(master_seed, "strategy");
  if (config.strategy_name == "epsilon_greedy")
    return std::make_unique<EpsilonGreedyStrategy>(schedule, strategy_seed);
  if (config.strategy_name == "boltzmann")
    return std::make_unique<BoltzmannStrategy>(schedule, strategy_seed);

  VdscOptions opts;
  opts.use_vpd = config.strategy_name != "counts_only";
  opts.use_counts = config.strategy_name != "vpd_only";
  opts.vpd_horizon = config.vpd_k;
  opts.vpd_gamma = config.agent_gamma;
  opts.simhash_bits = config.simhash_kappa;
  opts.obs_dim = env_spec.obs_dim;
  opts.rho_schedule = schedule;
  opts.var_epsilon = config.var_epsilon;
  return std::make_unique<VdscStrategy>(opts, strategy_seed,
                                        derive_seed(master_seed, "homeostat"),
                                        derive_seed(master_seed, "simhash"));
}

// Runs one seed's full episode loop.
inline SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  EnvironmentParams env_params{config.env_name, config.env_size, config.env_width,
                               config.env_height, config.env_max_episode_steps};
  auto env = make_environment(env_params);
  const EnvSpec& spec = env->spec();
  auto strategy = make_strategy(config, spec, seed);
  QTable agent(spec.state_count, spec.action_count, config.agent_alpha, config.agent_gamma);

  SeedResult result;
  result.seed = seed;

  auto [state, obs] = env->reset(derive_seed(seed, "env"));
  strategy->begin_episode();

  long episode = 0;
  long episode_step = 0;
  double reward_prev = 0.0;
  double ep_return = 0.0;
  long ep_explore = 0;
  double ep_abs_vpd_sum = 0.0;
  long ep_vpd_count = 0;
  double ep_bonus_sum = 0.0;
  double ep_p_sum = 0.0;

  // Trace window: starts at the first episode boundary at or after
  // trace_start, ends after trace_episodes full episodes (0 = unbounded).
  bool trace_active = config.trace && config.trace_start == 0;
  int traced_episodes = 0;
  std::vector<double> q_buffer;

  for (long global_step = 0; global_step < config.total_steps; ++global_step) {
    agent.q_row(state, q_buffer);
    StrategyContext ctx;
    ctx.q_values = q_buffer;
    ctx.state_value = agent.state_value(state);
    ctx.observation = obs;
    ctx.reward_prev = reward_prev;
    ctx.episode_step = episode_step;
    ctx.global_step = global_step;

    const StepDecision decision = strategy->act(ctx);
    const StepOutcome outcome = env->step(decision.action);
    agent.update(state, decision.action, outcome.reward, outcome.state, outcome.terminal);

    ep_return += outcome.reward;
    ++episode_step;
    if (decision.explored) ++ep_explore;
    if (decision.vpd.has_value()) {
      ep_abs_vpd_sum += std::abs(*decision.vpd);
      ++ep_vpd_count;
    }
    ep_bonus_sum += decision.bonus.value_or(0.0);
    ep_p_sum += decision.p_explore;

    if (trace_active) {
      StepTraceRecord rec;
      rec.seed = seed;
      rec.global_step = global_step;
      rec.episode = episode;
      rec.episode_step = episode_step - 1;
      rec.y = decision.explored ? 1 : 0;
      rec.p_bar = decision.p_explore;
      rec.vpd = decision.vpd;
      rec.bonus = decision.bonus.value_or(0.0);
      result.trace.push_back(rec);
    }

    const bool truncated = episode_step >= spec.max_episode_steps;
    if (outcome.terminal || truncated) {
      EpisodeRecord rec;
      rec.seed = seed;
      rec.episode = episode;
      rec.episode_return = ep_return;
      rec.steps = episode_step;
      rec.explore_fraction = static_cast<double>(ep_explore) / static_cast<double>(episode_step);
      rec.mean_abs_vpd = ep_vpd_count > 0 ? ep_abs_vpd_sum / ep_vpd_count : 0.0;
      rec.mean_bonus = ep_bonus_sum / static_cast<double>(episode_step);
      rec.mean_p_bar = ep_p_sum / static_cast<double>(episode_step);
      rec.end_step = global_step;
      result.episodes.push_back(rec);

      if (trace_active && ++traced_episodes == config.trace_episodes) trace_active = false;
      if (config.trace && !trace_active && traced_episodes == 0 &&
          global_step + 1 >= config.trace_start)
        trace_active = true;

      ++episode;
      episode_step = 0;
      reward_prev = 0.0;
      ep_return = 0.0;
      ep_explore = 0;
      ep_abs_vpd_sum = 0.0;
      ep_vpd_count = 0;
      ep_bonus_sum = 0.0;
      ep_p_sum = 0.0;
      std::tie(state, obs) = env->reset();
      strategy->begin_episode();
    } else {
      state = outcome.state;
      obs = outcome.observation;
      reward_prev = outcome.reward;
    }
  }
  return result;
}

// Trailing moving average over the per-episode returns.
inline std::vector<double> smooth_returns(const std::vector<EpisodeRecord>& episodes,
                                          int window) {
  std::vector<double> out(episodes.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    acc += episodes[i].episode_return;
    if (i >= static_cast<std::size_t>(window)) acc -= episodes[i - window].episode_return;
    const auto n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

// Samples each seed's smoothed-return curve at bin boundaries: bin b holds
// the smoothed return of the last episode finishing before the end of
// steps [b*eval_interval, (b+1)*eval_interval); 0 before the first episode.
inline std::vector<double> bin_series(const std::vector<EpisodeRecord>& episodes,
                                      long total_steps, long eval_interval,
                                      int smoothing_window) {
  const long bins = (total_steps + eval_interval - 1) / eval_interval;
  const std::vector<double> smoothed = smooth_returns(episodes, smoothing_window);
  std::vector<double> out(static_cast<std::size_t>(bins), 0.0);
  std::size_t next_episode = 0;
  double current = 0.0;
  for (long b = 0; b < bins; ++b) {
    const long bin_end = (b + 1) * eval_interval - 1;
    while (next_episode < episodes.size() && episodes[next_episode].end_step <= bin_end) {
      current = smoothed[next_episode];
      ++next_episode;
    }
    out[static_cast<std::size_t>(b)] = current;
  }
  return out;
}

// Mean and normal-approximation 95% CI per bin. A single seed yields a
// zero-width interval by convention.
inline std::vector<BinSummary> aggregate(const std::vector<std::vector<double>>& per_seed_bins) {
  if (per_seed_bins.empty()) throw std::invalid_argument("aggregate: no seed series");
  const std::size_t bins = per_seed_bins.front().size();
  for (const auto& series : per_seed_bins)
    if (series.size() != bins)
      throw std::invalid_argument("aggregate: mismatched series lengths");

  const int n = static_cast<int>(per_seed_bins.size());
  std::vector<BinSummary> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    double mean = 0.0;
    for (const auto& series : per_seed_bins) mean += series[b];
    mean /= n;
    double half_width = 0.0;
    if (n > 1) {
      double ss = 0.0;
      for (const auto& series : per_seed_bins) ss += (series[b] - mean) * (series[b] - mean);
      const double sd = std::sqrt(ss / (n - 1));
      half_width = 1.96 * sd / std::sqrt(static_cast<double>(n));
    }
    out[b] = BinSummary{static_cast<long>(b), mean, mean - half_width, mean + half_width, n};
  }
  return out;
}

// Runs every seed (optionally in parallel) and aggregates.
inline RunSummary run_experiment(const ExperimentConfig& config, int parallel = 1) {
  config.validate();
  RunSummary summary;
  summary.config = config;
  summary.seeds.resize(config.seeds.size());

  const int workers =
      std::max(1, std::min<int>(parallel, static_cast<int>(config.seeds.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < config.seeds.size(); ++i)
      summary.seeds[i] = run_seed(config, config.seeds[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next.fetch_add(1); i < config.seeds.size();
               i = next.fetch_add(1))
            summary.seeds[i] = run_seed(config, config.seeds[i]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<std::vector<double>> per_seed_bins;
  per_seed_bins.reserve(summary.seeds.size());
  for (const auto& seed_result : summary.seeds)
    per_seed_bins.push_back(bin_series(seed_result.episodes, config.total_steps,
                                       config.eval_interval, config.smoothing_window));
  if (!per_seed_bins.empty() && !per_seed_bins.front().empty())
    summary.summary = aggregate(per_seed_bins);
  return summary;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::string(buf);
}

}  // namespace detail

inline std::string episodes_csv(const RunSummary& run) {
  std::string out =
      "seed,episode,return,steps,explore_fraction,mean_abs_vpd,mean_bonus,mean_p_bar\n";
  for (const auto& seed_result : run.seeds)
    for (const auto& e : seed_result.episodes) {
      out += std::to_string(e.seed);
      out += ',';
      out += std::to_string(e.episode);
      out += ',';
      out += detail::format_double(e.episode_return);
      out += ',';
      out += std::to_string(e.steps);
      out += ',';
      out += detail::format_double(e.explore_fraction);
      out += ',';
      out += detail::format_double(e.mean_abs_vpd);
      out += ',';
      out += detail::format_double(e.mean_bonus);
      out += ',';
      out += detail::format_double(e.mean_p_bar);
      out += '\n';
    }
  return out;
}

inline std::string trace_csv(const RunSummary& run) {
  std::string out = "seed,global_step,episode,episode_step,y,p_bar,vpd,bonus\n";
  for (const auto& seed_result : run.seeds)
    for (const auto& t : seed_result.trace) {
      out += std::to_string(t.seed);
      out += ',';
      out += std::to_string(t.global_step);
      out += ',';
      out += std::to_string(t.episode);
      out += ',';
      out += std::to_string(t.episode_step);
      out += ',';
      out += std::to_string(t.y);
      out += ',';
      out += detail::format_double(t.p_bar);
      out += ',';
      if (t.vpd.has_value()) out += detail::format_double(*t.vpd);
      out += ',';
      out += detail::format_double(t.bonus);
      out += '\n';
    }
  return out;
}

inline std::string summary_csv(const RunSummary& run) {
  std::string out = "bin,mean_return,ci_low,ci_high,n_seeds\n";
  for (const auto& b : run.summary) {
    out += std::to_string(b.bin);
    out += ',';
    out += detail::format_double(b.mean_return);
    out += ',';
    out += detail::format_double(b.ci_low);
    out += ',';
    out += detail::format_double(b.ci_high);
    out += ',';
    out += std::to_string(b.n_seeds);
    out += '\n';
  }
  return out;
}

// Figure-3 style raster rows derived from the trace: episodes renumbered
// 0..n-1 within the traced window of one seed.
inline std::string raster_csv(const RunSummary& run) {
  std::string out = "episode,step_offset,y\n";
  if (run.seeds.empty()) return out;
  const auto& trace = run.seeds.front().trace;
  long raster_episode = -1;
  long last_episode = -1;
  for (const auto& t : trace) {
    if (t.episode != last_episode) {
      last_episode = t.episode;
      ++raster_episode;
    }
    out += std::to_string(raster_episode);
    out += ',';
    out += std::to_string(t.episode_step);
    out += ',';
    out += std::to_string(t.y);
    out += '\n';
  }
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Writes the run's result files into out_dir (created if missing).
inline void write_outputs(const RunSummary& run, const std::string& out_dir,
                          bool with_raster = false) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + out_dir + ": " +
                             ec.message());
  const std::filesystem::path dir(out_dir);
  write_text_file(dir / "episodes.csv", episodes_csv(run));
  write_text_file(dir / "summary.csv", summary_csv(run));
  write_text_file(dir / "config_resolved.ini", run.config.serialize());
  if (run.config.trace) write_text_file(dir / "trace.csv", trace_csv(run));
  if (with_raster) write_text_file(dir / "raster.csv", raster_csv(run));

  std::string meta;
  meta += "smoothing: trailing moving average over " +
          std::to_string(run.config.smoothing_window) + " episodes\n";
  meta += "bin width: " + std::to_string(run.config.eval_interval) + " agent steps\n";
  meta += "bins: " + std::to_string(run.summary.size()) + "\n";
  meta += "seeds: " + std::to_string(run.seeds.size()) + "\n";
  meta += "ci: normal approximation, mean +/- 1.96*sd/sqrt(n); zero width for n=1\n";
  meta += "sub-seeding: child = splitmix64(fnv1a64(component) ^ splitmix64(seed)), "
          "components: env, strategy, homeostat, simhash\n";
  write_text_file(dir / "summary_meta.txt", meta);
}

}  // namespace vdsc
