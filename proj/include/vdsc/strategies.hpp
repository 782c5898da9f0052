#pragma once

// When-to-explore policies behind one interface: blind dithering
// (epsilon-greedy, Boltzmann) and the informed trigger family (VPD-only,
// Counts-only, and the full two-signal VDSC strategy).
//
// Informed strategies run the same per-step pipeline: hash the observation
// and take the count bonus, push (V(s_t), r_t) through the VPD window,
// hand whichever trigger samples exist to the homeostat at the scheduled
// target rate, and act greedily unless the homeostat says explore, in
// which case the action is uniform random.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vdsc/homeostasis.hpp"
#include "vdsc/rng.hpp"
#include "vdsc/schedule.hpp"
#include "vdsc/simhash.hpp"
#include "vdsc/vpd.hpp"

namespace vdsc {

struct StrategyContext {
  std::span<const double> q_values;
  double state_value = 0.0;  // max of q_values
  std::span<const double> observation;
  double reward_prev = 0.0;  // reward of the transition into the current state
  long episode_step = 0;
  long global_step = 0;
};

// Greedy argmax with ties broken by lowest index.
inline int greedy_action(std::span<const double> q_values) {
  if (q_values.empty()) throw std::invalid_argument("empty action-value vector");
  int best = 0;
  for (int a = 1; a < static_cast<int>(q_values.size()); ++a)
    if (q_values[static_cast<std::size_t>(a)] > q_values[static_cast<std::size_t>(best)])
      best = a;
  return best;
}

// With probability epsilon(global_step), a uniform random action; otherwise
// the greedy one. `explored` reports which branch fired.
inline int epsilon_greedy_act(const StrategyContext& ctx, const DecaySchedule& schedule,
                              Rng& rng, bool* explored = nullptr) {
  const double eps = schedule.value(ctx.global_step);
  if (rng.uniform() < eps) {
    if (explored) *explored = true;
    return rng.uniform_int(static_cast<int>(ctx.q_values.size()));
  }
  if (explored) *explored = false;
  return greedy_action(ctx.q_values);
}

// Samples from softmax(q / temperature), max-subtracted for stability.
inline int boltzmann_act(const StrategyContext& ctx, const DecaySchedule& temperature,
                         Rng& rng, double* p_greedy = nullptr) {
  const double temp = temperature.value(ctx.global_step);
  if (!(temp > 0.0)) throw std::invalid_argument("Boltzmann temperature must be positive");
  const int n = static_cast<int>(ctx.q_values.size());
  const int greedy = greedy_action(ctx.q_values);
  const double q_max = ctx.q_values[static_cast<std::size_t>(greedy)];

  std::vector<double> weights(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    weights[static_cast<std::size_t>(a)] =
        std::exp((ctx.q_values[static_cast<std::size_t>(a)] - q_max) / temp);
    total += weights[static_cast<std::size_t>(a)];
  }
  if (p_greedy) *p_greedy = weights[static_cast<std::size_t>(greedy)] / total;

  double u = rng.uniform() * total;
  for (int a = 0; a < n; ++a) {
    u -= weights[static_cast<std::size_t>(a)];
    if (u < 0.0) return a;
  }
  return n - 1;  // u landed on the accumulated rounding tail
}

// Per-step record the harness logs and the trace files are built from.
struct StepDecision {
  int action = 0;
  bool explored = false;          // y for informed strategies, branch/deviation for blind
  double p_explore = 0.0;         // p_bar, epsilon, or 1 - P(greedy)
  std::optional<double> vpd;      // absent while the window is warming up
  std::optional<double> bonus;    // absent for strategies without counting
};

class ExplorationStrategy {
 public:
  virtual ~ExplorationStrategy() = default;
  virtual std::string_view name() const = 0;
  virtual StepDecision act(const StrategyContext& ctx) = 0;
  virtual void begin_episode() {}
};

class EpsilonGreedyStrategy final : public ExplorationStrategy {
 public:
  EpsilonGreedyStrategy(DecaySchedule schedule, std::uint64_t seed)
      : schedule_(schedule), rng_(seed) {}

  std::string_view name() const override { return "epsilon_greedy"; }

  StepDecision act(const StrategyContext& ctx) override {
    StepDecision d;
    d.p_explore = schedule_.value(ctx.global_step);
    d.action = epsilon_greedy_act(ctx, schedule_, rng_, &d.explored);
    return d;
  }

 private:
  DecaySchedule schedule_;
  Rng rng_;
};

class BoltzmannStrategy final : public ExplorationStrategy {
 public:
  BoltzmannStrategy(DecaySchedule temperature, std::uint64_t seed)
      : temperature_(temperature), rng_(seed) {}

  std::string_view name() const override { return "boltzmann"; }

  StepDecision act(const StrategyContext& ctx) override {
    StepDecision d;
    double p_greedy = 1.0;
    d.action = boltzmann_act(ctx, temperature_, rng_, &p_greedy);
    // Sampling has no explicit explore branch; count deviations from greedy.
    d.explored = d.action != greedy_action(ctx.q_values);
    d.p_explore = 1.0 - p_greedy;
    return d;
  }

 private:
  DecaySchedule temperature_;
  Rng rng_;
};

struct VdscOptions {
  bool use_vpd = true;
  bool use_counts = true;
  int vpd_horizon = 5;
  double vpd_gamma = 0.99;
  int simhash_bits = 256;
  int obs_dim = 2;
  DecaySchedule rho_schedule{};
  double var_epsilon = 1e-8;
};

// Alg.-2 composition. Ablations drop one of the two trigger channels.
class VdscStrategy final : public ExplorationStrategy {
 public:
  VdscStrategy(const VdscOptions& opts, std::uint64_t strategy_seed,
               std::uint64_t homeostat_seed, std::uint64_t simhash_seed)
      : opts_(opts),
        vpd_(opts.vpd_horizon, opts.vpd_gamma),
        homeostat_(homeostat_seed, opts.var_epsilon),
        rng_(strategy_seed) {
    if (!opts.use_vpd && !opts.use_counts)
      throw std::invalid_argument("VDSC needs at least one trigger channel");
    if (opts.use_vpd) vpd_channel_ = homeostat_.register_channel(TriggerKind::Vpd);
    if (opts.use_counts) {
      counts_channel_ = homeostat_.register_channel(TriggerKind::CountBonus);
      encoder_.emplace(opts.simhash_bits, opts.obs_dim, simhash_seed);
    }
  }

  std::string_view name() const override {
    if (opts_.use_vpd && opts_.use_counts) return "vdsc";
    return opts_.use_vpd ? "vpd_only" : "counts_only";
  }

  StepDecision act(const StrategyContext& ctx) override {
    StepDecision d;
    std::vector<std::optional<double>> samples(homeostat_.channel_count());

    if (opts_.use_counts) {
      const double bonus = counts_.record_and_bonus(encoder_->encode(ctx.observation));
      d.bonus = bonus;
      samples[*counts_channel_] = bonus;
    }
    if (opts_.use_vpd) {
      // The trigger is the magnitude: sign carries direction, not urgency.
      const auto vpd = vpd_.push(ctx.state_value, ctx.reward_prev);
      d.vpd = vpd;
      if (vpd.has_value()) samples[*vpd_channel_] = std::abs(*vpd);
    }

    const double rho = opts_.rho_schedule.value(ctx.global_step);
    const ExploreDecision decision = homeostat_.step(samples, rho);
    d.explored = decision.explore;
    d.p_explore = decision.p_bar;
    d.action = decision.explore
                   ? rng_.uniform_int(static_cast<int>(ctx.q_values.size()))
                   : greedy_action(ctx.q_values);
    return d;
  }

  // VPD windows are episode-scoped; homeostat statistics persist, since the
  // controller is defined over global time.
  void begin_episode() override { vpd_.reset(); }

  const HashCountTable& count_table() const { return counts_; }

 private:
  VdscOptions opts_;
  VpdTracker vpd_;
  Homeostat homeostat_;
  Rng rng_;
  std::optional<SimHashEncoder> encoder_;
  HashCountTable counts_;
  std::optional<std::size_t> vpd_channel_;
  std::optional<std::size_t> counts_channel_;
};

}  // namespace vdsc
