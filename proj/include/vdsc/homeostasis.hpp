#pragma once

// Unified homeostasis: converts one or more numeric trigger streams into a
// per-step binary explore/exploit decision whose long-run rate tracks a
// target rho.
//
// Per step, for each channel that delivered a sample x_t (with t the number
// of sampled steps so far, tau = min(t, 5/rho), alpha = 1/tau):
//
//   xbar   <- (1-alpha) xbar   + alpha x_t
//   xsqbar <- (1-alpha) xsqbar + alpha (x_t - xbar)^2     (post-update xbar)
//   z      <- (x_t - xbar) / sqrt(xsqbar + var_epsilon)
//   xplus  <- exp(clamp(z, -20, 20))
//   xpbar  <- (1-alpha) xpbar  + alpha xplus
//   p_i    <- min(1, rho * xplus / xpbar)
//
// The sampled channels' p_i are averaged into p_bar and the decision is a
// Bernoulli(p_bar) draw from the owned stream. A channel's very first
// sample short-circuits to p_i = min(1, rho), the fixed point a constant
// stream settles at. Steps where no channel delivers a sample return a
// deterministic exploit decision and consume no randomness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vdsc/rng.hpp"

namespace vdsc {

enum class TriggerKind { Vpd, CountBonus, Custom };

inline const char* trigger_kind_name(TriggerKind kind) {
  switch (kind) {
    case TriggerKind::Vpd: return "vpd";
    case TriggerKind::CountBonus: return "count_bonus";
    default: return "custom";
  }
}

struct ExploreDecision {
  bool explore = false;
  double p_bar = 0.0;
  std::vector<std::optional<double>> per_channel_p;
};

class Homeostat {
 public:
  explicit Homeostat(std::uint64_t seed, double var_epsilon = 1e-8,
                     double exp_clamp = 20.0)
      : rng_(seed), var_epsilon_(var_epsilon), exp_clamp_(exp_clamp) {}

  // Channels are identified by kind; registering the same kind twice is an
  // error. Returns the channel's index, which is also its slot in the
  // per-step sample vector.
  std::size_t register_channel(TriggerKind kind) {
    for (const auto& c : channels_)
      if (c.kind == kind)
        throw std::invalid_argument(std::string("trigger channel already registered: ") +
                                    trigger_kind_name(kind));
    channels_.push_back(Channel{kind});
    return channels_.size() - 1;
  }

  std::size_t channel_count() const { return channels_.size(); }

  // One optional sample per registered channel; channels without a sample
  // this step are skipped entirely.
  ExploreDecision step(std::span<const std::optional<double>> samples, double rho) {
    if (samples.size() != channels_.size())
      throw std::invalid_argument("expected one sample slot per registered channel");
    if (!(rho > 0.0) || rho > 1.0)
      throw std::invalid_argument("target rate rho must lie in (0, 1]");

    ExploreDecision decision;
    decision.per_channel_p.assign(channels_.size(), std::nullopt);

    bool any = false;
    for (const auto& s : samples)
      if (s.has_value()) any = true;
    if (!any) return decision;  // deterministic exploit, no RNG draw

    ++steps_;
    const double tau = std::min(static_cast<double>(steps_), 5.0 / rho);
    const double alpha = 1.0 / tau;

    double p_sum = 0.0;
    int sampled = 0;
    for (std::size_t i = 0; i < channels_.size(); ++i) {
      if (!samples[i].has_value()) continue;
      const double x = *samples[i];
      if (!std::isfinite(x))
        throw std::invalid_argument(std::string("non-finite sample on trigger channel ") +
                                    trigger_kind_name(channels_[i].kind));
      const double p = channels_[i].update(x, alpha, rho, var_epsilon_, exp_clamp_);
      decision.per_channel_p[i] = p;
      p_sum += p;
      ++sampled;
    }

    decision.p_bar = p_sum / sampled;
    decision.explore = rng_.bernoulli(decision.p_bar);
    return decision;
  }

  long steps() const { return steps_; }

 private:
  struct Channel {
    TriggerKind kind;
    double mean = 0.0;
    double second_moment = 0.0;
    double transformed_mean = 0.0;
    bool seen_sample = false;

    double update(double x, double alpha, double rho, double var_epsilon,
                  double exp_clamp) {
      mean = (1.0 - alpha) * mean + alpha * x;
      const double dev = x - mean;
      second_moment = (1.0 - alpha) * second_moment + alpha * dev * dev;
      const double z =
          std::clamp(dev / std::sqrt(second_moment + var_epsilon), -exp_clamp, exp_clamp);
      const double transformed = std::exp(z);
      transformed_mean = (1.0 - alpha) * transformed_mean + alpha * transformed;
      if (!seen_sample) {
        seen_sample = true;
        return std::min(1.0, rho);
      }
      return std::min(1.0, rho * transformed / transformed_mean);
    }
  };

  std::vector<Channel> channels_;
  Rng rng_;
  double var_epsilon_;
  double exp_clamp_;
  long steps_ = 0;
};

}  // namespace vdsc
