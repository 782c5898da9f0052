#pragma once

// Desk-scale environments spanning dense/easy to sparse/hard exploration.
// Each exposes a state index for the agent, a normalized coordinate
// observation in [0,1]^D for hashing, a reward and a terminal flag.
// Exact dynamics tables are documented in docs/environments.md; the tests
// hold independent copies of those tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vdsc/rng.hpp"

namespace vdsc {

struct EnvSpec {
  std::string name;
  int state_count = 0;
  int action_count = 0;
  int obs_dim = 0;
  int max_episode_steps = 0;
};

struct StepOutcome {
  int state = 0;
  std::vector<double> observation;
  double reward = 0.0;
  bool terminal = false;
};

class Environment {
 public:
  virtual ~Environment() = default;

  const EnvSpec& spec() const { return spec_; }

  // Reseeding is optional; without a seed the slip stream continues across
  // episodes within a run.
  std::pair<int, std::vector<double>> reset(std::optional<std::uint64_t> seed = std::nullopt) {
    if (seed.has_value()) rng_ = Rng(*seed);
    terminal_ = false;
    return do_reset();
  }

  StepOutcome step(int action) {
    if (terminal_) throw std::logic_error("step() called on a terminal episode");
    if (action < 0 || action >= spec_.action_count)
      throw std::out_of_range("action index " + std::to_string(action) + " outside [0, " +
                              std::to_string(spec_.action_count) + ")");
    StepOutcome out = do_step(action);
    terminal_ = out.terminal;
    return out;
  }

  bool terminal() const { return terminal_; }

 protected:
  explicit Environment(EnvSpec spec) : spec_(std::move(spec)), rng_(0) {}
  virtual std::pair<int, std::vector<double>> do_reset() = 0;
  virtual StepOutcome do_step(int action) = 0;

  EnvSpec spec_;
  Rng rng_;
  bool terminal_ = false;
};

// Six-state river. Action 1 (swim right, against the current) succeeds with
// p = 0.35, stays with p = 0.60, slips left with p = 0.05. Action 0 (drift
// left) always succeeds. Reward 1.0 for holding the rightmost state with
// action 1, 0.005 for lingering at the leftmost state with action 0.
// Never terminal; episodes end by truncation.
class RiverSwim : public Environment {
 public:
  static constexpr int kStates = 6;
  static constexpr int kStart = 1;
  static constexpr double kRightSuccess = 0.35;
  static constexpr double kRightStay = 0.60;
  static constexpr double kLeftReward = 0.005;

  explicit RiverSwim(int max_episode_steps = 200)
      : Environment(EnvSpec{"river_swim", kStates, 2, 1, max_episode_steps}) {}

 protected:
  std::pair<int, std::vector<double>> do_reset() override {
    state_ = kStart;
    return {state_, observation()};
  }

  StepOutcome do_step(int action) override {
    StepOutcome out;
    if (action == 0) {
      state_ = std::max(0, state_ - 1);
      if (state_ == 0) out.reward = kLeftReward;
    } else {
      const double u = rng_.uniform();
      const int prev = state_;
      if (u < kRightSuccess)
        state_ = std::min(kStates - 1, state_ + 1);
      else if (u >= kRightSuccess + kRightStay)
        state_ = std::max(0, state_ - 1);
      if (prev == kStates - 1 && state_ == kStates - 1) out.reward = 1.0;
    }
    out.state = state_;
    out.observation = observation();
    return out;
  }

 private:
  std::vector<double> observation() const {
    return {static_cast<double>(state_) / (kStates - 1)};
  }
  int state_ = kStart;
};

// N x N descent. The agent starts top-left and drops one row per step;
// action 0 moves left, action 1 moves right (clamped), and each right move
// costs 0.01/N. The episode ends after the N-th action; finishing in the
// rightmost column pays 1. Deterministic transitions.
class DeepSea : public Environment {
 public:
  explicit DeepSea(int size)
      : Environment(EnvSpec{"deep_sea", size * size, 2, 2, size}), size_(size) {
    if (size < 2) throw std::invalid_argument("DeepSea size must be >= 2");
  }

 protected:
  std::pair<int, std::vector<double>> do_reset() override {
    row_ = 0;
    col_ = 0;
    return {state_index(), observation()};
  }

  StepOutcome do_step(int action) override {
    StepOutcome out;
    if (action == 1) {
      col_ = std::min(size_ - 1, col_ + 1);
      out.reward -= 0.01 / size_;
    } else {
      col_ = std::max(0, col_ - 1);
    }
    if (row_ == size_ - 1) {
      out.terminal = true;
      if (col_ == size_ - 1) out.reward += 1.0;
    } else {
      ++row_;
    }
    out.state = state_index();
    out.observation = observation();
    return out;
  }

 private:
  int state_index() const { return row_ * size_ + col_; }
  std::vector<double> observation() const {
    return {static_cast<double>(row_) / (size_ - 1),
            static_cast<double>(col_) / (size_ - 1)};
  }
  int size_;
  int row_ = 0;
  int col_ = 0;
};

// W x H gridworld with sticky actions: with probability `slip` the executed
// action is the previously executed one (first step never sticks). Start
// top-left, goal bottom-right, moves clamped at walls. Sparse variant pays
// 1 on reaching the goal and nothing else; dense variant adds a
// potential-difference shaping term on every move.
class GridWorld : public Environment {
 public:
  static constexpr double kSlip = 0.25;

  GridWorld(std::string name, int width, int height, bool dense, int max_episode_steps)
      : Environment(EnvSpec{std::move(name), width * height, 4, 2,
                            max_episode_steps > 0 ? max_episode_steps : 4 * width * height}),
        width_(width),
        height_(height),
        dense_(dense) {
    if (width < 2 || height < 2)
      throw std::invalid_argument("grid dimensions must be >= 2");
  }

 protected:
  std::pair<int, std::vector<double>> do_reset() override {
    x_ = 0;
    y_ = 0;
    prev_action_.reset();
    return {state_index(), observation()};
  }

  StepOutcome do_step(int action) override {
    int executed = action;
    if (prev_action_.has_value() && rng_.uniform() < kSlip) executed = *prev_action_;
    prev_action_ = executed;

    const int dist_before = goal_distance();
    switch (executed) {
      case 0: y_ = std::max(0, y_ - 1); break;          // up
      case 1: y_ = std::min(height_ - 1, y_ + 1); break; // down
      case 2: x_ = std::max(0, x_ - 1); break;          // left
      default: x_ = std::min(width_ - 1, x_ + 1); break; // right
    }

    StepOutcome out;
    const bool at_goal = x_ == width_ - 1 && y_ == height_ - 1;
    if (dense_) {
      const double scale = static_cast<double>(width_ - 1 + height_ - 1);
      out.reward += (dist_before - goal_distance()) / scale;
    }
    if (at_goal) {
      out.reward += 1.0;
      out.terminal = true;
    }
    out.state = state_index();
    out.observation = observation();
    return out;
  }

 private:
  int state_index() const { return y_ * width_ + x_; }
  int goal_distance() const { return (width_ - 1 - x_) + (height_ - 1 - y_); }
  std::vector<double> observation() const {
    return {static_cast<double>(x_) / (width_ - 1),
            static_cast<double>(y_) / (height_ - 1)};
  }

  int width_;
  int height_;
  bool dense_;
  int x_ = 0;
  int y_ = 0;
  std::optional<int> prev_action_;
};

struct EnvironmentParams {
  std::string name;        // river_swim | deep_sea | sparse_grid | dense_grid
  int size = 10;           // deep_sea
  int width = 8;           // grids
  int height = 8;          // grids
  int max_episode_steps = 0;  // 0 = per-environment default
};

inline std::unique_ptr<Environment> make_environment(const EnvironmentParams& params) {
  if (params.name == "river_swim")
    return std::make_unique<RiverSwim>(params.max_episode_steps > 0 ? params.max_episode_steps
                                                                    : 200);
  if (params.name == "deep_sea") return std::make_unique<DeepSea>(params.size);
  if (params.name == "sparse_grid")
    return std::make_unique<GridWorld>("sparse_grid", params.width, params.height, false,
                                       params.max_episode_steps);
  if (params.name == "dense_grid")
    return std::make_unique<GridWorld>("dense_grid", params.width, params.height, true,
                                       params.max_episode_steps);
  throw std::invalid_argument("unknown environment: " + params.name);
}

}  // namespace vdsc
