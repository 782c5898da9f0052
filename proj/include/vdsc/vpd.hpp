#pragma once

// Value Promise Discrepancy tracker.
//
// Keeps a sliding window of the last k+1 state-value estimates and the last
// k rewards. Once the window is full, each push yields
//
//   VPD(t-k, t) = V(s_{t-k}) - sum_{i=0}^{k-1} gamma^i r_{t-k+1+i}
//                 - gamma^k V(s_t)
//
// with forward-time discounting: the reward earned i steps after t-k is
// weighted by gamma^i, which makes the value exactly zero on a trajectory
// whose value estimates satisfy the Bellman equation.

#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>

namespace vdsc {

class VpdTracker {
 public:
  VpdTracker(int horizon, double gamma) : horizon_(horizon), gamma_(gamma) {
    if (horizon < 1) throw std::invalid_argument("VPD horizon k must be >= 1");
    if (!(gamma > 0.0) || gamma > 1.0)
      throw std::invalid_argument("VPD gamma must lie in (0, 1]");
  }

  // Append the value estimate of the current state and the reward received
  // on the transition into it. The reward passed with the first push after
  // a reset never enters a computed VPD; it is evicted exactly when the
  // window first fills.
  std::optional<double> push(double value_estimate, double reward) {
    values_.push_back(value_estimate);
    rewards_.push_back(reward);
    if (values_.size() > static_cast<std::size_t>(horizon_) + 1) values_.pop_front();
    if (rewards_.size() > static_cast<std::size_t>(horizon_)) rewards_.pop_front();
    ++steps_seen_;

    if (values_.size() < static_cast<std::size_t>(horizon_) + 1) return std::nullopt;

    double discounted = 0.0;
    double weight = 1.0;
    for (int i = 0; i < horizon_; ++i) {
      discounted += weight * rewards_[static_cast<std::size_t>(i)];
      weight *= gamma_;
    }
    // weight == gamma^k here.
    return values_.front() - discounted - weight * values_.back();
  }

  void reset() {
    values_.clear();
    rewards_.clear();
    steps_seen_ = 0;
  }

  bool ready() const {
    return values_.size() == static_cast<std::size_t>(horizon_) + 1;
  }

  int horizon() const { return horizon_; }
  double gamma() const { return gamma_; }
  long steps_seen() const { return steps_seen_; }

 private:
  int horizon_;
  double gamma_;
  std::deque<double> values_;
  std::deque<double> rewards_;
  long steps_seen_ = 0;
};

}  // namespace vdsc
