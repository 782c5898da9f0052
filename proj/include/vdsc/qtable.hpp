#pragma once

// Tabular Q-learning. Supplies V(s) = max_a Q(s, a) to the exploration
// strategies and learns from single transitions.

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace vdsc {

class QTable {
 public:
  QTable(int state_count, int action_count, double learning_rate = 0.1,
         double discount = 0.99)
      : state_count_(state_count),
        action_count_(action_count),
        learning_rate_(learning_rate),
        discount_(discount),
        values_(static_cast<std::size_t>(state_count) * action_count, 0.0) {
    if (state_count < 1 || action_count < 1)
      throw std::invalid_argument("QTable dimensions must be positive");
    if (!(learning_rate > 0.0) || learning_rate > 1.0)
      throw std::invalid_argument("learning rate must lie in (0, 1]");
    if (!(discount > 0.0) || discount > 1.0)
      throw std::invalid_argument("discount must lie in (0, 1]");
  }

  // Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') * (1 - terminal) - Q(s,a));
  // returns the TD error.
  double update(int state, int action, double reward, int next_state, bool terminal) {
    check_state(state);
    check_state(next_state);
    check_action(action);
    const double bootstrap = terminal ? 0.0 : discount_ * state_value(next_state);
    double& q = values_[index(state, action)];
    const double td_error = reward + bootstrap - q;
    q += learning_rate_ * td_error;
    return td_error;
  }

  double q_value(int state, int action) const {
    check_state(state);
    check_action(action);
    return values_[index(state, action)];
  }

  double state_value(int state) const {
    check_state(state);
    const double* row = values_.data() + index(state, 0);
    return *std::max_element(row, row + action_count_);
  }

  // Greedy action, ties broken by lowest index.
  int greedy_action(int state) const {
    check_state(state);
    const double* row = values_.data() + index(state, 0);
    return static_cast<int>(std::max_element(row, row + action_count_) - row);
  }

  void q_row(int state, std::vector<double>& out) const {
    check_state(state);
    out.assign(values_.begin() + static_cast<long>(index(state, 0)),
               values_.begin() + static_cast<long>(index(state, 0)) + action_count_);
  }

  // One line per entry, "state action value".
  std::string dump() const {
    std::string out;
    char buf[64];
    for (int s = 0; s < state_count_; ++s)
      for (int a = 0; a < action_count_; ++a) {
        std::snprintf(buf, sizeof buf, "%d %d %.12g\n", s, a, values_[index(s, a)]);
        out += buf;
      }
    return out;
  }

  int state_count() const { return state_count_; }
  int action_count() const { return action_count_; }
  double discount() const { return discount_; }

 private:
  std::size_t index(int state, int action) const {
    return static_cast<std::size_t>(state) * action_count_ + action;
  }
  void check_state(int state) const {
    if (state < 0 || state >= state_count_)
      throw std::out_of_range("state index " + std::to_string(state) +
                              " outside [0, " + std::to_string(state_count_) + ")");
  }
  void check_action(int action) const {
    if (action < 0 || action >= action_count_)
      throw std::out_of_range("action index " + std::to_string(action) +
                              " outside [0, " + std::to_string(action_count_) + ")");
  }

  int state_count_;
  int action_count_;
  double learning_rate_;
  double discount_;
  std::vector<double> values_;
};

}  // namespace vdsc
