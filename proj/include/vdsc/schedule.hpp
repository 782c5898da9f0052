#pragma once

// Linear decay schedule shared by epsilon, temperature and the homeostasis
// target rate, so every strategy runs the same exploration budget.

#include <algorithm>
#include <stdexcept>

namespace vdsc {

struct DecaySchedule {
  double initial = 1.0;
  double final_value = 0.01;
  long decay_steps = 25000;

  DecaySchedule() = default;
  DecaySchedule(double initial_, double final_, long decay_steps_)
      : initial(initial_), final_value(final_), decay_steps(decay_steps_) {
    if (decay_steps <= 0) throw std::invalid_argument("decay_steps must be positive");
  }

  double value(long step) const {
    const double frac =
        std::min(1.0, static_cast<double>(step) / static_cast<double>(decay_steps));
    return initial + (final_value - initial) * frac;
  }
};

}  // namespace vdsc
