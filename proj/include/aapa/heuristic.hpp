#pragma once

// Programmed baseline: follow the target while it is detected, otherwise
// report whatever detection sits closest to where the target was last seen.

#include <optional>
#include <span>
#include <string>

#include "aapa/core_model.hpp"

namespace aapa {

struct HeuristicState {
  std::optional<Vec2> last_known;
  std::optional<Box> last_prediction;
};

inline std::optional<Box> heuristic_step(HeuristicState& state, std::span<const Percept> percepts,
                                         const std::string& target_type) {
  const Percept* target = nullptr;
  for (const auto& p : percepts) {
    if (p.attributes.object_type != target_type) continue;
    if (!target || p.percept_id < target->percept_id) target = &p;
  }
  if (target) {
    state.last_known = target->attributes.position;
    state.last_prediction = target->attributes.box();
    return state.last_prediction;
  }
  if (percepts.empty() || !state.last_known) return state.last_prediction;

  const Percept* closest = nullptr;
  double best = 0.0;
  for (const auto& p : percepts) {
    const double d = squared_norm(p.attributes.position - *state.last_known);
    if (!closest || d < best || (d == best && p.percept_id < closest->percept_id)) {
      closest = &p;
      best = d;
    }
  }
  state.last_prediction = closest->attributes.box();
  return state.last_prediction;
}

class HeuristicTracker {
 public:
  explicit HeuristicTracker(std::string target_type) : target_(std::move(target_type)) {}
  std::optional<Box> step(std::span<const Percept> percepts) { return heuristic_step(state_, percepts, target_); }
  const HeuristicState& state() const { return state_; }

 private:
  std::string target_;
  HeuristicState state_;
};

}  // namespace aapa
