#pragma once

// Reasoning about anchors that were not aligned this cycle: confidence
// bookkeeping, occlusion / field-of-view tests, and attachments created by
// agent actions.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "aapa/core_model.hpp"

namespace aapa {

enum class OutcomeReason { matched, occluder_overlap, outside_fov, parent_follow, decay, pruned, newly_anchored };

inline const char* to_string(OutcomeReason r) {
  switch (r) {
    case OutcomeReason::matched: return "matched";
    case OutcomeReason::occluder_overlap: return "occluder_overlap";
    case OutcomeReason::outside_fov: return "outside_fov";
    case OutcomeReason::parent_follow: return "parent_follow";
    case OutcomeReason::decay: return "decay";
    case OutcomeReason::pruned: return "pruned";
    case OutcomeReason::newly_anchored: return "newly_anchored";
  }
  return "decay";
}

struct HypothesisOutcome {
  std::string anchor_id;
  AnchorStatus new_status = AnchorStatus::visible;
  double new_confidence = 0.0;  // negative iff pruned
  Vec2 new_position;
  OutcomeReason reason = OutcomeReason::matched;

  friend bool operator==(const HypothesisOutcome&, const HypothesisOutcome&) = default;
};

struct ConfidenceUpdate {
  double confidence = 0.0;
  bool pruned = false;
};

// Confidence values move in fixed steps; snapping to a 1e-9 grid keeps
// repeated increments landing exactly on thresholds such as 0.5.
inline double snap_confidence(double c) { return std::round(c * 1e9) / 1e9; }

/// `anchor.status` must already hold this cycle's hypothesis for unaligned
/// anchors: maintained hypotheses keep their confidence once anchored, lost
/// and never-anchored ones decay.
inline ConfidenceUpdate update_confidence(const Anchor& anchor, bool was_aligned, const EngineConfig& config) {
  const double c = anchor.confidence;
  if (was_aligned) return {std::min(1.0, snap_confidence(c + config.conf_inc)), false};
  if (c < config.kappa_anch || anchor.status == AnchorStatus::lost) {
    const double next = snap_confidence(c - config.conf_dec);
    return {next, next < 0.0};
  }
  return {c, false};
}

inline bool in_field_of_view(Vec2 p, const EngineConfig& config) {
  return p.x >= 0.0 && p.x < config.field_of_view.x && p.y >= 0.0 && p.y < config.field_of_view.y;
}

/// Hypothesis for an unaligned, unattached anchor.
inline AnchorStatus classify_unmatched(const Anchor& anchor, std::span<const Percept> percepts,
                                       const EngineConfig& config) {
  const Box estimate = anchor.attributes.box();
  for (const auto& p : percepts)
    if (boxes_overlap(estimate, p.attributes.box())) return AnchorStatus::occluded;
  if (!in_field_of_view(anchor.attributes.position, config)) return AnchorStatus::out_of_view;
  return AnchorStatus::lost;
}

class ActionError : public std::runtime_error {
 public:
  enum class Kind { unknown_anchor, attachment_cycle, bad_argument };
  ActionError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Resolves an action argument: an exact anchor id, or a role naming an
/// object type, which picks the most confident anchor of that type.
inline Anchor* resolve_action_argument(WorldModel& model, const std::string& arg) {
  Anchor* best = nullptr;
  for (auto& a : model.anchors) {
    if (a.provisional) continue;
    if (a.anchor_id == arg) return &a;
    if (a.attributes.object_type == arg && (!best || a.confidence > best->confidence)) best = &a;
  }
  if (!best) throw ActionError(ActionError::Kind::unknown_anchor, "unknown anchor '" + arg + "'");
  return best;
}

namespace detail {

inline const std::string& action_argument(const ActionEvent& event, std::size_t index) {
  if (index >= event.arguments.size())
    throw ActionError(ActionError::Kind::bad_argument,
                      event.name + ": argument index " + std::to_string(index) + " out of range");
  return event.arguments[index];
}

}  // namespace detail

/// Applies the attach/detach effects of every rule registered for the
/// event's action name. Events without a rule leave the model untouched.
inline void apply_action(WorldModel& model, const ActionEvent& event, const EngineConfig& config) {
  for (const auto& rule : config.action_rules) {
    if (rule.action_name != event.name) continue;

    if (const auto* attach = std::get_if<AttachEffect>(&rule.effect)) {
      Anchor* child = resolve_action_argument(model, detail::action_argument(event, attach->child_arg));
      Anchor* parent = resolve_action_argument(model, detail::action_argument(event, attach->parent_arg));
      if (child == parent)
        throw ActionError(ActionError::Kind::attachment_cycle,
                          "attachment cycle: " + child->anchor_id + " cannot be its own parent");
      for (const Anchor* up = parent; up && up->parent; up = model.find(*up->parent)) {
        if (*up->parent == child->anchor_id)
          throw ActionError(ActionError::Kind::attachment_cycle, "attachment cycle: " + child->anchor_id +
                                                                     " is an ancestor of " + parent->anchor_id);
      }
      child->parent = parent->anchor_id;
      child->parent_offset = child->attributes.position - parent->attributes.position;
      child->status = AnchorStatus::attached;
    } else {
      const auto& detach = std::get<DetachEffect>(rule.effect);
      Anchor* child = resolve_action_argument(model, detail::action_argument(event, detach.child_arg));
      if (!child->parent) continue;
      child->parent.reset();
      child->parent_offset.reset();
      // Placeholder until the next classification pass.
      child->status = AnchorStatus::lost;
    }
  }
}

/// Moves every attached anchor to parent position + frozen offset, parents
/// first so chains resolve in one pass.
inline void propagate_attachments(WorldModel& model) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < model.anchors.size(); ++i) index.emplace(model.anchors[i].anchor_id, i);

  std::vector<std::pair<std::size_t, std::size_t>> order;  // (depth, anchor index)
  for (std::size_t i = 0; i < model.anchors.size(); ++i) {
    if (!model.anchors[i].parent) continue;
    std::size_t depth = 0;
    for (const Anchor* a = &model.anchors[i]; a->parent; ++depth) {
      auto it = index.find(*a->parent);
      if (it == index.end() || depth > model.anchors.size()) break;
      a = &model.anchors[it->second];
    }
    order.emplace_back(depth, i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  for (auto [depth, i] : order) {
    Anchor& child = model.anchors[i];
    auto it = index.find(*child.parent);
    if (it == index.end() || !child.parent_offset) continue;
    child.attributes.position = model.anchors[it->second].attributes.position + *child.parent_offset;
  }
}

}  // namespace aapa
