#pragma once

// One anchoring cycle per frame: camera compensation, action effects,
// alignment, hypothesis reasoning and world-model maintenance.

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "aapa/alignment.hpp"
#include "aapa/core_model.hpp"
#include "aapa/hypothesis.hpp"

namespace aapa {

/// Everything observed in one frame.
struct Frame {
  int frame_index = 0;
  Vec2 camera_pose;
  std::vector<Percept> percepts;
  std::vector<ActionEvent> actions;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct StepResult {
  WorldModel model;
  std::vector<HypothesisOutcome> outcomes;
  std::vector<std::string> rejected_actions;
};

namespace detail {

inline HypothesisOutcome outcome_of(const Anchor& a, OutcomeReason reason) {
  return {a.anchor_id, a.status, a.confidence, a.attributes.position, reason};
}

inline void promote_candidate(WorldModel& model, Anchor& candidate) {
  int& counter = model.next_instance_counter[candidate.attributes.object_type];
  candidate.anchor_id = candidate.attributes.object_type + std::to_string(counter++);
  candidate.provisional = false;
}

}  // namespace detail

inline StepResult step(const WorldModel& model, const Frame& frame, const EngineConfig& config) {
  if (frame.frame_index <= model.frame_index)
    throw std::invalid_argument("frame index " + std::to_string(frame.frame_index) +
                                " does not follow " + std::to_string(model.frame_index));

  StepResult result;
  WorldModel& next = result.model;
  next = model;
  next.frame_index = frame.frame_index;

  next.anchors = compensate_camera_motion(std::move(next.anchors), next.camera_pose, frame.camera_pose);
  next.camera_pose = frame.camera_pose;

  for (const auto& event : frame.actions) {
    try {
      apply_action(next, event, config);
    } catch (const ActionError& e) {
      result.rejected_actions.push_back(event.name + ": " + e.what());
    }
  }

  const AlignmentResult alignment = align_anchors(frame.percepts, next.anchors, config);

  std::unordered_map<int, const Percept*> percept_by_id;
  for (const auto& p : frame.percepts) percept_by_id.emplace(p.percept_id, &p);
  std::unordered_map<std::string, std::size_t> anchor_index;
  for (std::size_t i = 0; i < next.anchors.size(); ++i) anchor_index.emplace(next.anchors[i].anchor_id, i);

  std::vector<bool> aligned(next.anchors.size(), false);
  for (const auto& m : alignment.matches) {
    const std::size_t idx = anchor_index.at(m.anchor_id);
    Anchor& a = next.anchors[idx];
    const Attributes& observed = percept_by_id.at(m.percept_id)->attributes;
    a.attributes.position = observed.position;
    a.attributes.size = observed.size;
    a.attributes.extras = observed.extras;
    // Seeing the child again ends the attachment.
    a.parent.reset();
    a.parent_offset.reset();
    a.status = AnchorStatus::visible;
    a.last_seen_frame = frame.frame_index;
    a.confidence = update_confidence(a, true, config).confidence;
    aligned[idx] = true;
  }

  for (std::size_t i = 0; i < next.anchors.size(); ++i) {
    Anchor& a = next.anchors[i];
    if (!aligned[i]) continue;
    if (a.provisional && a.confidence >= config.kappa_anch) {
      detail::promote_candidate(next, a);
      result.outcomes.push_back(detail::outcome_of(a, OutcomeReason::newly_anchored));
    } else {
      result.outcomes.push_back(detail::outcome_of(a, OutcomeReason::matched));
    }
  }

  propagate_attachments(next);

  std::vector<OutcomeReason> reasons(next.anchors.size(), OutcomeReason::matched);
  for (std::size_t i = 0; i < next.anchors.size(); ++i) {
    if (aligned[i]) continue;
    Anchor& a = next.anchors[i];
    if (a.confidence < config.kappa_anch) {
      // Not consistently perceived yet: no hypothesis, just decay.
      a.parent.reset();
      a.parent_offset.reset();
      a.status = AnchorStatus::lost;
      reasons[i] = OutcomeReason::decay;
    } else if (a.parent) {
      a.status = AnchorStatus::attached;
      reasons[i] = OutcomeReason::parent_follow;
    } else {
      a.status = classify_unmatched(a, frame.percepts, config);
      reasons[i] = a.status == AnchorStatus::occluded      ? OutcomeReason::occluder_overlap
                   : a.status == AnchorStatus::out_of_view ? OutcomeReason::outside_fov
                                                           : OutcomeReason::decay;
    }
  }

  std::unordered_set<std::string> pruned;
  for (std::size_t i = 0; i < next.anchors.size(); ++i) {
    if (aligned[i]) continue;
    Anchor& a = next.anchors[i];
    const auto update = update_confidence(a, false, config);
    if (update.pruned) {
      HypothesisOutcome o = detail::outcome_of(a, OutcomeReason::pruned);
      o.new_confidence = update.confidence;
      result.outcomes.push_back(o);
      pruned.insert(a.anchor_id);
      continue;
    }
    a.confidence = update.confidence;
    result.outcomes.push_back(detail::outcome_of(a, reasons[i]));
  }
  if (!pruned.empty()) {
    std::erase_if(next.anchors, [&](const Anchor& a) { return pruned.count(a.anchor_id) > 0; });
    for (auto& a : next.anchors) {
      if (a.parent && pruned.count(*a.parent)) {
        a.parent.reset();
        a.parent_offset.reset();
        a.status = AnchorStatus::lost;
      }
    }
  }

  for (int id : alignment.unmatched_percepts) {
    Anchor candidate;
    candidate.anchor_id = "~" + std::to_string(next.next_candidate_serial++);
    candidate.attributes = percept_by_id.at(id)->attributes;
    candidate.confidence = 0.0;
    candidate.status = AnchorStatus::visible;
    candidate.last_seen_frame = frame.frame_index;
    candidate.provisional = true;
    next.anchors.push_back(std::move(candidate));
  }
  return result;
}

enum class QueryLevel { anchored, inferable };

inline std::vector<Anchor> query(const WorldModel& model, const EngineConfig& config, QueryLevel level) {
  const double threshold = level == QueryLevel::anchored ? config.kappa_anch : config.kappa_inf;
  std::vector<Anchor> out;
  for (const auto& a : model.anchors)
    if (a.confidence >= threshold) out.push_back(a);
  return out;
}

struct Relation {
  std::string name;  // "attached" or "overlaps"
  std::string first;
  std::string second;

  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation&, const Relation&) = default;
};

/// World-state facts: attached(child, parent) for every attachment edge,
/// then overlaps(a, b) with a < b for inferable anchors sharing area.
inline std::vector<Relation> infer_relations(const WorldModel& model, const EngineConfig& config) {
  std::vector<Relation> attached, overlaps;
  for (const auto& a : model.anchors)
    if (a.parent) attached.push_back({"attached", a.anchor_id, *a.parent});

  auto inferable = query(model, config, QueryLevel::inferable);
  std::sort(inferable.begin(), inferable.end(),
            [](const Anchor& a, const Anchor& b) { return a.anchor_id < b.anchor_id; });
  for (std::size_t i = 0; i < inferable.size(); ++i)
    for (std::size_t j = i + 1; j < inferable.size(); ++j)
      if (boxes_overlap(inferable[i].attributes.box(), inferable[j].attributes.box()))
        overlaps.push_back({"overlaps", inferable[i].anchor_id, inferable[j].anchor_id});

  std::sort(attached.begin(), attached.end());
  attached.insert(attached.end(), overlaps.begin(), overlaps.end());
  return attached;
}

/// Box predicted for the object of `target_type`: the most confident anchored
/// anchor of that type, or else a candidate seen in the current frame.
inline std::optional<Box> predict_target(const WorldModel& model, const EngineConfig& config,
                                         const std::string& target_type) {
  const Anchor* best = nullptr;
  for (const auto& a : model.anchors) {
    if (a.attributes.object_type != target_type || a.confidence < config.kappa_anch) continue;
    if (!best || a.confidence > best->confidence) best = &a;
  }
  if (!best) {
    for (const auto& a : model.anchors) {
      if (a.attributes.object_type != target_type || !a.provisional) continue;
      if (a.last_seen_frame != model.frame_index) continue;
      if (!best || a.confidence > best->confidence) best = &a;
    }
  }
  if (!best) return std::nullopt;
  return best->attributes.box();
}

/// Stateful wrapper owning one stream's world model.
class Engine {
 public:
  explicit Engine(EngineConfig config) : config_(std::move(config)) {
    if (auto errors = validate_config(config_); !errors.empty())
      throw std::invalid_argument("invalid engine config: " + errors.front());
  }

  const StepResult& step(const Frame& frame) {
    last_ = aapa::step(model_, frame, config_);
    model_ = last_.model;
    return last_;
  }

  const WorldModel& model() const { return model_; }
  const EngineConfig& config() const { return config_; }
  std::vector<Anchor> query(QueryLevel level) const { return aapa::query(model_, config_, level); }
  std::optional<Box> predict(const std::string& target_type) const {
    return predict_target(model_, config_, target_type);
  }

 private:
  EngineConfig config_;
  WorldModel model_;
  StepResult last_;
};

}  // namespace aapa
