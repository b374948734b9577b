#pragma once

// Domain types for action-aware perceptual anchoring: percepts coming out of a
// detector, the anchors maintained across frames, and the world model that
// owns them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace aapa {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double squared_norm(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

/// Axis-aligned box stored as center + (width, height), image frame with the
/// origin at the top-left corner, x to the right and y down.
struct Box {
  Vec2 center;
  Vec2 size;

  double left() const { return center.x - 0.5 * size.x; }
  double right() const { return center.x + 0.5 * size.x; }
  double top() const { return center.y - 0.5 * size.y; }
  double bottom() const { return center.y + 0.5 * size.y; }
  double area() const { return size.x * size.y; }

  friend bool operator==(const Box&, const Box&) = default;
};

inline double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

// Touching edges do not count.
inline bool boxes_overlap(const Box& a, const Box& b) { return intersection_area(a, b) > 0.0; }

struct Attributes {
  std::string object_type;
  Vec2 position;  // bounding-box center
  Vec2 size;      // width, height; both > 0
  std::map<std::string, std::vector<double>> extras;

  Box box() const { return {position, size}; }
  bool valid() const { return is_finite(position) && size.x > 0.0 && size.y > 0.0; }

  friend bool operator==(const Attributes&, const Attributes&) = default;
};

struct Percept {
  int percept_id = 0;
  Attributes attributes;
  double detector_score = 1.0;

  friend bool operator==(const Percept&, const Percept&) = default;
};

enum class AnchorStatus { visible, occluded, out_of_view, attached, lost };

inline const char* to_string(AnchorStatus s) {
  switch (s) {
    case AnchorStatus::visible: return "visible";
    case AnchorStatus::occluded: return "occluded";
    case AnchorStatus::out_of_view: return "out_of_view";
    case AnchorStatus::attached: return "attached";
    case AnchorStatus::lost: return "lost";
  }
  return "lost";
}

inline std::optional<AnchorStatus> parse_anchor_status(const std::string& s) {
  if (s == "visible") return AnchorStatus::visible;
  if (s == "occluded") return AnchorStatus::occluded;
  if (s == "out_of_view") return AnchorStatus::out_of_view;
  if (s == "attached") return AnchorStatus::attached;
  if (s == "lost") return AnchorStatus::lost;
  return std::nullopt;
}

/// A persistent symbol for one physical object.
///
/// Candidates that have not yet reached the anchoring threshold are kept in
/// the same container with `provisional` set and an id of the form "~N"; they
/// receive their public typeN id on first crossing kappa_anch.
struct Anchor {
  std::string anchor_id;
  Attributes attributes;
  double confidence = 0.0;
  AnchorStatus status = AnchorStatus::visible;
  int last_seen_frame = -1;
  std::optional<std::string> parent;
  std::optional<Vec2> parent_offset;
  bool provisional = false;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct WorldModel {
  int frame_index = -1;
  std::vector<Anchor> anchors;  // creation order
  Vec2 camera_pose;
  std::map<std::string, int> next_instance_counter;
  std::uint64_t next_candidate_serial = 0;

  Anchor* find(const std::string& id) {
    auto it = std::find_if(anchors.begin(), anchors.end(),
                           [&](const Anchor& a) { return a.anchor_id == id; });
    return it == anchors.end() ? nullptr : &*it;
  }
  const Anchor* find(const std::string& id) const {
    auto it = std::find_if(anchors.begin(), anchors.end(),
                           [&](const Anchor& a) { return a.anchor_id == id; });
    return it == anchors.end() ? nullptr : &*it;
  }

  friend bool operator==(const WorldModel&, const WorldModel&) = default;
};

struct ActionEvent {
  std::string name;
  std::vector<std::string> arguments;
  int frame_index = 0;

  friend bool operator==(const ActionEvent&, const ActionEvent&) = default;
};

struct AttachEffect {
  std::size_t child_arg = 0;
  std::size_t parent_arg = 1;
  friend bool operator==(const AttachEffect&, const AttachEffect&) = default;
};

struct DetachEffect {
  std::size_t child_arg = 0;
  friend bool operator==(const DetachEffect&, const DetachEffect&) = default;
};

struct ActionRule {
  std::string action_name;
  std::variant<AttachEffect, DetachEffect> effect;

  friend bool operator==(const ActionRule&, const ActionRule&) = default;
};

struct EngineConfig {
  double tau = 6500.0;
  double psi_mismatch = 100.0;
  double conf_inc = 0.1;
  double conf_dec = 0.1;
  double kappa_anch = 0.1;
  double kappa_inf = 0.1;
  Vec2 field_of_view{360.0, 240.0};
  std::vector<ActionRule> action_rules;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

inline std::vector<ActionRule> default_action_rules() {
  return {
      {"contain", AttachEffect{1, 0}},   // contain(container, object)
      {"pick_up", AttachEffect{1, 0}},   // pick_up(hand, object)
      {"insert", AttachEffect{0, 1}},    // insert(object, case)
      {"place", DetachEffect{1}},        // place(hand, object)
      {"uncontain", DetachEffect{1}},    // uncontain(container, object)
  };
}

/// Parameters used for the snitch-localisation benchmark: reliable synthetic
/// detections, anchoring after two consecutive sightings.
inline EngineConfig benchmark_preset() {
  EngineConfig c;
  c.tau = 6500.0;
  c.conf_inc = 0.1;
  c.conf_dec = 0.1;
  c.kappa_anch = 0.1;
  c.kappa_inf = 0.1;
  c.action_rules = default_action_rules();
  return c;
}

/// Parameters tuned for a noisy real detector (flickering ghosts).
inline EngineConfig assembly_preset() {
  EngineConfig c = benchmark_preset();
  c.kappa_anch = 0.5;
  c.kappa_inf = 0.8;
  c.conf_inc = 0.05;
  c.conf_dec = 0.1;
  return c;
}

/// Returns an empty list when the config is usable, otherwise one message per
/// broken constraint.
inline std::vector<std::string> validate_config(const EngineConfig& c) {
  std::vector<std::string> errors;
  if (!(c.tau > 0.0)) errors.push_back("tau must be > 0");
  if (!(c.psi_mismatch >= 1.0)) errors.push_back("psi_mismatch must be >= 1");
  if (!(c.conf_inc > 0.0 && c.conf_inc < 1.0)) errors.push_back("conf_inc must be in (0,1)");
  if (!(c.conf_dec > 0.0 && c.conf_dec < 1.0)) errors.push_back("conf_dec must be in (0,1)");
  if (!(c.kappa_anch > 0.0 && c.kappa_anch <= c.kappa_inf && c.kappa_inf <= 1.0))
    errors.push_back("thresholds must satisfy 0 < kappa_anch <= kappa_inf <= 1");
  if (!(c.field_of_view.x > 0.0 && c.field_of_view.y > 0.0))
    errors.push_back("field_of_view must be positive");
  return errors;
}

/// Checks every WorldModel invariant. Each entry names the offending anchor
/// and the broken rule; an empty result means the model is consistent.
inline std::vector<std::string> validate_world_model(const WorldModel& model) {
  std::vector<std::string> violations;
  std::unordered_map<std::string, const Anchor*> by_id;
  std::set<std::string> reported_duplicates;

  for (const auto& a : model.anchors) {
    if (a.anchor_id.empty()) {
      violations.push_back("anchor with empty id");
      continue;
    }
    auto [it, inserted] = by_id.emplace(a.anchor_id, &a);
    if (!inserted && reported_duplicates.insert(a.anchor_id).second)
      violations.push_back(a.anchor_id + ": duplicate id");
  }

  for (const auto& a : model.anchors) {
    const std::string& id = a.anchor_id;
    if (!(a.confidence >= 0.0 && a.confidence <= 1.0))
      violations.push_back(id + ": confidence outside [0,1]");
    if (!a.attributes.valid()) violations.push_back(id + ": invalid attributes");

    const bool has_parent = a.parent.has_value();
    const bool is_attached = a.status == AnchorStatus::attached;
    const bool has_offset = a.parent_offset.has_value();
    if (has_parent != is_attached || has_parent != has_offset)
      violations.push_back(id + ": parent/status/offset mismatch");

    if (has_parent && *a.parent != id && !by_id.count(*a.parent))
      violations.push_back(id + ": unknown parent " + *a.parent);
  }

  // Walk parent edges from every node. Only members of a cycle get back to
  // themselves, so each member is reported once.
  for (const auto& a : model.anchors) {
    if (!a.parent) continue;
    std::set<std::string> seen{a.anchor_id};
    const Anchor* cur = &a;
    while (cur && cur->parent) {
      const std::string& next = *cur->parent;
      if (seen.count(next)) {
        if (next == a.anchor_id) violations.push_back(a.anchor_id + ": attachment cycle");
        break;
      }
      seen.insert(next);
      auto it = by_id.find(next);
      cur = it == by_id.end() ? nullptr : it->second;
    }
  }
  return violations;
}

}  // namespace aapa
