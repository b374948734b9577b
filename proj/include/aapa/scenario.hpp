#pragma once

// Deterministic top-down 2D scene generator in the style of CATER: objects
// slide, rotate, get picked and placed, and cones contain other objects and
// carry them around. Produces ground truth, per-frame subtask labels for the
// target, the action log and a (optionally corrupted) detection stream.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "aapa/core_model.hpp"
#include "aapa/tracker.hpp"

namespace aapa {

enum class Subtask { visible, occluded, contained, carried };

inline const char* to_string(Subtask s) {
  switch (s) {
    case Subtask::visible: return "visible";
    case Subtask::occluded: return "occluded";
    case Subtask::contained: return "contained";
    case Subtask::carried: return "carried";
  }
  return "visible";
}

inline std::optional<Subtask> parse_subtask(const std::string& s) {
  if (s == "visible") return Subtask::visible;
  if (s == "occluded") return Subtask::occluded;
  if (s == "contained") return Subtask::contained;
  if (s == "carried") return Subtask::carried;
  return std::nullopt;
}

enum class ScriptKind { slide, rotate, pick_place, contain };

inline const char* to_string(ScriptKind k) {
  switch (k) {
    case ScriptKind::slide: return "slide";
    case ScriptKind::rotate: return "rotate";
    case ScriptKind::pick_place: return "pick_place";
    case ScriptKind::contain: return "contain";
  }
  return "slide";
}

inline std::optional<ScriptKind> parse_script_kind(const std::string& s) {
  if (s == "slide") return ScriptKind::slide;
  if (s == "rotate") return ScriptKind::rotate;
  if (s == "pick_place") return ScriptKind::pick_place;
  if (s == "contain") return ScriptKind::contain;
  return std::nullopt;
}

struct ObjectSpec {
  std::string type;
  Vec2 position;  // world frame
  Vec2 size;
  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

/// Scripted action. slide / pick_place move `object` to `destination` during
/// frames [start, start + duration). contain moves the cone `object` onto
/// `target` over the same window and binds them at frame start + duration.
/// rotate swaps the object's width and height at `start`.
struct ScriptEvent {
  ScriptKind kind = ScriptKind::slide;
  std::string object;
  std::string target;
  Vec2 destination;
  int start = 0;
  int duration = 1;
  friend bool operator==(const ScriptEvent&, const ScriptEvent&) = default;
};

struct CameraWaypoint {
  int frame = 0;
  Vec2 pose;
  friend bool operator==(const CameraWaypoint&, const CameraWaypoint&) = default;
};

struct NoiseConfig {
  double miss_rate = 0.0;
  double ghost_rate = 0.0;
  double jitter_sigma = 0.0;
  int flicker_burst_length = 1;
  int burst_cooldown = 0;  // frames a detection is kept after a miss burst
  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  int frames = 300;
  Vec2 viewport{360.0, 240.0};
  std::map<std::string, int> object_counts{{"cone", 2}, {"cube", 1}, {"sphere", 1}, {"cylinder", 1}, {"snitch", 1}};
  std::vector<ObjectSpec> objects;  // explicit layout; random from counts when empty
  std::vector<ScriptEvent> script;
  std::vector<CameraWaypoint> camera_path;
  NoiseConfig noise;
  double occlusion_threshold = 0.5;
  std::string target_type = "snitch";
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct TruthObject {
  std::string name;
  std::string type;
  Vec2 position;  // image frame
  Vec2 world;
  Vec2 size;
  bool visible = false;
  std::optional<std::string> container;
  friend bool operator==(const TruthObject&, const TruthObject&) = default;
};

struct TruthFrame {
  int frame = 0;
  Vec2 camera;
  Subtask label = Subtask::visible;
  std::vector<TruthObject> objects;
  friend bool operator==(const TruthFrame&, const TruthFrame&) = default;
};

struct ScenarioRecord {
  std::string target_name;
  std::string target_type = "snitch";
  std::vector<TruthFrame> truth;
  std::vector<Frame> detections;  // per frame: camera, percepts, actions

  const TruthObject* target_at(std::size_t frame) const {
    for (const auto& o : truth[frame].objects)
      if (o.name == target_name) return &o;
    return nullptr;
  }
  friend bool operator==(const ScenarioRecord&, const ScenarioRecord&) = default;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(int event_index, const std::string& what)
      : std::runtime_error(event_index >= 0 ? "script event " + std::to_string(event_index) + ": " + what : what),
        event_index_(event_index) {}
  int event_index() const { return event_index_; }

 private:
  int event_index_;
};

inline Vec2 camera_pose_at(const std::vector<CameraWaypoint>& path, int frame) {
  if (path.empty()) return {};
  if (frame <= path.front().frame) return path.front().pose;
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (frame > path[k].frame) continue;
    const auto& a = path[k - 1];
    const auto& b = path[k];
    if (frame == b.frame) return b.pose;
    const double t = double(frame - a.frame) / double(b.frame - a.frame);
    return a.pose + t * (b.pose - a.pose);
  }
  return path.back().pose;
}

/// Subtask of the target in `cur`, given the previous frame for the motion
/// test. Contained objects are carried while their outermost container moves.
inline Subtask derive_label(const TruthFrame* prev, const TruthFrame& cur, const std::string& target_name) {
  auto find = [](const TruthFrame& f, const std::string& name) -> const TruthObject* {
    for (const auto& o : f.objects)
      if (o.name == name) return &o;
    return nullptr;
  };
  const TruthObject* target = find(cur, target_name);
  if (!target) return Subtask::occluded;
  if (target->container) {
    const TruthObject* outer = target;
    for (std::size_t guard = 0; outer->container && guard <= cur.objects.size(); ++guard) {
      const TruthObject* up = find(cur, *outer->container);
      if (!up) break;
      outer = up;
    }
    const TruthObject* before = prev ? find(*prev, outer->name) : nullptr;
    return before && !(before->world == outer->world) ? Subtask::carried : Subtask::contained;
  }
  return target->visible ? Subtask::visible : Subtask::occluded;
}

namespace detail {

inline const std::vector<std::string>& scene_types() {
  static const std::vector<std::string> types{"cone", "cube", "cylinder", "snitch", "sphere"};
  return types;
}

inline Vec2 random_size(const std::string& type, std::mt19937_64& rng) {
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto roundv = [](double v) { return std::round(v); };
  if (type == "snitch") {
    const double s = roundv(uni(12, 16));
    return {s, s};
  }
  if (type == "cone") {
    const double s = roundv(uni(26, 40));
    return {s, s};
  }
  if (type == "sphere") {
    const double s = roundv(uni(16, 26));
    return {s, s};
  }
  return {roundv(uni(18, 28)), roundv(uni(18, 28))};
}

inline std::vector<std::string> object_names(const std::vector<ObjectSpec>& objects) {
  std::map<std::string, int> counter;
  std::vector<std::string> names;
  for (const auto& o : objects) names.push_back(o.type + std::to_string(counter[o.type]++));
  return names;
}

struct SimObject {
  std::string name;
  std::string type;
  Vec2 world;
  Vec2 size;
  int container = -1;
  Vec2 offset;
  int last_moved = -1;
};

struct ActiveMotion {
  std::size_t event_index;
  Vec2 from;
  Vec2 to;
};

}  // namespace detail

/// Random non-overlapping layout for the configured object counts.
inline std::vector<ObjectSpec> random_layout(const ScenarioConfig& config, std::mt19937_64& rng, double margin = 25.0) {
  std::vector<ObjectSpec> objects;
  for (const auto& [type, count] : config.object_counts)
    for (int k = 0; k < count; ++k) objects.push_back({type, {}, detail::random_size(type, rng)});

  for (std::size_t i = 0; i < objects.size(); ++i) {
    std::uniform_real_distribution<double> ux(margin, config.viewport.x - margin);
    std::uniform_real_distribution<double> uy(margin, config.viewport.y - margin);
    bool placed = false;
    for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
      Box candidate{{std::round(ux(rng)), std::round(uy(rng))}, objects[i].size};
      Box padded{candidate.center, candidate.size + Vec2{8.0, 8.0}};
      placed = std::none_of(objects.begin(), objects.begin() + static_cast<std::ptrdiff_t>(i),
                            [&](const ObjectSpec& o) { return boxes_overlap(padded, Box{o.position, o.size}); });
      if (placed) objects[i].position = candidate.center;
    }
    if (!placed) throw ScenarioError(-1, "could not place " + objects[i].type + " without overlap");
  }
  return objects;
}

/// Drops detections in bursts, injects short-lived ghosts and jitters
/// centers. Percept ids are renumbered 0..n-1 per frame afterwards.
inline std::vector<Frame> corrupt(const std::vector<Frame>& clean, const NoiseConfig& noise, std::uint64_t seed,
                                  Vec2 viewport = {360.0, 240.0}) {
  if (noise.miss_rate < 0.0 || noise.miss_rate > 1.0 || noise.ghost_rate < 0.0 || noise.ghost_rate > 1.0)
    throw std::invalid_argument("noise rates must lie in [0,1]");
  const int max_burst = std::max(1, noise.flicker_burst_length);

  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::bernoulli_distribution miss(noise.miss_rate);
  std::bernoulli_distribution ghost(noise.ghost_rate);
  std::uniform_int_distribution<int> burst(1, max_burst);
  std::normal_distribution<double> jitter(0.0, noise.jitter_sigma > 0.0 ? noise.jitter_sigma : 1.0);

  struct MissState {
    int remaining = 0;
    int cooldown = 0;
  };
  struct Ghost {
    Attributes attributes;
    int remaining = 0;
  };
  std::map<int, MissState> misses;
  std::vector<Ghost> ghosts;

  std::vector<Frame> out;
  out.reserve(clean.size());
  for (const auto& frame : clean) {
    Frame noisy = frame;
    noisy.percepts.clear();
    for (const auto& p : frame.percepts) {
      MissState& st = misses[p.percept_id];
      bool drop = false;
      if (st.remaining > 0) {
        drop = true;
        if (--st.remaining == 0) st.cooldown = noise.burst_cooldown;
      } else if (st.cooldown > 0) {
        --st.cooldown;
      } else if (miss(rng)) {
        drop = true;
        st.remaining = burst(rng) - 1;
        if (st.remaining == 0) st.cooldown = noise.burst_cooldown;
      }
      if (drop) continue;
      Percept kept = p;
      if (noise.jitter_sigma > 0.0) {
        kept.attributes.position.x += jitter(rng);
        kept.attributes.position.y += jitter(rng);
      }
      noisy.percepts.push_back(kept);
    }

    for (auto& g : ghosts) {
      noisy.percepts.push_back({0, g.attributes, 0.5});
      --g.remaining;
    }
    std::erase_if(ghosts, [](const Ghost& g) { return g.remaining <= 0; });
    if (ghost(rng)) {
      const auto& types = detail::scene_types();
      Ghost g;
      g.attributes.object_type = types[std::uniform_int_distribution<std::size_t>(0, types.size() - 1)(rng)];
      g.attributes.position = {std::uniform_real_distribution<double>(0.0, viewport.x)(rng),
                               std::uniform_real_distribution<double>(0.0, viewport.y)(rng)};
      const double w = std::round(std::uniform_real_distribution<double>(10.0, 40.0)(rng));
      const double h = std::round(std::uniform_real_distribution<double>(10.0, 40.0)(rng));
      g.attributes.size = {w, h};
      g.remaining = burst(rng);
      noisy.percepts.push_back({0, g.attributes, 0.5});
      if (--g.remaining > 0) ghosts.push_back(g);
    }

    for (std::size_t k = 0; k < noisy.percepts.size(); ++k) noisy.percepts[k].percept_id = static_cast<int>(k);
    out.push_back(std::move(noisy));
  }
  return out;
}

/// Runs the script and renders ground truth plus detections.
inline ScenarioRecord generate(const ScenarioConfig& config) {
  if (config.frames <= 0) throw ScenarioError(-1, "frames must be positive");
  if (config.noise.miss_rate < 0.0 || config.noise.miss_rate > 1.0 || config.noise.ghost_rate < 0.0 ||
      config.noise.ghost_rate > 1.0)
    throw ScenarioError(-1, "noise rates must lie in [0,1]");

  std::mt19937_64 rng(config.seed);
  const std::vector<ObjectSpec> layout = config.objects.empty() ? random_layout(config, rng) : config.objects;
  const auto names = detail::object_names(layout);

  std::vector<detail::SimObject> objects;
  int targets = 0;
  std::size_t target_index = 0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (!(layout[i].size.x > 0.0 && layout[i].size.y > 0.0))
      throw ScenarioError(-1, names[i] + " has a non-positive size");
    objects.push_back({names[i], layout[i].type, layout[i].position, layout[i].size, -1, {}, -1});
    if (layout[i].type == config.target_type) {
      ++targets;
      target_index = i;
    }
  }
  if (targets != 1) throw ScenarioError(-1, "scenario must contain exactly one " + config.target_type);

  auto index_of = [&](const std::string& name, int event) -> std::size_t {
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i].name == name) return i;
    throw ScenarioError(event, "unknown object '" + name + "'");
  };

  // Static validation of the script.
  for (std::size_t e = 0; e < config.script.size(); ++e) {
    const auto& ev = config.script[e];
    const int idx = static_cast<int>(e);
    index_of(ev.object, idx);
    if (ev.start < 0 || ev.duration < 1) throw ScenarioError(idx, "start must be >= 0 and duration >= 1");
    if (ev.kind == ScriptKind::contain) {
      const auto c = index_of(ev.object, idx);
      if (ev.target.empty()) throw ScenarioError(idx, "contain needs a target");
      const auto t = index_of(ev.target, idx);
      if (objects[c].type != "cone") throw ScenarioError(idx, "only cones can contain");
      if (c == t) throw ScenarioError(idx, "an object cannot contain itself");
    }
  }

  ScenarioRecord record;
  record.target_name = objects[target_index].name;
  record.target_type = config.target_type;

  auto reposition_children = [&] {
    // Containers come first in any chain; iterate until stable.
    for (std::size_t pass = 0; pass < objects.size(); ++pass)
      for (auto& o : objects)
        if (o.container >= 0) o.world = objects[static_cast<std::size_t>(o.container)].world + o.offset;
  };
  auto mark_moved = [&](std::size_t root, int frame) {
    for (std::size_t i = 0; i < objects.size(); ++i) {
      for (int cur = static_cast<int>(i); cur >= 0; cur = objects[static_cast<std::size_t>(cur)].container) {
        if (static_cast<std::size_t>(cur) == root) {
          objects[i].last_moved = frame;
          break;
        }
      }
    }
  };
  auto target_argument = [&](std::size_t t) {
    return objects[t].type == config.target_type ? objects[t].type : objects[t].name;
  };

  std::vector<detail::ActiveMotion> motions;
  std::vector<Frame> clean;

  for (int f = 0; f < config.frames; ++f) {
    Frame frame;
    frame.frame_index = f;
    frame.camera_pose = camera_pose_at(config.camera_path, f);

    // Bindings happen with the positions reached at the end of the previous
    // frame.
    for (std::size_t e = 0; e < config.script.size(); ++e) {
      const auto& ev = config.script[e];
      if (ev.kind != ScriptKind::contain || ev.start + ev.duration != f) continue;
      const auto c = index_of(ev.object, static_cast<int>(e));
      const auto t = index_of(ev.target, static_cast<int>(e));
      if (objects[t].container >= 0) throw ScenarioError(static_cast<int>(e), "target is already contained");
      objects[t].container = static_cast<int>(c);
      objects[t].offset = objects[t].world - objects[c].world;
      frame.actions.push_back({"contain", {objects[c].name, target_argument(t)}, f});
    }

    for (std::size_t e = 0; e < config.script.size(); ++e) {
      const auto& ev = config.script[e];
      if (ev.start != f) continue;
      const int idx = static_cast<int>(e);
      const auto o = index_of(ev.object, idx);
      if (objects[o].container >= 0) throw ScenarioError(idx, ev.object + " is contained and cannot act");
      switch (ev.kind) {
        case ScriptKind::rotate:
          std::swap(objects[o].size.x, objects[o].size.y);
          mark_moved(o, f);
          frame.actions.push_back({"rotate", {objects[o].name}, f});
          break;
        case ScriptKind::slide:
        case ScriptKind::pick_place:
          motions.push_back({e, objects[o].world, ev.destination});
          frame.actions.push_back({to_string(ev.kind), {objects[o].name}, f});
          break;
        case ScriptKind::contain: {
          const auto t = index_of(ev.target, idx);
          if (objects[t].container >= 0) throw ScenarioError(idx, "target is already contained");
          if (!(objects[o].size.x > objects[t].size.x && objects[o].size.y > objects[t].size.y))
            throw ScenarioError(idx, "container must be larger than its target");
          motions.push_back({e, objects[o].world, objects[t].world});
          break;
        }
      }
    }

    for (const auto& m : motions) {
      const auto& ev = config.script[m.event_index];
      const int k = f - ev.start + 1;
      if (k < 1 || k > ev.duration) continue;
      const auto o = index_of(ev.object, static_cast<int>(m.event_index));
      objects[o].world = k == ev.duration ? m.to : m.from + (double(k) / ev.duration) * (m.to - m.from);
      mark_moved(o, f);
    }
    std::erase_if(motions, [&](const detail::ActiveMotion& m) {
      const auto& ev = config.script[m.event_index];
      return f >= ev.start + ev.duration - 1;
    });
    reposition_children();

    // Visibility: contained objects are hidden; others need their center in
    // view and no more than the threshold fraction covered by an object
    // stacked above them (most recently moved on top).
    TruthFrame truth;
    truth.frame = f;
    truth.camera = frame.camera_pose;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const auto& o = objects[i];
      TruthObject t;
      t.name = o.name;
      t.type = o.type;
      t.world = o.world;
      t.position = o.world - frame.camera_pose;
      t.size = o.size;
      if (o.container >= 0) t.container = objects[static_cast<std::size_t>(o.container)].name;

      bool visible = o.container < 0 && t.position.x >= 0.0 && t.position.x < config.viewport.x &&
                     t.position.y >= 0.0 && t.position.y < config.viewport.y;
      const Box mine{o.world, o.size};
      for (std::size_t q = 0; q < objects.size() && visible; ++q) {
        const auto& other = objects[q];
        if (q == i || other.container >= 0) continue;
        const bool above = other.last_moved > o.last_moved || (other.last_moved == o.last_moved && q > i);
        if (above && intersection_area(mine, Box{other.world, other.size}) > config.occlusion_threshold * mine.area())
          visible = false;
      }
      t.visible = visible;
      truth.objects.push_back(std::move(t));
    }
    truth.label = derive_label(record.truth.empty() ? nullptr : &record.truth.back(), truth, record.target_name);

    for (std::size_t i = 0; i < truth.objects.size(); ++i) {
      const auto& t = truth.objects[i];
      if (!t.visible) continue;
      Percept p;
      p.percept_id = static_cast<int>(i);
      p.attributes.object_type = t.type;
      p.attributes.position = t.position;
      p.attributes.size = t.size;
      p.detector_score = 1.0;
      frame.percepts.push_back(std::move(p));
    }
    record.truth.push_back(std::move(truth));
    clean.push_back(std::move(frame));
  }

  record.detections = corrupt(clean, config.noise, config.seed, config.viewport);
  return record;
}

// ---------------------------------------------------------------------------
// Scenario suites

/// Appends sequential events while tracking where every object ends up, so
/// that destinations can be chosen against the current layout.
class ScriptBuilder {
 public:
  ScriptBuilder(const ScenarioConfig& config, std::vector<ObjectSpec> layout)
      : viewport_(config.viewport), layout_(std::move(layout)), names_(detail::object_names(layout_)) {
    container_.assign(layout_.size(), -1);
  }

  int cursor() const { return cursor_; }
  void wait(int frames) { cursor_ += frames; }
  const std::vector<ObjectSpec>& layout() const { return layout_; }
  const std::vector<ScriptEvent>& events() const { return events_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  Vec2 position(std::size_t i) const { return layout_[i].position; }
  Vec2 size(std::size_t i) const { return layout_[i].size; }
  bool contained(std::size_t i) const { return container_[i] >= 0; }
  bool is_container(std::size_t i) const {
    return std::find(container_.begin(), container_.end(), static_cast<int>(i)) != container_.end();
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  /// True when moving object `i` in a straight line to `dest` keeps it clear
  /// of every other free-standing object except `allowed` and those it
  /// already overlaps at the start.
  bool path_clear(std::size_t i, Vec2 dest, std::optional<std::size_t> allowed = std::nullopt,
                  double clearance = 4.0) const {
    const Vec2 from = layout_[i].position;
    const double length = norm(dest - from);
    const int steps = std::max(1, static_cast<int>(std::ceil(length / 2.0)));
    const Vec2 grown = layout_[i].size + Vec2{2 * clearance, 2 * clearance};
    const Box start{from, grown};
    for (int s = 0; s <= steps; ++s) {
      const Box moving{from + (double(s) / steps) * (dest - from), grown};
      for (std::size_t q = 0; q < layout_.size(); ++q) {
        if (q == i || container_[q] >= 0 || (allowed && q == *allowed)) continue;
        if (boxes_overlap(start, Box{layout_[q].position, layout_[q].size})) continue;
        if (boxes_overlap(moving, Box{layout_[q].position, layout_[q].size})) return false;
      }
    }
    return true;
  }

  bool in_bounds(std::size_t i, Vec2 dest, double margin) const {
    const Vec2 half = 0.5 * layout_[i].size;
    return dest.x - half.x >= margin && dest.x + half.x <= viewport_.x - margin && dest.y - half.y >= margin &&
           dest.y + half.y <= viewport_.y - margin;
  }

  void move(ScriptKind kind, std::size_t i, Vec2 dest, int duration) {
    events_.push_back({kind, names_[i], "", dest, cursor_, duration});
    shift_tree(i, dest - layout_[i].position);
    cursor_ += duration;
  }

  void rotate(std::size_t i) {
    events_.push_back({ScriptKind::rotate, names_[i], "", {}, cursor_, 1});
    std::swap(layout_[i].size.x, layout_[i].size.y);
    cursor_ += 1;
  }

  /// The binding happens one frame after arrival; the cursor ends past it.
  void contain(std::size_t cone, std::size_t target, int duration) {
    events_.push_back({ScriptKind::contain, names_[cone], names_[target], {}, cursor_, duration});
    shift_tree(cone, layout_[target].position - layout_[cone].position);
    container_[target] = static_cast<int>(cone);
    cursor_ += duration + 1;
  }

  /// Random reachable destination for object `i`, or nothing.
  std::optional<Vec2> random_destination(std::size_t i, std::mt19937_64& rng, double min_dist, double max_dist,
                                         double margin) const {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> dist(min_dist, max_dist);
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double a = angle(rng), d = dist(rng);
      const Vec2 dest{std::round(layout_[i].position.x + d * std::cos(a)),
                      std::round(layout_[i].position.y + d * std::sin(a))};
      if (in_bounds(i, dest, margin) && path_clear(i, dest)) return dest;
    }
    return std::nullopt;
  }

 private:
  void shift_tree(std::size_t root, Vec2 delta) {
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      for (int cur = static_cast<int>(i); cur >= 0; cur = container_[static_cast<std::size_t>(cur)]) {
        if (static_cast<std::size_t>(cur) == root) {
          layout_[i].position += delta;
          break;
        }
      }
    }
  }

  Vec2 viewport_;
  std::vector<ObjectSpec> layout_;
  std::vector<std::string> names_;
  std::vector<int> container_;
  std::vector<ScriptEvent> events_;
  int cursor_ = 0;
};

enum class SuiteKind { mixed, carried, camera, noisy, static_scene };

inline std::optional<SuiteKind> parse_suite(const std::string& s) {
  if (s == "mixed") return SuiteKind::mixed;
  if (s == "carried") return SuiteKind::carried;
  if (s == "camera") return SuiteKind::camera;
  if (s == "noisy") return SuiteKind::noisy;
  if (s == "static") return SuiteKind::static_scene;
  return std::nullopt;
}

namespace detail {

inline int motion_duration(Vec2 from, Vec2 to, double speed) {
  return std::max(2, static_cast<int>(std::ceil(norm(to - from) / speed)));
}

// Random housekeeping moves of objects other than `avoid` until `until`.
inline void random_moves(ScriptBuilder& b, std::mt19937_64& rng, int until, std::size_t avoid, double margin) {
  std::uniform_int_distribution<int> kind_pick(0, 3);
  for (int guard = 0; guard < 64 && b.cursor() < until; ++guard) {
    std::vector<std::size_t> movable;
    for (std::size_t i = 0; i < b.layout().size(); ++i)
      if (i != avoid && !b.contained(i)) movable.push_back(i);
    if (movable.empty()) break;
    const std::size_t i = movable[std::uniform_int_distribution<std::size_t>(0, movable.size() - 1)(rng)];
    const int kind = kind_pick(rng);
    if (kind == 0) {
      if (b.size(i).x == b.size(i).y || b.is_container(i)) continue;
      b.rotate(i);
    } else {
      auto dest = b.random_destination(i, rng, 20.0, 70.0, margin);
      if (!dest) continue;
      const double speed = kind == 1 ? 3.0 : 5.0;
      const int duration = motion_duration(b.position(i), *dest, speed);
      if (b.cursor() + duration >= until) break;
      b.move(kind == 1 ? ScriptKind::slide : ScriptKind::pick_place, i, *dest, duration);
    }
    b.wait(std::uniform_int_distribution<int>(2, 8)(rng));
  }
}

// Places an occluder over `target`, holds it there, then moves it away.
inline bool occlude(ScriptBuilder& b, std::mt19937_64& rng, std::size_t target, double margin) {
  std::vector<std::size_t> occluders;
  for (std::size_t i = 0; i < b.layout().size(); ++i) {
    if (i == target || b.contained(i) || b.is_container(i)) continue;
    if (b.size(i).x > b.size(target).x + 4 && b.size(i).y > b.size(target).y + 4) occluders.push_back(i);
  }
  std::shuffle(occluders.begin(), occluders.end(), rng);
  for (std::size_t occ : occluders) {
    if (!b.path_clear(occ, b.position(target), target)) continue;
    b.move(ScriptKind::slide, occ, b.position(target), motion_duration(b.position(occ), b.position(target), 3.0));
    b.wait(std::uniform_int_distribution<int>(8, 20)(rng));
    for (int attempt = 0; attempt < 50; ++attempt) {
      auto dest = b.random_destination(occ, rng, 45.0, 80.0, margin);
      if (!dest) continue;
      b.move(ScriptKind::slide, occ, *dest, motion_duration(b.position(occ), *dest, 3.0));
      return true;
    }
    return true;
  }
  return false;
}

inline std::optional<std::size_t> pick_container(ScriptBuilder& b, std::mt19937_64& rng, std::size_t target,
                                                 bool smallest = false) {
  std::vector<std::size_t> cones;
  for (std::size_t i = 0; i < b.layout().size(); ++i) {
    if (i == target || b.contained(i) || b.layout()[i].type != "cone" || b.is_container(i)) continue;
    if (b.size(i).x >= b.size(target).x + 6 && b.size(i).y >= b.size(target).y + 6 &&
        b.path_clear(i, b.position(target), target))
      cones.push_back(i);
  }
  if (cones.empty()) return std::nullopt;
  if (smallest)
    return *std::min_element(cones.begin(), cones.end(),
                             [&](std::size_t a, std::size_t c) { return b.size(a).x < b.size(c).x; });
  return cones[std::uniform_int_distribution<std::size_t>(0, cones.size() - 1)(rng)];
}

inline bool carry(ScriptBuilder& b, std::mt19937_64& rng, std::size_t container, double margin) {
  auto dest = b.random_destination(container, rng, 50.0, 110.0, margin);
  if (!dest) return false;
  std::uniform_int_distribution<int> kind(0, 1);
  const bool slide = kind(rng) == 0;
  b.move(slide ? ScriptKind::slide : ScriptKind::pick_place, container, *dest,
         motion_duration(b.position(container), *dest, slide ? 3.0 : 5.0));
  return true;
}

}  // namespace detail

/// Ready-made scenario families:
///  - mixed: every subtask, including cone-in-cone-on-target chains, noiseless
///  - carried: target contained and carried, with a small distractor placed
///    next to it on the side away from the approaching cone
///  - camera: eight static objects under a piecewise-linear camera pan
///  - noisy: a few slides with ghosts and short miss bursts
///  - static: no events, no camera motion
inline ScenarioConfig make_suite(SuiteKind kind, std::uint64_t seed, int frames = 300) {
  ScenarioConfig config;
  config.seed = seed;
  config.frames = frames;
  std::mt19937_64 rng(seed * 0x2545F4914F6CDD1DULL + static_cast<std::uint64_t>(kind) + 1);
  const double margin = 20.0;

  switch (kind) {
    case SuiteKind::static_scene: {
      config.objects = random_layout(config, rng);
      return config;
    }
    case SuiteKind::camera: {
      config.object_counts = {{"cone", 2}, {"cube", 2}, {"cylinder", 2}, {"sphere", 1}, {"snitch", 1}};
      config.objects = random_layout(config, rng);
      std::uniform_real_distribution<double> pan(-120.0, 120.0);
      config.camera_path.push_back({0, {0.0, 0.0}});
      for (int k = 1; k <= 4; ++k)
        config.camera_path.push_back({k * frames / 5, {std::round(pan(rng)), std::round(0.5 * pan(rng))}});
      config.camera_path.push_back({frames - 1, {0.0, 0.0}});
      return config;
    }
    case SuiteKind::noisy: {
      config.object_counts = {{"cone", 1}, {"cube", 1}, {"cylinder", 1}, {"sphere", 1}, {"snitch", 1}};
      config.objects = random_layout(config, rng, 30.0);
      ScriptBuilder b(config, config.objects);
      b.wait(30);
      detail::random_moves(b, rng, frames - 30, b.layout().size(), 30.0);
      config.script = b.events();
      config.noise = {0.02, 0.3, 0.0, 3, 10};
      return config;
    }
    case SuiteKind::mixed:
    case SuiteKind::carried:
      break;
  }

  if (kind == SuiteKind::carried) {
    // Target in the middle, a cone approaching from one side, a small sphere
    // on the opposite side, a couple of bystanders elsewhere.
    const double snitch_size = std::round(std::uniform_real_distribution<double>(12, 16)(rng));
    const double cone_size = std::round(std::uniform_real_distribution<double>(34, 40)(rng));
    const double side = std::uniform_int_distribution<int>(0, 1)(rng) ? 1.0 : -1.0;
    const Vec2 target{std::round(std::uniform_real_distribution<double>(150, 210)(rng)),
                      std::round(std::uniform_real_distribution<double>(100, 140)(rng))};
    const double distractor_size = 8.0;
    const double gap = std::uniform_real_distribution<double>(1.0, 2.0)(rng);
    std::vector<ObjectSpec> objects{
        {"snitch", target, {snitch_size, snitch_size}},
        {"cone", target + Vec2{side * 70.0, 0.0}, {cone_size, cone_size}},
        {"sphere", target - Vec2{side * (0.5 * snitch_size + 0.5 * distractor_size + gap), 0.0},
         {distractor_size, distractor_size}},
        {"cube", {std::round(target.x - 110.0), 45.0}, {22, 22}},
        {"cylinder", {std::round(target.x + 110.0), 200.0}, {20, 24}},
    };
    ScriptBuilder b(config, objects);
    b.wait(std::uniform_int_distribution<int>(10, 25)(rng));
    b.contain(1, 0, detail::motion_duration(b.position(1), b.position(0), 3.0));
    b.wait(2);
    while (b.cursor() < frames - 40) {
      if (!detail::carry(b, rng, 1, margin)) break;
      b.wait(std::uniform_int_distribution<int>(1, 6)(rng));
    }
    config.objects = objects;
    config.script = b.events();
    return config;
  }

  // Mixed suite.
  config.object_counts = {{"cone", 3}, {"cube", 1}, {"cylinder", 1}, {"sphere", 1}, {"snitch", 1}};
  std::vector<ObjectSpec> objects;
  for (int attempt = 0;; ++attempt) {
    objects = random_layout(config, rng, 30.0);
    // Three cones of clearly different sizes so nested containment works.
    std::vector<std::size_t> cones;
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i].type == "cone") cones.push_back(i);
    const double base = std::round(std::uniform_real_distribution<double>(24, 27)(rng));
    for (std::size_t k = 0; k < cones.size(); ++k) {
      const double s = base + 7.0 * double(k);
      objects[cones[k]].size = {s, s};
    }
    bool overlapping = false;
    for (std::size_t i = 0; i < objects.size(); ++i)
      for (std::size_t j = i + 1; j < objects.size(); ++j)
        overlapping |= boxes_overlap(Box{objects[i].position, objects[i].size + Vec2{6, 6}},
                                     Box{objects[j].position, objects[j].size});
    if (!overlapping || attempt > 100) break;
  }
  config.objects = objects;
  config.camera_path = {{0, {0, 0}},
                        {frames / 2, {std::round(std::uniform_real_distribution<double>(-8, 8)(rng)),
                                      std::round(std::uniform_real_distribution<double>(-6, 6)(rng))}},
                        {frames - 1, {0, 0}}};

  ScriptBuilder b(config, objects);
  std::size_t target = 0;
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i].type == "snitch") target = i;

  b.wait(std::uniform_int_distribution<int>(8, 15)(rng));
  detail::random_moves(b, rng, b.cursor() + 25, target, margin);
  // The target moves while visible.
  if (auto dest = b.random_destination(target, rng, 30.0, 60.0, margin)) {
    b.move(ScriptKind::slide, target, *dest, detail::motion_duration(b.position(target), *dest, 3.0));
    b.wait(3);
  }
  detail::occlude(b, rng, target, margin);
  b.wait(5);
  const bool nested = seed % 2 == 0;
  if (auto cone = detail::pick_container(b, rng, target, nested)) {
    b.contain(*cone, target, detail::motion_duration(b.position(*cone), b.position(target), 3.0));
    b.wait(std::uniform_int_distribution<int>(4, 10)(rng));
    detail::carry(b, rng, *cone, margin);
    b.wait(std::uniform_int_distribution<int>(4, 10)(rng));
    // Nest the loaded cone inside a larger one on even seeds.
    if (nested) {
      if (auto outer = detail::pick_container(b, rng, *cone)) {
        b.contain(*outer, *cone, detail::motion_duration(b.position(*outer), b.position(*cone), 3.0));
        b.wait(std::uniform_int_distribution<int>(3, 8)(rng));
        detail::carry(b, rng, *outer, margin);
        b.wait(std::uniform_int_distribution<int>(3, 8)(rng));
        detail::carry(b, rng, *outer, margin);
      }
    } else {
      detail::carry(b, rng, *cone, margin);
    }
  }
  detail::random_moves(b, rng, frames - 5, target, margin);
  config.script = b.events();
  return config;
}

}  // namespace aapa
