#pragma once

// Line-delimited JSON wire formats and configuration files.
//
//   frame record:  {"frame", "camera": [x,y],
//                   "detections": [{"id","type","score","pos": [x,y],"size": [w,h]}],
//                   "actions": [{"name","args": [...]}]}
//   world record:  {"frame", "anchors": [{"id","type","pos","size","conf","status","parent"?}]}
//   prediction:    {"frame", "pred": {"pos","size"} | null}
//   truth record:  {"frame", "camera", "label",
//                   "objects": [{"name","type","pos","world","size","visible","container"?}]}

#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aapa/core_model.hpp"
#include "aapa/scenario.hpp"
#include "aapa/tracker.hpp"
#include "json.hpp"

namespace aapa {

using json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WorldRecord {
  int frame = 0;
  std::vector<Anchor> anchors;
  friend bool operator==(const WorldRecord&, const WorldRecord&) = default;
};

struct PredictionRecord {
  int frame = 0;
  std::optional<Box> pred;
  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

namespace detail {

inline json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

inline Vec2 vec_from(const json& j, const char* field) {
  if (!j.contains(field)) throw IoError(std::string("missing field '") + field + "'");
  const json& v = j.at(field);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw IoError(std::string("field '") + field + "' must be a 2-element number array");
  return {v[0].get<double>(), v[1].get<double>()};
}

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw IoError(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw IoError(std::string("field '") + name + "' has the wrong type");
  }
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

// Calls `fn(json, line_number)` for each non-blank line; wraps parse and
// field errors with the path and line number.
template <class Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_in(path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line), line_no);
    } catch (const json::parse_error& e) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON");
    } catch (const IoError& e) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

inline void write_lines(const std::filesystem::path& path, const std::vector<json>& lines) {
  auto out = open_out(path);
  for (const auto& j : lines) out << j.dump() << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace detail

// --- frames ---------------------------------------------------------------

inline json to_json(const Frame& frame) {
  json detections = json::array();
  for (const auto& p : frame.percepts) {
    json d{{"id", p.percept_id},
           {"type", p.attributes.object_type},
           {"score", p.detector_score},
           {"pos", detail::vec_json(p.attributes.position)},
           {"size", detail::vec_json(p.attributes.size)}};
    if (!p.attributes.extras.empty()) d["extras"] = p.attributes.extras;
    detections.push_back(std::move(d));
  }
  json actions = json::array();
  for (const auto& a : frame.actions) actions.push_back({{"name", a.name}, {"args", a.arguments}});
  return {{"frame", frame.frame_index},
          {"camera", detail::vec_json(frame.camera_pose)},
          {"detections", std::move(detections)},
          {"actions", std::move(actions)}};
}

inline Frame frame_from_json(const json& j) {
  if (!j.is_object()) throw IoError("frame record must be a JSON object");
  Frame frame;
  frame.frame_index = detail::field<int>(j, "frame");
  frame.camera_pose = j.contains("camera") ? detail::vec_from(j, "camera") : Vec2{};
  std::set<int> ids;
  for (const auto& d : j.value("detections", json::array())) {
    Percept p;
    p.percept_id = detail::field<int>(d, "id");
    p.attributes.object_type = detail::field<std::string>(d, "type");
    p.detector_score = d.value("score", 1.0);
    p.attributes.position = detail::vec_from(d, "pos");
    p.attributes.size = detail::vec_from(d, "size");
    if (!is_finite(p.attributes.position)) throw IoError("field 'pos' must be finite");
    if (!(p.attributes.size.x > 0.0 && p.attributes.size.y > 0.0)) throw IoError("field 'size' must be positive");
    if (!(p.detector_score >= 0.0 && p.detector_score <= 1.0)) throw IoError("field 'score' must lie in [0,1]");
    if (d.contains("extras")) p.attributes.extras = d.at("extras").get<std::map<std::string, std::vector<double>>>();
    if (!ids.insert(p.percept_id).second) throw IoError("duplicate detection id " + std::to_string(p.percept_id));
    frame.percepts.push_back(std::move(p));
  }
  for (const auto& a : j.value("actions", json::array())) {
    ActionEvent event;
    event.name = detail::field<std::string>(a, "name");
    event.arguments = detail::field<std::vector<std::string>>(a, "args");
    if (event.arguments.empty()) throw IoError("action '" + event.name + "' has no arguments");
    event.frame_index = frame.frame_index;
    frame.actions.push_back(std::move(event));
  }
  return frame;
}

inline std::vector<Frame> read_detection_stream(const std::filesystem::path& path) {
  std::vector<Frame> frames;
  detail::for_each_json_line(path, [&](const json& j, int) {
    Frame f = frame_from_json(j);
    if (!frames.empty() && f.frame_index <= frames.back().frame_index)
      throw IoError("frame index " + std::to_string(f.frame_index) + " is not increasing");
    frames.push_back(std::move(f));
  });
  return frames;
}

inline void write_detection_stream(const std::filesystem::path& path, const std::vector<Frame>& frames) {
  std::vector<json> lines;
  for (const auto& f : frames) lines.push_back(to_json(f));
  detail::write_lines(path, lines);
}

// --- world stream ---------------------------------------------------------

inline json to_json(const WorldRecord& record) {
  json anchors = json::array();
  for (const auto& a : record.anchors) {
    json j{{"id", a.anchor_id},
           {"type", a.attributes.object_type},
           {"pos", detail::vec_json(a.attributes.position)},
           {"size", detail::vec_json(a.attributes.size)},
           {"conf", a.confidence},
           {"status", to_string(a.status)}};
    if (a.parent) j["parent"] = *a.parent;
    if (a.parent_offset) j["offset"] = detail::vec_json(*a.parent_offset);
    anchors.push_back(std::move(j));
  }
  return {{"frame", record.frame}, {"anchors", std::move(anchors)}};
}

inline WorldRecord world_record_from_json(const json& j) {
  WorldRecord record;
  record.frame = detail::field<int>(j, "frame");
  for (const auto& a : detail::field<json>(j, "anchors")) {
    Anchor anchor;
    anchor.anchor_id = detail::field<std::string>(a, "id");
    anchor.attributes.object_type = detail::field<std::string>(a, "type");
    anchor.attributes.position = detail::vec_from(a, "pos");
    anchor.attributes.size = detail::vec_from(a, "size");
    anchor.confidence = detail::field<double>(a, "conf");
    const auto status = parse_anchor_status(detail::field<std::string>(a, "status"));
    if (!status) throw IoError("unknown status");
    anchor.status = *status;
    if (a.contains("parent")) anchor.parent = a.at("parent").get<std::string>();
    if (a.contains("offset")) anchor.parent_offset = detail::vec_from(a, "offset");
    record.anchors.push_back(std::move(anchor));
  }
  return record;
}

inline void write_world_stream(const std::filesystem::path& path, const std::vector<WorldRecord>& records) {
  std::vector<json> lines;
  for (const auto& r : records) lines.push_back(to_json(r));
  detail::write_lines(path, lines);
}

inline std::vector<WorldRecord> read_world_stream(const std::filesystem::path& path) {
  std::vector<WorldRecord> records;
  detail::for_each_json_line(path, [&](const json& j, int) { records.push_back(world_record_from_json(j)); });
  return records;
}

// --- predictions ----------------------------------------------------------

inline json to_json(const PredictionRecord& p) {
  json j{{"frame", p.frame}, {"pred", nullptr}};
  if (p.pred) j["pred"] = {{"pos", detail::vec_json(p.pred->center)}, {"size", detail::vec_json(p.pred->size)}};
  return j;
}

inline void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& preds) {
  std::vector<json> lines;
  for (const auto& p : preds) lines.push_back(to_json(p));
  detail::write_lines(path, lines);
}

/// Reads a prediction stream. World-stream lines are accepted too: the
/// prediction is then the most confident anchor of `target_type`.
inline std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path,
                                                      const std::string& target_type = "snitch") {
  std::vector<PredictionRecord> preds;
  detail::for_each_json_line(path, [&](const json& j, int) {
    PredictionRecord p;
    p.frame = detail::field<int>(j, "frame");
    if (j.contains("anchors")) {
      const WorldRecord w = world_record_from_json(j);
      const Anchor* best = nullptr;
      for (const auto& a : w.anchors)
        if (a.attributes.object_type == target_type && (!best || a.confidence > best->confidence)) best = &a;
      if (best) p.pred = best->attributes.box();
    } else {
      const json& pred = detail::field<json>(j, "pred");
      if (!pred.is_null()) p.pred = Box{detail::vec_from(pred, "pos"), detail::vec_from(pred, "size")};
    }
    if (!preds.empty() && p.frame <= preds.back().frame)
      throw IoError("frame index " + std::to_string(p.frame) + " is not increasing");
    preds.push_back(p);
  });
  return preds;
}

// --- scenario files -------------------------------------------------------

inline json to_json(const TruthFrame& t) {
  json objects = json::array();
  for (const auto& o : t.objects) {
    json j{{"name", o.name},
           {"type", o.type},
           {"pos", detail::vec_json(o.position)},
           {"world", detail::vec_json(o.world)},
           {"size", detail::vec_json(o.size)},
           {"visible", o.visible}};
    if (o.container) j["container"] = *o.container;
    objects.push_back(std::move(j));
  }
  return {{"frame", t.frame},
          {"camera", detail::vec_json(t.camera)},
          {"label", to_string(t.label)},
          {"objects", std::move(objects)}};
}

inline TruthFrame truth_from_json(const json& j) {
  TruthFrame t;
  t.frame = detail::field<int>(j, "frame");
  t.camera = detail::vec_from(j, "camera");
  const auto label = parse_subtask(detail::field<std::string>(j, "label"));
  if (!label) throw IoError("unknown subtask label");
  t.label = *label;
  for (const auto& o : detail::field<json>(j, "objects")) {
    TruthObject obj;
    obj.name = detail::field<std::string>(o, "name");
    obj.type = detail::field<std::string>(o, "type");
    obj.position = detail::vec_from(o, "pos");
    obj.world = detail::vec_from(o, "world");
    obj.size = detail::vec_from(o, "size");
    obj.visible = detail::field<bool>(o, "visible");
    if (o.contains("container")) obj.container = o.at("container").get<std::string>();
    t.objects.push_back(std::move(obj));
  }
  return t;
}

inline json to_json(const ScenarioConfig& c) {
  json objects = json::array();
  for (const auto& o : c.objects)
    objects.push_back({{"type", o.type}, {"pos", detail::vec_json(o.position)}, {"size", detail::vec_json(o.size)}});
  json script = json::array();
  for (const auto& e : c.script) {
    json j{{"kind", to_string(e.kind)}, {"object", e.object}, {"start", e.start}, {"duration", e.duration}};
    if (!e.target.empty()) j["target"] = e.target;
    if (e.kind == ScriptKind::slide || e.kind == ScriptKind::pick_place)
      j["destination"] = detail::vec_json(e.destination);
    script.push_back(std::move(j));
  }
  json camera = json::array();
  for (const auto& w : c.camera_path) camera.push_back({{"frame", w.frame}, {"pose", detail::vec_json(w.pose)}});
  return {{"seed", c.seed},
          {"frames", c.frames},
          {"viewport", detail::vec_json(c.viewport)},
          {"object_counts", c.object_counts},
          {"objects", std::move(objects)},
          {"script", std::move(script)},
          {"camera_path", std::move(camera)},
          {"noise",
           {{"miss_rate", c.noise.miss_rate},
            {"ghost_rate", c.noise.ghost_rate},
            {"jitter_sigma", c.noise.jitter_sigma},
            {"flicker_burst_length", c.noise.flicker_burst_length},
            {"burst_cooldown", c.noise.burst_cooldown}}},
          {"occlusion_threshold", c.occlusion_threshold},
          {"target_type", c.target_type}};
}

/// Missing keys keep the values already in `base`.
inline ScenarioConfig scenario_config_from_json(const json& j, ScenarioConfig base = {}) {
  ScenarioConfig c = std::move(base);
  try {
    c.seed = j.value("seed", c.seed);
    c.frames = j.value("frames", c.frames);
    if (j.contains("viewport")) c.viewport = detail::vec_from(j, "viewport");
    if (j.contains("object_counts")) c.object_counts = j.at("object_counts").get<std::map<std::string, int>>();
    if (j.contains("objects")) {
      c.objects.clear();
      for (const auto& o : j.at("objects"))
        c.objects.push_back({detail::field<std::string>(o, "type"), detail::vec_from(o, "pos"),
                             detail::vec_from(o, "size")});
    }
    if (j.contains("script")) {
      c.script.clear();
      for (const auto& e : j.at("script")) {
        ScriptEvent ev;
        const auto kind = parse_script_kind(detail::field<std::string>(e, "kind"));
        if (!kind) throw IoError("unknown script kind '" + e.at("kind").get<std::string>() + "'");
        ev.kind = *kind;
        ev.object = detail::field<std::string>(e, "object");
        ev.target = e.value("target", std::string{});
        if (e.contains("destination")) ev.destination = detail::vec_from(e, "destination");
        ev.start = detail::field<int>(e, "start");
        ev.duration = e.value("duration", 1);
        c.script.push_back(std::move(ev));
      }
    }
    if (j.contains("camera_path")) {
      c.camera_path.clear();
      for (const auto& w : j.at("camera_path"))
        c.camera_path.push_back({detail::field<int>(w, "frame"), detail::vec_from(w, "pose")});
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      c.noise.miss_rate = n.value("miss_rate", c.noise.miss_rate);
      c.noise.ghost_rate = n.value("ghost_rate", c.noise.ghost_rate);
      c.noise.jitter_sigma = n.value("jitter_sigma", c.noise.jitter_sigma);
      c.noise.flicker_burst_length = n.value("flicker_burst_length", c.noise.flicker_burst_length);
      c.noise.burst_cooldown = n.value("burst_cooldown", c.noise.burst_cooldown);
    }
    c.occlusion_threshold = j.value("occlusion_threshold", c.occlusion_threshold);
    c.target_type = j.value("target_type", c.target_type);
  } catch (const json::exception& e) {
    throw IoError(std::string("invalid scenario config: ") + e.what());
  }
  return c;
}

inline void write_scenario(const std::filesystem::path& dir, const ScenarioRecord& record,
                           const ScenarioConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_detection_stream(dir / "detections.jsonl", record.detections);
  std::vector<json> truth;
  for (const auto& t : record.truth) truth.push_back(to_json(t));
  detail::write_lines(dir / "truth.jsonl", truth);
  auto out = detail::open_out(dir / "scenario.json");
  json meta{{"target_name", record.target_name}, {"target_type", record.target_type}, {"config", to_json(config)}};
  out << meta.dump(2) << '\n';
}

inline ScenarioRecord read_scenario(const std::filesystem::path& dir) {
  ScenarioRecord record;
  auto in = detail::open_in(dir / "scenario.json");
  try {
    const json meta = json::parse(in);
    record.target_name = meta.at("target_name").get<std::string>();
    record.target_type = meta.at("target_type").get<std::string>();
  } catch (const json::exception& e) {
    throw IoError((dir / "scenario.json").string() + ": " + e.what());
  }
  record.detections = read_detection_stream(dir / "detections.jsonl");
  detail::for_each_json_line(dir / "truth.jsonl",
                             [&](const json& j, int) { record.truth.push_back(truth_from_json(j)); });
  if (record.truth.size() != record.detections.size())
    throw IoError(dir.string() + ": truth and detection streams differ in length");
  return record;
}

// --- engine config --------------------------------------------------------

inline json to_json(const EngineConfig& c) {
  json rules = json::array();
  for (const auto& r : c.action_rules) {
    if (const auto* a = std::get_if<AttachEffect>(&r.effect))
      rules.push_back({{"action", r.action_name}, {"effect", "attach"}, {"child", a->child_arg}, {"parent", a->parent_arg}});
    else
      rules.push_back(
          {{"action", r.action_name}, {"effect", "detach"}, {"child", std::get<DetachEffect>(r.effect).child_arg}});
  }
  return {{"tau", c.tau},
          {"psi_mismatch", c.psi_mismatch},
          {"conf_inc", c.conf_inc},
          {"conf_dec", c.conf_dec},
          {"kappa_anch", c.kappa_anch},
          {"kappa_inf", c.kappa_inf},
          {"field_of_view", detail::vec_json(c.field_of_view)},
          {"action_rules", std::move(rules)}};
}

inline std::optional<EngineConfig> engine_preset(const std::string& name) {
  if (name == "benchmark") return benchmark_preset();
  if (name == "assembly") return assembly_preset();
  return std::nullopt;
}

/// Starts from the named "preset" (default: benchmark) and overrides any
/// field present. Throws IoError when the result violates a constraint.
inline EngineConfig engine_config_from_json(const json& j) {
  if (!j.is_object()) throw IoError("engine config must be a JSON object");
  const std::string preset = j.value("preset", std::string("benchmark"));
  auto base = engine_preset(preset);
  if (!base) throw IoError("unknown preset '" + preset + "'");
  EngineConfig c = *base;
  try {
    c.tau = j.value("tau", c.tau);
    c.psi_mismatch = j.value("psi_mismatch", c.psi_mismatch);
    c.conf_inc = j.value("conf_inc", c.conf_inc);
    c.conf_dec = j.value("conf_dec", c.conf_dec);
    c.kappa_anch = j.value("kappa_anch", c.kappa_anch);
    c.kappa_inf = j.value("kappa_inf", std::max(c.kappa_inf, c.kappa_anch));
    if (j.contains("field_of_view")) c.field_of_view = detail::vec_from(j, "field_of_view");
    if (j.contains("action_rules")) {
      c.action_rules.clear();
      for (const auto& r : j.at("action_rules")) {
        const std::string effect = detail::field<std::string>(r, "effect");
        const std::string action = detail::field<std::string>(r, "action");
        if (effect == "attach")
          c.action_rules.push_back(
              {action, AttachEffect{detail::field<std::size_t>(r, "child"), detail::field<std::size_t>(r, "parent")}});
        else if (effect == "detach")
          c.action_rules.push_back({action, DetachEffect{detail::field<std::size_t>(r, "child")}});
        else
          throw IoError("unknown rule effect '" + effect + "'");
      }
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("invalid engine config: ") + e.what());
  }
  if (auto errors = validate_config(c); !errors.empty()) throw IoError("invalid engine config: " + errors.front());
  return c;
}

inline EngineConfig load_engine_config(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  try {
    return engine_config_from_json(json::parse(in));
  } catch (const json::parse_error&) {
    throw IoError(path.string() + ": malformed JSON");
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace aapa
