#pragma once

// Command-line front end: simulate -> track -> eval, and compare for batches.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aapa/eval.hpp"
#include "aapa/io.hpp"
#include "aapa/pipeline.hpp"
#include "aapa/scenario.hpp"

namespace aapa::cli {

namespace fs = std::filesystem;

inline constexpr const char* kConfigEnv = "AAPA_CONFIG";

struct EngineOptions {
  std::string config_path;
  std::string preset;
};

inline EngineConfig resolve_engine_config(const EngineOptions& opts) {
  if (!opts.config_path.empty()) return load_engine_config(opts.config_path);
  if (!opts.preset.empty()) {
    auto preset = engine_preset(opts.preset);
    if (!preset) throw IoError("unknown preset '" + opts.preset + "'");
    return *preset;
  }
  if (const char* env = std::getenv(kConfigEnv); env && *env) return load_engine_config(env);
  return benchmark_preset();
}

inline json metrics_json(const std::vector<MetricRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"tracker", r.tracker},
                   {"subtask", r.subtask},
                   {"mean_iou", r.mean_iou},
                   {"sem_iou", r.sem_iou},
                   {"mean_l2", r.mean_l2},
                   {"sem_l2", r.sem_l2},
                   {"n_videos", r.n_videos}});
  return out;
}

inline void write_metrics(const std::vector<MetricRow>& rows, const std::string& csv, const std::string& json_path) {
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw IoError("cannot open " + csv + " for writing");
    out << metrics_csv(rows);
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw IoError("cannot open " + json_path + " for writing");
    out << metrics_json(rows).dump(2) << '\n';
  }
}

inline std::vector<fs::path> scenario_dirs(const fs::path& root) {
  if (fs::exists(root / "scenario.json")) return {root};
  std::vector<fs::path> dirs;
  if (!fs::is_directory(root)) throw IoError(root.string() + " is not a directory");
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory() && fs::exists(entry.path() / "scenario.json")) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw IoError("no scenarios found under " + root.string());
  return dirs;
}

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Action-aware perceptual anchoring: simulate, track and evaluate object permanence"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic scenarios");
  std::uint64_t seed = 0;
  int frames = 300;
  int count = 1;
  std::string out_dir, scenario_config, suite_name;
  double miss_rate = -1, ghost_rate = -1, jitter = -1;
  int burst = -1, cooldown = -1;
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--frames", frames, "Frames per scenario")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--config", scenario_config, "Scenario config JSON")->check(CLI::ExistingFile);
  simulate->add_option("--suite", suite_name, "mixed|carried|camera|noisy|static");
  simulate->add_option("--count", count, "Number of scenarios (seed, seed+1, ...)")->check(CLI::PositiveNumber);
  simulate->add_option("--miss-rate", miss_rate, "Detection miss rate")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--ghost-rate", ghost_rate, "Ghost spawn rate per frame")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--jitter", jitter, "Center jitter sigma (px)")->check(CLI::NonNegativeNumber);
  simulate->add_option("--burst", burst, "Max miss burst / ghost lifetime (frames)")->check(CLI::PositiveNumber);
  simulate->add_option("--cooldown", cooldown, "Frames kept after a miss burst")->check(CLI::NonNegativeNumber);

  // track
  auto* track = app.add_subcommand("track", "Run a tracker over a detection stream");
  std::string tracker_name = "aapa", detections, scenario_dir, world_out, pred_out, target = "snitch";
  EngineOptions engine_opts;
  track->add_option("--tracker", tracker_name, "aapa|heuristic")->check(CLI::IsMember({"aapa", "heuristic"}));
  track->add_option("--config", engine_opts.config_path, "Engine config JSON (default: $AAPA_CONFIG)")
      ->check(CLI::ExistingFile);
  track->add_option("--preset", engine_opts.preset, "benchmark|assembly");
  auto* det_opt = track->add_option("--detections", detections, "Detection stream (JSONL)")->check(CLI::ExistingFile);
  track->add_option("--scenario", scenario_dir, "Scenario directory (uses its detections)")
      ->check(CLI::ExistingDirectory)
      ->excludes(det_opt);
  track->add_option("--world", world_out, "World stream output (aapa only)");
  track->add_option("--predictions", pred_out, "Target prediction output");
  track->add_option("--target", target, "Target object type");

  // eval
  auto* eval = app.add_subcommand("eval", "Score target predictions against a scenario");
  std::string eval_preds, eval_scenario, eval_label = "tracker", csv_out, json_out;
  eval->add_option("--predictions", eval_preds, "Prediction or world stream")->required()->check(CLI::ExistingFile);
  eval->add_option("--scenario", eval_scenario, "Scenario directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--label", eval_label, "Tracker name for the table");
  eval->add_option("--csv", csv_out, "Write metrics CSV");
  eval->add_option("--json", json_out, "Write metrics JSON");

  // compare
  auto* compare = app.add_subcommand("compare", "Run both trackers over scenarios and tabulate");
  std::string compare_root;
  EngineOptions compare_opts;
  compare->add_option("--scenarios", compare_root, "Directory of scenarios")->required()->check(CLI::ExistingDirectory);
  compare->add_option("--config", compare_opts.config_path, "Engine config JSON")->check(CLI::ExistingFile);
  compare->add_option("--preset", compare_opts.preset, "benchmark|assembly");
  compare->add_option("--csv", csv_out, "Write metrics CSV");
  compare->add_option("--json", json_out, "Write metrics JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*simulate) {
      std::optional<SuiteKind> suite;
      if (!suite_name.empty()) {
        suite = parse_suite(suite_name);
        if (!suite) throw IoError("unknown suite '" + suite_name + "'");
      }
      ScenarioConfig base;
      if (!scenario_config.empty()) {
        auto in = detail::open_in(scenario_config);
        base = scenario_config_from_json(json::parse(in));
      }
      for (int k = 0; k < count; ++k) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
        ScenarioConfig config = suite ? make_suite(*suite, s, frames) : base;
        if (!suite) {
          config.seed = s;
          if (simulate->count("--frames")) config.frames = frames;
        }
        if (miss_rate >= 0) config.noise.miss_rate = miss_rate;
        if (ghost_rate >= 0) config.noise.ghost_rate = ghost_rate;
        if (jitter >= 0) config.noise.jitter_sigma = jitter;
        if (burst >= 0) config.noise.flicker_burst_length = burst;
        if (cooldown >= 0) config.noise.burst_cooldown = cooldown;
        const ScenarioRecord record = generate(config);
        char name[32];
        std::snprintf(name, sizeof name, "seed_%06llu", static_cast<unsigned long long>(s));
        const fs::path dir = count == 1 ? fs::path(out_dir) : fs::path(out_dir) / name;
        write_scenario(dir, record, config);
      }
      return 0;
    }

    if (*track) {
      if (detections.empty() && scenario_dir.empty()) throw IoError("track needs --detections or --scenario");
      if (world_out.empty() && pred_out.empty()) throw IoError("track needs --world and/or --predictions");
      const auto frames_in = read_detection_stream(detections.empty() ? fs::path(scenario_dir) / "detections.jsonl"
                                                                      : fs::path(detections));
      TrackRun run;
      if (tracker_name == "aapa") {
        run = run_aapa(frames_in, resolve_engine_config(engine_opts), target);
        for (const auto& r : run.rejected_actions) err << "warning: " << r << '\n';
        if (!world_out.empty()) write_world_stream(world_out, run.world);
      } else {
        if (!world_out.empty()) throw IoError("--world is only available for the aapa tracker");
        run = run_heuristic(frames_in, target);
      }
      if (!pred_out.empty()) write_predictions(pred_out, run.predictions);
      return 0;
    }

    if (*eval) {
      const ScenarioRecord record = read_scenario(eval_scenario);
      const auto preds = read_predictions(eval_preds, record.target_type);
      const VideoScore score = score_video(prediction_boxes(preds), record);
      if (score.excluded) err << "note: target never detected; video excluded\n";
      const auto rows = aggregate_scores({score}, eval_label);
      out << comparison_table(rows, {eval_label});
      write_metrics(rows, csv_out, json_out);
      return 0;
    }

    if (*compare) {
      const EngineConfig config = resolve_engine_config(compare_opts);
      std::vector<VideoScore> aapa_scores, heuristic_scores;
      int excluded = 0;
      for (const auto& dir : scenario_dirs(compare_root)) {
        const ScenarioRecord record = read_scenario(dir);
        const auto a = run_aapa(record.detections, config, record.target_type);
        const auto h = run_heuristic(record.detections, record.target_type);
        aapa_scores.push_back(score_video(prediction_boxes(a.predictions), record));
        heuristic_scores.push_back(score_video(prediction_boxes(h.predictions), record));
        excluded += aapa_scores.back().excluded ? 1 : 0;
      }
      auto rows = aggregate_scores(heuristic_scores, "heuristic");
      const auto aapa_rows = aggregate_scores(aapa_scores, "aapa");
      rows.insert(rows.end(), aapa_rows.begin(), aapa_rows.end());
      out << comparison_table(rows, {"heuristic", "aapa"});
      if (excluded) out << excluded << " video(s) excluded: target never detected\n";
      write_metrics(rows, csv_out, json_out);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace aapa::cli
