#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aapa/heuristic.hpp"
#include "aapa/io.hpp"
#include "aapa/tracker.hpp"

namespace aapa {

struct TrackRun {
  std::vector<PredictionRecord> predictions;
  std::vector<WorldRecord> world;
  std::vector<std::string> rejected_actions;
};

inline TrackRun run_aapa(const std::vector<Frame>& frames, const EngineConfig& config,
                         const std::string& target_type = "snitch") {
  TrackRun run;
  Engine engine(config);
  for (const auto& frame : frames) {
    const auto& result = engine.step(frame);
    for (const auto& r : result.rejected_actions)
      run.rejected_actions.push_back("frame " + std::to_string(frame.frame_index) + ": " + r);
    run.world.push_back({frame.frame_index, engine.query(QueryLevel::anchored)});
    run.predictions.push_back({frame.frame_index, engine.predict(target_type)});
  }
  return run;
}

inline TrackRun run_heuristic(const std::vector<Frame>& frames, const std::string& target_type = "snitch") {
  TrackRun run;
  HeuristicTracker tracker(target_type);
  for (const auto& frame : frames) run.predictions.push_back({frame.frame_index, tracker.step(frame.percepts)});
  return run;
}

inline std::vector<std::optional<Box>> prediction_boxes(const std::vector<PredictionRecord>& preds) {
  std::vector<std::optional<Box>> boxes;
  boxes.reserve(preds.size());
  for (const auto& p : preds) boxes.push_back(p.pred);
  return boxes;
}

}  // namespace aapa
