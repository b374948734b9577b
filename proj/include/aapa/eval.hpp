#pragma once

// Snitch-localisation scoring: mean IoU and mean center L2 per subtask, with
// per-video means aggregated across videos.

#include <array>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aapa/core_model.hpp"
#include "aapa/scenario.hpp"

namespace aapa {

struct CornerBox {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
  friend bool operator==(const CornerBox&, const CornerBox&) = default;
};

inline CornerBox to_corners(const Box& b) { return {b.left(), b.top(), b.right(), b.bottom()}; }
inline Box from_corners(const CornerBox& c) {
  return {{0.5 * (c.x1 + c.x2), 0.5 * (c.y1 + c.y2)}, {c.x2 - c.x1, c.y2 - c.y1}};
}

inline double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

/// A missing prediction counts as a box centered at the image origin.
inline double l2_center(const std::optional<Box>& pred, const Box& truth) {
  const Vec2 p = pred ? pred->center : Vec2{};
  return norm(truth.center - p);
}

inline constexpr std::array<Subtask, 4> kSubtasks{Subtask::visible, Subtask::occluded, Subtask::contained,
                                                  Subtask::carried};
inline constexpr std::size_t kOverall = 4;
inline constexpr std::array<const char*, 5> kBucketNames{"visible", "occluded", "contained", "carried", "overall"};

struct BucketSums {
  double iou = 0.0;
  double l2 = 0.0;
  int frames = 0;
};

/// Frame-level sums for one video; index 4 is the overall bucket.
struct VideoScore {
  bool excluded = false;  // target never detected
  int first_observed = -1;
  std::array<BucketSums, 5> buckets{};
};

inline int first_target_detection(const ScenarioRecord& scenario) {
  for (std::size_t f = 0; f < scenario.detections.size(); ++f)
    for (const auto& p : scenario.detections[f].percepts)
      if (p.attributes.object_type == scenario.target_type) return static_cast<int>(f);
  return -1;
}

inline VideoScore score_video(const std::vector<std::optional<Box>>& predictions, const ScenarioRecord& scenario) {
  if (predictions.size() != scenario.truth.size())
    throw std::invalid_argument("prediction stream has " + std::to_string(predictions.size()) +
                                " frames, scenario has " + std::to_string(scenario.truth.size()));
  VideoScore score;
  score.first_observed = first_target_detection(scenario);
  if (score.first_observed < 0) {
    score.excluded = true;
    return score;
  }
  for (std::size_t f = static_cast<std::size_t>(score.first_observed); f < predictions.size(); ++f) {
    const TruthObject* target = scenario.target_at(f);
    if (!target) continue;
    const Box truth{target->position, target->size};
    const double frame_iou = predictions[f] ? iou(*predictions[f], truth) : 0.0;
    const double frame_l2 = l2_center(predictions[f], truth);
    for (std::size_t bucket : {static_cast<std::size_t>(scenario.truth[f].label), kOverall}) {
      score.buckets[bucket].iou += frame_iou;
      score.buckets[bucket].l2 += frame_l2;
      score.buckets[bucket].frames += 1;
    }
  }
  return score;
}

struct MetricRow {
  std::string tracker;
  std::string subtask;
  double mean_iou = 0.0;
  double sem_iou = 0.0;
  double mean_l2 = 0.0;
  double sem_l2 = 0.0;
  int n_videos = 0;
};

struct MeanSem {
  double mean = 0.0;
  double sem = 0.0;
};

/// Mean and standard error (sample standard deviation / sqrt(n)); SEM is 0
/// for fewer than two values.
inline MeanSem mean_sem(const std::vector<double>& values) {
  MeanSem out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / double(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sem = std::sqrt(ss / double(values.size() - 1)) / std::sqrt(double(values.size()));
  return out;
}

/// One row per bucket (four subtasks then overall). A video contributes to a
/// bucket only if it has scored frames there.
inline std::vector<MetricRow> aggregate_scores(const std::vector<VideoScore>& videos, const std::string& tracker) {
  std::vector<MetricRow> rows;
  for (std::size_t b = 0; b < kBucketNames.size(); ++b) {
    std::vector<double> ious, l2s;
    for (const auto& v : videos) {
      if (v.excluded || v.buckets[b].frames == 0) continue;
      ious.push_back(v.buckets[b].iou / v.buckets[b].frames);
      l2s.push_back(v.buckets[b].l2 / v.buckets[b].frames);
    }
    const MeanSem i = mean_sem(ious), l = mean_sem(l2s);
    rows.push_back({tracker, kBucketNames[b], i.mean, i.sem, l.mean, l.sem, static_cast<int>(ious.size())});
  }
  return rows;
}

inline std::vector<MetricRow> score_stream(const std::vector<std::vector<std::optional<Box>>>& predictions,
                                           const std::vector<ScenarioRecord>& scenarios, const std::string& tracker) {
  if (predictions.size() != scenarios.size())
    throw std::invalid_argument("got " + std::to_string(predictions.size()) + " prediction streams for " +
                                std::to_string(scenarios.size()) + " scenarios");
  std::vector<VideoScore> videos;
  for (std::size_t k = 0; k < scenarios.size(); ++k) videos.push_back(score_video(predictions[k], scenarios[k]));
  return aggregate_scores(videos, tracker);
}

inline const MetricRow* find_row(const std::vector<MetricRow>& rows, const std::string& tracker,
                                 const std::string& subtask) {
  for (const auto& r : rows)
    if (r.tracker == tracker && r.subtask == subtask) return &r;
  return nullptr;
}

inline std::string metrics_csv(const std::vector<MetricRow>& rows) {
  std::ostringstream out;
  out << "tracker,subtask,mean_iou,sem_iou,mean_l2,sem_l2,n_videos\n";
  out << std::setprecision(10);
  for (const auto& r : rows)
    out << r.tracker << ',' << r.subtask << ',' << r.mean_iou << ',' << r.sem_iou << ',' << r.mean_l2 << ','
        << r.sem_l2 << ',' << r.n_videos << '\n';
  return out.str();
}

/// Side-by-side table: one line per tracker, one column per bucket, IoU in
/// percent and L2 in pixels.
inline std::string comparison_table(const std::vector<MetricRow>& rows, const std::vector<std::string>& trackers) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  auto section = [&](const char* title, bool use_iou) {
    out << std::left << std::setw(16) << title;
    for (const char* b : kBucketNames) out << std::setw(18) << b;
    out << '\n';
    for (const auto& t : trackers) {
      out << std::setw(16) << t;
      for (const char* b : kBucketNames) {
        std::ostringstream cell;
        cell << std::fixed << std::setprecision(2);
        if (const MetricRow* r = find_row(rows, t, b); r && r->n_videos > 0) {
          if (use_iou)
            cell << 100.0 * r->mean_iou << " +-" << 100.0 * r->sem_iou;
          else
            cell << r->mean_l2 << " +-" << r->sem_l2;
        } else {
          cell << "-";
        }
        out << std::setw(18) << cell.str();
      }
      out << '\n';
    }
  };
  section("Mean IoU (%)", true);
  out << '\n';
  section("Mean L2 (px)", false);
  return out.str();
}

}  // namespace aapa
