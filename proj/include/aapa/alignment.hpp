#pragma once

// Correspondence between maintained anchors and the percepts of a new frame.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "aapa/assignment.hpp"
#include "aapa/core_model.hpp"

namespace aapa {

struct Match {
  int percept_id = 0;
  std::string anchor_id;
  double cost = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

struct AlignmentResult {
  std::vector<Match> matches;
  std::vector<int> unmatched_percepts;
  std::vector<std::string> unmatched_anchors;

  friend bool operator==(const AlignmentResult&, const AlignmentResult&) = default;
};

/// Shifts every anchor against the viewport displacement so that static
/// objects keep their image-frame position consistent with the new pose.
inline std::vector<Anchor> compensate_camera_motion(std::vector<Anchor> anchors, Vec2 pose_prev,
                                                    Vec2 pose_next) {
  const Vec2 shift = pose_next - pose_prev;
  for (auto& a : anchors) a.attributes.position -= shift;
  return anchors;
}

inline double type_factor(const std::string& a, const std::string& b, const EngineConfig& config) {
  return a == b ? 1.0 : config.psi_mismatch;
}

/// Dissimilarity of a percept and an anchor estimate: squared center distance
/// plus squared size difference, scaled by psi when the types disagree.
inline double alignment_cost(const Attributes& percept, const Attributes& anchor,
                             const EngineConfig& config) {
  return type_factor(percept.object_type, anchor.object_type, config) *
         (squared_norm(percept.position - anchor.position) + squared_norm(percept.size - anchor.size));
}

/// Rows are percepts, columns are anchors.
inline CostMatrix build_cost_matrix(std::span<const Percept> percepts, std::span<const Anchor> anchors,
                                    const EngineConfig& config) {
  CostMatrix costs(percepts.size(), anchors.size());
  for (std::size_t i = 0; i < percepts.size(); ++i)
    for (std::size_t j = 0; j < anchors.size(); ++j)
      costs(i, j) = alignment_cost(percepts[i].attributes, anchors[j].attributes, config);
  return costs;
}

namespace detail {

// One assignment pass over the given percept and anchor subsets; marks the
// indices it pairs.
inline void match_subset(std::span<const Percept> percepts, std::span<const Anchor> anchors,
                         const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
                         const EngineConfig& config, std::vector<int>& percept_match,
                         std::vector<double>& match_cost) {
  if (rows.empty() || cols.empty()) return;
  CostMatrix costs(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      costs(i, j) = alignment_cost(percepts[rows[i]].attributes, anchors[cols[j]].attributes, config);

  // Every pair at or above tau is equally unacceptable; clipping keeps one
  // expensive forced pair from outweighing a valid match elsewhere.
  CostMatrix clipped = costs;
  for (std::size_t i = 0; i < clipped.rows(); ++i)
    for (std::size_t j = 0; j < clipped.cols(); ++j) clipped(i, j) = std::min(clipped(i, j), config.tau);

  for (auto [i, j] : solve_assignment(clipped, 10.0 * config.tau).pairs) {
    if (!(costs(i, j) < config.tau)) continue;
    percept_match[rows[i]] = static_cast<int>(cols[j]);
    match_cost[rows[i]] = costs(i, j);
  }
}

}  // namespace detail

/// Optimal matching of already camera-compensated anchors to percepts. Pairs
/// whose cost is not below tau are reported unmatched on both sides.
///
/// Anchored entries (confidence >= kappa_anch) are matched first; leftover
/// percepts then compete for the candidates. A single joint pass lets a
/// candidate spawned by a ghost pull a real percept away from its anchor
/// whenever two moderate costs sum below one clean match plus tau.
inline AlignmentResult align_anchors(std::span<const Percept> percepts, std::span<const Anchor> anchors,
                                     const EngineConfig& config) {
  std::vector<int> percept_match(percepts.size(), -1);
  std::vector<double> match_cost(percepts.size(), 0.0);
  std::vector<std::size_t> all_rows(percepts.size()), anchored, candidates;
  for (std::size_t i = 0; i < percepts.size(); ++i) all_rows[i] = i;
  for (std::size_t j = 0; j < anchors.size(); ++j)
    (anchors[j].confidence >= config.kappa_anch ? anchored : candidates).push_back(j);

  detail::match_subset(percepts, anchors, all_rows, anchored, config, percept_match, match_cost);
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < percepts.size(); ++i)
    if (percept_match[i] < 0) rest.push_back(i);
  detail::match_subset(percepts, anchors, rest, candidates, config, percept_match, match_cost);

  AlignmentResult result;
  std::vector<bool> anchor_used(anchors.size(), false);
  for (std::size_t i = 0; i < percepts.size(); ++i) {
    if (percept_match[i] < 0) {
      result.unmatched_percepts.push_back(percepts[i].percept_id);
      continue;
    }
    const auto j = static_cast<std::size_t>(percept_match[i]);
    result.matches.push_back({percepts[i].percept_id, anchors[j].anchor_id, match_cost[i]});
    anchor_used[j] = true;
  }
  for (std::size_t j = 0; j < anchors.size(); ++j)
    if (!anchor_used[j]) result.unmatched_anchors.push_back(anchors[j].anchor_id);
  return result;
}

inline AlignmentResult align(std::span<const Percept> percepts, const WorldModel& model, Vec2 pose_next,
                             const EngineConfig& config) {
  const auto compensated = compensate_camera_motion(model.anchors, model.camera_pose, pose_next);
  return align_anchors(percepts, compensated, config);
}

}  // namespace aapa
