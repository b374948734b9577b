#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the code under test beyond plain data types.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "aapa/assignment.hpp"
#include "aapa/core_model.hpp"
#include "aapa/scenario.hpp"

namespace oracle {

/// Exhaustive search over all permutations of the zero-padded square matrix;
/// among optimal matchings the lexicographically smallest row->col one wins.
template <class T>
aapa::Assignment<T> brute_force_assignment(const aapa::Matrix<T>& m, T pad = T{}) {
  aapa::Assignment<T> best;
  if (m.empty()) return best;
  const std::size_t n = std::max(m.rows(), m.cols());
  auto at = [&](std::size_t r, std::size_t c) { return r < m.rows() && c < m.cols() ? m(r, c) : pad; };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best_perm;
  T best_total{};
  do {
    T total{};
    for (std::size_t r = 0; r < n; ++r) total += at(r, perm[r]);
    if (best_perm.empty() || total < best_total) {
      best_total = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (best_perm[r] >= m.cols()) continue;
    best.pairs.emplace_back(r, best_perm[r]);
    best.total += m(r, best_perm[r]);
  }
  return best;
}

/// Optimal total only, by exhaustive search, for floating-point matrices
/// where exact tie order is not meaningful.
inline double brute_force_total(const aapa::CostMatrix& m) {
  return brute_force_assignment(m).total;
}

/// Longest container chain (object, its container, ...) in any truth frame.
inline int max_containment_depth(const aapa::ScenarioRecord& record) {
  int best = 1;
  for (const auto& frame : record.truth) {
    std::map<std::string, std::string> parent;
    for (const auto& o : frame.objects)
      if (o.container) parent[o.name] = *o.container;
    for (const auto& o : frame.objects) {
      int depth = 1;
      for (auto it = parent.find(o.name); it != parent.end() && depth < 64; it = parent.find(it->second)) ++depth;
      best = std::max(best, depth);
    }
  }
  return best;
}

/// Follows which anchor id is bound to which true object. An anchor is bound
/// to an object when it is visible and sits on a visible object of the same
/// type within `tol`.
class IdentityAudit {
 public:
  void observe(const std::vector<aapa::Anchor>& anchors, const aapa::TruthFrame& truth, double tol) {
    for (const auto& a : anchors) {
      seen_ids_.insert(a.anchor_id);
      if (a.status != aapa::AnchorStatus::visible) continue;
      const aapa::TruthObject* hit = nullptr;
      double best = tol;
      for (const auto& o : truth.objects) {
        if (!o.visible || o.type != a.attributes.object_type) continue;
        const double d = std::hypot(o.position.x - a.attributes.position.x, o.position.y - a.attributes.position.y);
        if (d <= best) {
          best = d;
          hit = &o;
        }
      }
      if (!hit) continue;
      bind(a.anchor_id, hit->name);
    }
  }

  int switches() const { return switches_; }

  /// Anchored ids that were never bound to a true object.
  int ghost_ids() const {
    int n = 0;
    for (const auto& id : seen_ids_) n += id_to_object_.count(id) ? 0 : 1;
    return n;
  }

  int objects_never_anchored(const aapa::TruthFrame& truth) const {
    int n = 0;
    for (const auto& o : truth.objects) n += object_to_id_.count(o.name) ? 0 : 1;
    return n;
  }

  /// Largest position error over bound anchors; infinite if one is missing.
  double max_tracked_error(const std::vector<aapa::Anchor>& anchors, const aapa::TruthFrame& truth) const {
    double worst = 0.0;
    for (const auto& [id, name] : id_to_object_) {
      const auto a = std::find_if(anchors.begin(), anchors.end(), [&](const auto& x) { return x.anchor_id == id; });
      const auto o =
          std::find_if(truth.objects.begin(), truth.objects.end(), [&](const auto& x) { return x.name == name; });
      if (a == anchors.end() || o == truth.objects.end()) return std::numeric_limits<double>::infinity();
      worst = std::max({worst, std::abs(a->attributes.position.x - o->position.x),
                        std::abs(a->attributes.position.y - o->position.y)});
    }
    return worst;
  }

 private:
  void bind(const std::string& id, const std::string& object) {
    auto by_id = id_to_object_.find(id);
    auto by_obj = object_to_id_.find(object);
    if (by_id != id_to_object_.end() && by_id->second != object) ++switches_;
    if (by_obj != object_to_id_.end() && by_obj->second != id) ++switches_;
    id_to_object_[id] = object;
    object_to_id_[object] = id;
  }

  std::set<std::string> seen_ids_;
  std::map<std::string, std::string> id_to_object_;
  std::map<std::string, std::string> object_to_id_;
  int switches_ = 0;
};

}  // namespace oracle
