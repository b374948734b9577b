#include <gtest/gtest.h>

#include <random>

#include "aapa/alignment.hpp"
#include "fixtures.hpp"

using namespace aapa;
using fixture::anchor;
using fixture::percept;

TEST(CameraCompensation, NoMotionNoChange) {
  const std::vector<Anchor> in{anchor("cube0", "cube", {100, 100})};
  EXPECT_EQ(compensate_camera_motion(in, {7, 3}, {7, 3}), in);
}

TEST(CameraCompensation, PanRight) {
  const auto out = compensate_camera_motion({anchor("cube0", "cube", {100, 100})}, {0, 0}, {10, 0});
  EXPECT_EQ(out[0].attributes.position, (Vec2{90, 100}));
}

TEST(CameraCompensation, DiagonalPan) {
  const auto out = compensate_camera_motion({anchor("cube0", "cube", {50, 50})}, {0, 0}, {-5, 3});
  EXPECT_EQ(out[0].attributes.position, (Vec2{55, 47}));
}

TEST(AlignmentCost, Identical) {
  const Attributes a{"cone", {100, 100}, {20, 20}, {}};
  EXPECT_EQ(alignment_cost(a, a, benchmark_preset()), 0.0);
}

TEST(AlignmentCost, PositionAndSizeTerms) {
  const Attributes anc{"cone", {100, 100}, {20, 20}, {}};
  const Attributes per{"cone", {103, 104}, {20, 22}, {}};
  EXPECT_EQ(alignment_cost(per, anc, benchmark_preset()), 29.0);
}

TEST(AlignmentCost, TypeMismatchMultiplies) {
  EngineConfig c = benchmark_preset();
  c.psi_mismatch = 5;
  const Attributes anc{"cone", {100, 100}, {20, 20}, {}};
  const Attributes per{"cube", {103, 104}, {20, 22}, {}};
  EXPECT_EQ(alignment_cost(per, anc, c), 145.0);
}

TEST(AlignAnchors, NoAnchors) {
  const std::vector<Percept> ps{percept(0, "cube", {10, 10}), percept(1, "cone", {50, 10})};
  const auto r = align_anchors(ps, {}, benchmark_preset());
  EXPECT_TRUE(r.matches.empty());
  EXPECT_EQ(r.unmatched_percepts, (std::vector<int>{0, 1}));
}

TEST(AlignAnchors, NearbySameTypeMatches) {
  const std::vector<Percept> ps{percept(4, "cube", {103, 100})};
  const std::vector<Anchor> as{anchor("cube0", "cube", {100, 100})};
  const auto r = align_anchors(ps, as, benchmark_preset());
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0], (Match{4, "cube0", 9.0}));
  EXPECT_TRUE(r.unmatched_anchors.empty());
}

TEST(AlignAnchors, CostAtOrAboveTauIsUnmatched) {
  // 84^2 = 7056 >= 6500
  const std::vector<Percept> ps{percept(0, "cube", {184, 100})};
  const std::vector<Anchor> as{anchor("cube0", "cube", {100, 100})};
  const auto r = align_anchors(ps, as, benchmark_preset());
  EXPECT_TRUE(r.matches.empty());
  EXPECT_EQ(r.unmatched_percepts, std::vector<int>{0});
  EXPECT_EQ(r.unmatched_anchors, std::vector<std::string>{"cube0"});

  EngineConfig exact = benchmark_preset();
  exact.tau = 7056;
  EXPECT_TRUE(align_anchors(ps, as, exact).matches.empty());
}

TEST(AlignAnchors, FarForcedPairDoesNotDisplaceValidMatch) {
  // Without clipping the solver would trade the exact match for two mediocre
  // ones to avoid the huge cost on the far pair.
  const std::vector<Percept> ps{percept(0, "cube", {100, 100}), percept(1, "cube", {0, 200})};
  const std::vector<Anchor> as{anchor("a", "cube", {100, 100}), anchor("b", "cube", {160, 100})};
  const auto r = align_anchors(ps, as, benchmark_preset());
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0].anchor_id, "a");
}

TEST(AlignAnchors, CandidatesCannotStealFromAnchoredObjects) {
  // One pass would prefer {a->ghost, candidate->real}: 60^2 + 35^2 < tau.
  const std::vector<Percept> ps{percept(0, "sphere", {100, 100}), percept(1, "sphere", {100, 165})};
  const std::vector<Anchor> as{anchor("sphere0", "sphere", {100, 105}), anchor("~3", "sphere", {100, 65}, {20, 20}, 0.0)};
  const auto r = align_anchors(ps, as, benchmark_preset());
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0], (Match{0, "sphere0", 25.0}));
  EXPECT_EQ(r.unmatched_percepts, std::vector<int>{1});
  EXPECT_EQ(r.unmatched_anchors, std::vector<std::string>{"~3"});
}

TEST(AlignAnchors, CandidatesMatchLeftoverPercepts) {
  const std::vector<Percept> ps{percept(0, "cube", {100, 100}), percept(1, "cube", {200, 100})};
  const std::vector<Anchor> as{anchor("cube0", "cube", {100, 100}), anchor("~1", "cube", {202, 100}, {20, 20}, 0.0)};
  const auto r = align_anchors(ps, as, benchmark_preset());
  EXPECT_EQ(r.matches, (std::vector<Match>{{0, "cube0", 0.0}, {1, "~1", 4.0}}));
}

TEST(AlignmentProperty, CostMatrixSymmetricUnderSwap) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0, 300), size(5, 40);
  const char* types[] = {"cone", "cube", "sphere"};
  std::vector<Percept> ps;
  std::vector<Anchor> as;
  for (int k = 0; k < 5; ++k) {
    ps.push_back(percept(k, types[k % 3], {pos(rng), pos(rng)}, {size(rng), size(rng)}));
    as.push_back(anchor("a" + std::to_string(k), types[(k + 1) % 3], {pos(rng), pos(rng)}, {size(rng), size(rng)}));
  }
  std::vector<Percept> ps_from_as;
  std::vector<Anchor> as_from_ps;
  for (std::size_t k = 0; k < as.size(); ++k) ps_from_as.push_back({int(k), as[k].attributes, 1.0});
  for (const auto& p : ps) as_from_ps.push_back({"p", p.attributes});
  const auto forward = build_cost_matrix(ps, as, benchmark_preset());
  const auto swapped = build_cost_matrix(ps_from_as, as_from_ps, benchmark_preset());
  EXPECT_EQ(forward, swapped.transposed());
}

TEST(AlignmentProperty, TranslationEquivariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(20, 340), jitter(-30, 30);
  std::uniform_int_distribution<int> shift(-200, 200);
  const char* types[] = {"cone", "cube", "sphere", "snitch"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Percept> ps;
    std::vector<Anchor> as;
    for (int k = 0; k < 6; ++k) {
      const Vec2 p{pos(rng), pos(rng)};
      as.push_back(anchor("a" + std::to_string(k), types[k % 4], p, {20, 20}, k % 2 ? 1.0 : 0.0));
      if (k < 5) ps.push_back(percept(k, types[(k + trial) % 4], p + Vec2{jitter(rng), jitter(rng)}));
    }
    // Integer shifts keep the squared distances exact.
    const Vec2 d{double(shift(rng)), double(shift(rng))};
    auto ps2 = ps;
    auto as2 = as;
    for (auto& p : ps2) p.attributes.position += d;
    for (auto& a : as2) a.attributes.position += d;
    const auto r1 = align_anchors(ps, as, benchmark_preset());
    const auto r2 = align_anchors(ps2, as2, benchmark_preset());
    ASSERT_EQ(r1.matches.size(), r2.matches.size());
    for (std::size_t k = 0; k < r1.matches.size(); ++k) {
      EXPECT_EQ(r1.matches[k].percept_id, r2.matches[k].percept_id);
      EXPECT_EQ(r1.matches[k].anchor_id, r2.matches[k].anchor_id);
      EXPECT_NEAR(r1.matches[k].cost, r2.matches[k].cost, 1e-6);
    }
  }
}

TEST(AlignmentProperty, StaticSceneUnderCameraMotionMatchesAtZeroCost) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(0, 360);
  WorldModel m;
  m.camera_pose = {12, -4};
  std::vector<Vec2> world;
  for (int k = 0; k < 8; ++k) {
    world.push_back({std::round(pos(rng)), std::round(pos(rng) * 0.6)});
    m.anchors.push_back(anchor("obj" + std::to_string(k), "cube", world.back() - m.camera_pose));
  }
  const Vec2 next_pose{-31, 17};
  std::vector<Percept> ps;
  for (int k = 7; k >= 0; --k) ps.push_back(percept(k, "cube", world[std::size_t(k)] - next_pose));
  const auto r = align(ps, m, next_pose, benchmark_preset());
  ASSERT_EQ(r.matches.size(), 8u);
  for (const auto& match : r.matches) {
    EXPECT_EQ(match.cost, 0.0);
    EXPECT_EQ(match.anchor_id, "obj" + std::to_string(match.percept_id));
  }
}
