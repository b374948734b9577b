#include <gtest/gtest.h>

#include "aapa/heuristic.hpp"
#include "aapa/pipeline.hpp"
#include "aapa/scenario.hpp"
#include "fixtures.hpp"

using namespace aapa;
using fixture::percept;

TEST(Heuristic, VisibleTargetIsPredicted) {
  HeuristicTracker h("snitch");
  const std::vector<Percept> ps{percept(0, "cone", {100, 100}), percept(1, "snitch", {50, 50}, {10, 10})};
  EXPECT_EQ(h.step(ps), (Box{{50, 50}, {10, 10}}));
  EXPECT_EQ(h.state().last_known, (Vec2{50, 50}));
}

TEST(Heuristic, AbsentTargetFallsBackToNearestObject) {
  HeuristicTracker h("snitch");
  h.step(std::vector<Percept>{percept(0, "snitch", {50, 50}, {10, 10})});
  const std::vector<Percept> ps{percept(3, "cube", {90, 90}), percept(4, "cone", {52, 51}, {30, 30})};
  EXPECT_EQ(h.step(ps), (Box{{52, 51}, {30, 30}}));
  // last-known stays at the target's own last sighting
  EXPECT_EQ(h.state().last_known, (Vec2{50, 50}));
}

TEST(Heuristic, NoPerceptsRepeatsPrediction) {
  HeuristicTracker h("snitch");
  const auto first = h.step(std::vector<Percept>{percept(0, "snitch", {50, 50}, {10, 10})});
  EXPECT_EQ(h.step({}), first);
  EXPECT_EQ(h.step({}), first);
}

TEST(Heuristic, TiesGoToLowestPerceptId) {
  HeuristicTracker h("snitch");
  h.step(std::vector<Percept>{percept(0, "snitch", {50, 50})});
  const std::vector<Percept> ps{percept(7, "cube", {60, 50}), percept(2, "cone", {40, 50}, {30, 30})};
  EXPECT_EQ(h.step(ps)->size, (Vec2{30, 30}));
}

TEST(Heuristic, NothingBeforeFirstSighting) {
  HeuristicTracker h("snitch");
  EXPECT_FALSE(h.step(std::vector<Percept>{percept(0, "cube", {60, 50})}));
}

TEST(HeuristicProperty, AgreesWithTrackerWhenTargetAlwaysVisible) {
  const ScenarioRecord rec = generate(make_suite(SuiteKind::static_scene, 4));
  const auto h = run_heuristic(rec.detections);
  const auto a = run_aapa(rec.detections, benchmark_preset());
  for (std::size_t f = 0; f < rec.truth.size(); ++f) {
    const TruthObject* t = rec.target_at(f);
    ASSERT_TRUE(t->visible);
    EXPECT_EQ(h.predictions[f].pred, (Box{t->position, t->size}));
    EXPECT_EQ(a.predictions[f].pred, h.predictions[f].pred);
  }
}
