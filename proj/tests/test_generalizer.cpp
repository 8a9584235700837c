// Copyright 2026 The xplain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "xplain/error.hpp"
#include "xplain/generalizer.hpp"
#include "xplain/rng.hpp"

namespace xplain::general {
namespace {

InstanceFamily line_family(std::size_t lo, std::size_t hi, std::size_t count) {
  InstanceFamily f;
  f.kind = FamilyKind::kTeLine;
  f.size_min = lo;
  f.size_max = hi;
  f.count = count;
  return f;
}

TEST(Instances, TeLineHasIncreasingPinnedPathLength) {
  const auto inst = generate_instances(line_family(2, 6, 5), 3);
  ASSERT_EQ(inst.size(), 5u);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    EXPECT_NO_THROW(inst[i].te.check());
    EXPECT_EQ(extractor("pinned_shortest_path_length")(inst[i]), 2.0 + i);
    // The long demand plus one single-hop demand per line link.
    EXPECT_EQ(inst[i].dims(), 3 + i);
  }
}

TEST(Instances, TeLineAdversarialPatternHasExpectedGap) {
  // Long demand at T, single-hop demands at C: DP pins T on every line link,
  // OPT moves it to the detour, so the gap is L * T.
  const auto inst = generate_instances(line_family(4, 4, 2), 8);
  const Scenario& s = inst[0];
  const double t = s.te.threshold;
  EXPECT_NEAR(objective(s, heur::Model::kOptTe, s.inputs) - objective(s, heur::Model::kDp, s.inputs),
              4 * t, 1e-6);
}

TEST(Instances, DeterministicPerSeed) {
  for (FamilyKind k : {FamilyKind::kTeLine, FamilyKind::kTeRandom, FamilyKind::kVbpRandom}) {
    InstanceFamily f;
    f.kind = k;
    f.size_min = 3;
    f.size_max = 5;
    f.count = 2;
    const auto a = generate_instances(f, 42);
    const auto b = generate_instances(f, 42);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(instance_to_json(a[i]).dump(), instance_to_json(b[i]).dump());
    }
  }
}

TEST(Instances, RandomFamiliesAreValid) {
  InstanceFamily te;
  te.kind = FamilyKind::kTeRandom;
  te.size_min = 3;
  te.size_max = 7;
  te.count = 10;
  for (const Scenario& s : generate_instances(te, 5)) {
    EXPECT_NO_THROW(s.te.check());
    EXPECT_GE(s.te.demands.size(), 1u);
    EXPECT_GE(objective(s, heur::Model::kOptTe, s.hi), objective(s, heur::Model::kDp, s.hi) - 1e-6);
  }
  InstanceFamily vbp;
  vbp.kind = FamilyKind::kVbpRandom;
  vbp.size_min = 4;
  vbp.size_max = 8;
  vbp.count = 10;
  for (const Scenario& s : generate_instances(vbp, 5)) {
    EXPECT_GE(s.vbp.sizes.size(), 4u);
    EXPECT_LE(s.vbp.sizes.size(), 8u);
    EXPECT_NO_THROW(heur::run_ff(vbp_at(s, s.inputs.empty() ? s.hi : s.inputs)));
  }
}

TEST(Instances, BadFamilies) {
  InstanceFamily f;
  f.count = 1;
  EXPECT_THROW(generate_instances(f, 1), Error);
  f.count = 3;
  f.size_min = 5;
  f.size_max = 4;
  EXPECT_THROW(generate_instances(f, 1), Error);
  EXPECT_THROW(family_kind_from_string("te-mesh"), Error);
}

TEST(Predicates, Parsing) {
  const Predicate p = predicate_from_string("decreasing(min_path_capacity)", 0.1);
  EXPECT_EQ(p.kind, Trend::kDecreasing);
  EXPECT_EQ(p.feature, "min_path_capacity");
  EXPECT_EQ(to_string(p), "decreasing(min_path_capacity)");
  EXPECT_THROW(predicate_from_string("increasing(colour)"), Error);
  EXPECT_THROW(predicate_from_string("bigger(ball_count)"), Error);
  EXPECT_THROW(predicate_from_string("increasing(ball_count)", 1.5), Error);
}

TEST(Predicates, ExtractorChecksProblemKind) {
  InstanceFamily f;
  f.kind = FamilyKind::kVbpRandom;
  f.size_min = 3;
  f.size_max = 3;
  f.count = 2;
  const auto inst = generate_instances(f, 1);
  EXPECT_THROW(extractor("pinned_shortest_path_length")(inst[0]), Error);
  EXPECT_EQ(extractor("ball_count")(inst[0]), 3.0);
}

std::vector<Observation> synthetic(std::function<double(double)> gap, std::size_t n = 8) {
  std::vector<Observation> obs;
  for (std::size_t i = 0; i < n; ++i) {
    obs.push_back({"i" + std::to_string(i), static_cast<double>(i), gap(static_cast<double>(i))});
  }
  return obs;
}

TEST(Trend, GapEqualToFeatureHolds) {
  const auto f = evaluate_observations(predicate_from_string("increasing(ball_count)"),
                                       synthetic([](double x) { return x; }));
  EXPECT_DOUBLE_EQ(f.tau, 1.0);
  EXPECT_TRUE(f.holds);
}

TEST(Trend, ConstantGapDoesNotHold) {
  const auto f = evaluate_observations(predicate_from_string("increasing(ball_count)"),
                                       synthetic([](double) { return 3.0; }));
  EXPECT_EQ(f.tau, 0.0);
  EXPECT_EQ(f.p, 1.0);
  EXPECT_FALSE(f.holds);
}

TEST(Trend, ReversalSymmetry) {
  Rng rng(12);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Observation> obs;
    for (int i = 0; i < 8; ++i) {
      obs.push_back({"x", static_cast<double>(rng.uniform_int(0, 5)), rng.uniform(-1, 1) + 0.2 * i});
    }
    std::vector<Observation> neg = obs;
    for (Observation& o : neg) o.gap = -o.gap;
    const auto up = evaluate_observations(predicate_from_string("increasing(ball_count)"), obs);
    const auto down = evaluate_observations(predicate_from_string("decreasing(ball_count)"), neg);
    EXPECT_EQ(up.holds, down.holds);
    EXPECT_NEAR(up.p, down.p, 1e-12);
  }
}

TEST(Trend, TooFewInstances) {
  try {
    evaluate_observations(predicate_from_string("increasing(ball_count)"),
                          synthetic([](double x) { return x; }, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooFewInstances);
  }
}

TEST(Trend, ConstantProbeOverInstances) {
  const auto inst = generate_instances(line_family(2, 6, 5), 1);
  const auto f = evaluate_predicate(predicate_from_string("increasing(pinned_shortest_path_length)"),
                                    inst, [](const Scenario&, std::uint64_t) { return 1.0; }, 1);
  EXPECT_FALSE(f.holds);
  EXPECT_EQ(f.p, 1.0);
  EXPECT_EQ(f.observations.size(), 5u);
}

TEST(Trend, PinnedPathLengthDrivesDpGap) {
  const auto inst = generate_instances(line_family(2, 9, 8), 1);
  const auto f = evaluate_predicate(predicate_from_string("increasing(pinned_shortest_path_length)"),
                                    inst, analyzer_probe(heur::GapMode::kAbsolute, 1000), 1);
  EXPECT_TRUE(f.holds);
  EXPECT_LT(f.p, 0.05);
  const auto j = to_json(f);
  EXPECT_EQ(j["observations"].size(), 8u);
  EXPECT_EQ(j["predicate"], "increasing(pinned_shortest_path_length)");
}

}  // namespace
}  // namespace xplain::general
