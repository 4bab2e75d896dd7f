// Copyright 2026 The megid Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "meg/oracles.h"

#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.h"

namespace meg {
namespace {

using testing::FestivalInstance;

TEST(CoveragePredictTest, FestivalLabels) {
  const auto inst = FestivalInstance();
  EXPECT_EQ(coverage_predict(inst, {0, 1}).label, SupportLabel::kFullySupported);
  EXPECT_EQ(coverage_predict(inst, {0}).label,
            SupportLabel::kPartiallySupported);
  EXPECT_DOUBLE_EQ(coverage_predict(inst, {0}).confidence, 0.5);
  EXPECT_DOUBLE_EQ(coverage_predict(inst, {0, 1}).confidence, 1.0);
}

TEST(CoveragePredictTest, EmptyCoverageIsNotSupported) {
  const auto inst = testing::CoverageInstance(2, {{0}, {1}, {0}, {}});
  EXPECT_EQ(coverage_predict(inst, {3}).label, SupportLabel::kNotSupported);
  EXPECT_DOUBLE_EQ(coverage_predict(inst, {3}).confidence, 0.0);
}

TEST(CoveragePredictTest, MissingCoverageIsAnError) {
  auto inst = FestivalInstance();
  inst.coverage.reset();
  EXPECT_THROW(coverage_predict(inst, {0}), DataError);
  EXPECT_THROW(coverage_not_redundant(inst, {0}, {1}), DataError);
}

TEST(CoveragePredictTest, LabelIsMonotoneUnderInclusion) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto inst = testing::RandomCoverageInstance(rng, 10, 6, "mono");
    std::vector<EvidenceId> a, b;
    for (std::size_t i = 0; i < inst.evidence.size(); ++i) {
      const auto r = rng() % 3;
      if (r >= 1) b.push_back(static_cast<EvidenceId>(i));
      if (r == 2) a.push_back(static_cast<EvidenceId>(i));
    }
    if (a.empty()) continue;
    EXPECT_LE(coverage_predict(inst, EvidenceGroup(a)).label,
              coverage_predict(inst, EvidenceGroup(b)).label);
  }
}

TEST(AnnotationPredictTest, Examples) {
  ClaimInstance inst = FestivalInstance();
  inst.coverage.reset();
  EXPECT_EQ(annotation_predict(inst, {0, 1}).label,
            SupportLabel::kFullySupported);

  ClaimInstance single = inst;
  single.evidence.resize(8);
  for (int i = 0; i < 8; ++i) single.evidence[i] = {i, ""};
  single.reference_megs = {{0, 1}};
  const auto partial = annotation_predict(single, {0});
  EXPECT_EQ(partial.label, SupportLabel::kPartiallySupported);
  EXPECT_DOUBLE_EQ(partial.confidence, 0.5);
  EXPECT_EQ(annotation_predict(single, {7}).label, SupportLabel::kNotSupported);
}

TEST(AnnotationPredictTest, SupersetOfReferenceIsFull) {
  ClaimInstance inst = FestivalInstance();
  inst.evidence.push_back({3, ""});
  inst.coverage.reset();
  EXPECT_EQ(annotation_predict(inst, {0, 1, 3}).label,
            SupportLabel::kFullySupported);
  EXPECT_EQ(annotation_predict(inst, {0, 1, 2, 3}).label,
            SupportLabel::kFullySupported);
  EXPECT_EQ(annotation_predict(inst, {0, 2}).label,
            SupportLabel::kPartiallySupported);
}

TEST(AnnotationPredictTest, EmptyReferencesIsAnError) {
  ClaimInstance inst = FestivalInstance();
  inst.reference_megs.clear();
  EXPECT_THROW(annotation_predict(inst, {0}), DataError);
}

TEST(CoverageRedundancyTest, Examples) {
  const auto inst = FestivalInstance();
  EXPECT_FALSE(coverage_not_redundant(inst, {0}, {2}));  // e1, e3
  EXPECT_TRUE(coverage_not_redundant(inst, {0}, {1}));

  const auto nested = testing::CoverageInstance(2, {{0}, {0, 1}});
  EXPECT_FALSE(coverage_not_redundant(nested, {0}, {1}));
}

TEST(CoverageRedundancyTest, Symmetric) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto inst = testing::RandomCoverageInstance(rng, 8, 6, "sym");
    const auto n = inst.evidence.size();
    const EvidenceGroup g1{static_cast<EvidenceId>(rng() % n)};
    const EvidenceGroup g2{static_cast<EvidenceId>(rng() % n),
                           static_cast<EvidenceId>(rng() % n)};
    EXPECT_EQ(coverage_not_redundant(inst, g1, g2),
              coverage_not_redundant(inst, g2, g1));
  }
}

class ScriptedPredictor final : public SupportPredictor {
 public:
  SupportVerdict predict(const ClaimInstance& instance,
                         const EvidenceGroup& group) const override {
    ++calls;
    if (fail_next) {
      fail_next = false;
      throw PredictionFailure("scripted");
    }
    return coverage_predict(instance, group);
  }
  mutable int calls = 0;
  mutable bool fail_next = false;
};

TEST(CachedPredictorTest, MemoizesBySetAndClaim) {
  ScriptedPredictor inner;
  CachedPredictor cache(inner);
  auto a = FestivalInstance();
  auto b = FestivalInstance();
  b.claim_id = "other";

  cache.predict(a, {0, 1});
  cache.predict(a, {0, 1});
  EXPECT_EQ(inner.calls, 1);
  cache.predict(a, EvidenceGroup(std::vector<EvidenceId>{1, 0}));
  EXPECT_EQ(inner.calls, 1);
  cache.predict(b, {0, 1});
  EXPECT_EQ(inner.calls, 2);
  EXPECT_EQ(cache.size(), 2u);
}

TEST(CachedPredictorTest, FailuresAreNotCached) {
  ScriptedPredictor inner;
  CachedPredictor cache(inner);
  const auto inst = FestivalInstance();
  inner.fail_next = true;
  EXPECT_THROW(cache.predict(inst, {0}), PredictionFailure);
  EXPECT_EQ(cache.predict(inst, {0}).label, SupportLabel::kPartiallySupported);
  EXPECT_EQ(inner.calls, 2);
}

TEST(CachedPredictorTest, TransparentOverRandomQueries) {
  CoveragePredictor plain;
  CachedPredictor cache(plain);
  std::mt19937_64 rng(21);
  const auto inst = testing::RandomCoverageInstance(rng, 8, 5, "t");
  for (int q = 0; q < 1000; ++q) {
    std::vector<EvidenceId> ids;
    for (std::size_t i = 0; i < inst.evidence.size(); ++i) {
      if (rng() % 2) ids.push_back(static_cast<EvidenceId>(i));
    }
    if (ids.empty()) continue;
    const EvidenceGroup g(ids);
    EXPECT_EQ(cache.predict(inst, g), plain.predict(inst, g));
  }
}

TEST(CachedPredictorTest, ConcurrentUse) {
  CoveragePredictor plain;
  CachedPredictor cache(plain);
  const auto inst = FestivalInstance();
  std::vector<std::jthread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 500; ++i) {
        EXPECT_EQ(cache.predict(inst, {i % 3}).label,
                  SupportLabel::kPartiallySupported);
      }
    });
  }
  threads.clear();
  EXPECT_EQ(cache.size(), 3u);
}

}  // namespace
}  // namespace meg
