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

// Support predictors and redundancy checkers.
//
// A SupportPredictor labels an evidence group as fully, partially or not
// supporting a claim. A RedundancyChecker decides whether two partially
// supporting groups are worth merging. Both must be callable concurrently
// from several workers.
//
// Local implementations:
//   CoveragePredictor / CoverageRedundancyChecker  exact, from claim units
//   AnnotationPredictor                            from reference MEGs
//   NeverRedundant                                 disables pruning
//   CachedPredictor                                memoizes any predictor
// The remote model client lives in remote.h.

#ifndef MEG_ORACLES_H_
#define MEG_ORACLES_H_

#include <atomic>
#include <cstddef>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "meg/core.h"

namespace meg {

class SupportPredictor {
 public:
  virtual ~SupportPredictor() = default;
  // Throws PredictionFailure when the answer cannot be parsed and
  // TransportError when no answer could be obtained.
  virtual SupportVerdict predict(const ClaimInstance& instance,
                                 const EvidenceGroup& group) const = 0;
};

class RedundancyChecker {
 public:
  virtual ~RedundancyChecker() = default;
  // false means the merge of g1 and g2 is redundant and should be pruned.
  virtual bool not_redundant(const ClaimInstance& instance,
                             const EvidenceGroup& g1,
                             const EvidenceGroup& g2) const = 0;
};

// FullySupported iff the group covers every unit, NotSupported iff it covers
// none, PartiallySupported otherwise. Confidence is the covered fraction.
SupportVerdict coverage_predict(const ClaimInstance& instance,
                                const EvidenceGroup& group);

// Labels from reference MEGs: a superset of some reference is fully
// supporting, a group disjoint from every reference is not supporting, and
// anything in between is partial with confidence max_i |g ∩ G_i| / |G_i|.
SupportVerdict annotation_predict(const ClaimInstance& instance,
                                  const EvidenceGroup& group);

// A merge is redundant when the union covers exactly what one operand
// already covers.
bool coverage_not_redundant(const ClaimInstance& instance,
                            const EvidenceGroup& g1, const EvidenceGroup& g2);

class CoveragePredictor final : public SupportPredictor {
 public:
  SupportVerdict predict(const ClaimInstance& instance,
                         const EvidenceGroup& group) const override {
    return coverage_predict(instance, group);
  }
};

class AnnotationPredictor final : public SupportPredictor {
 public:
  SupportVerdict predict(const ClaimInstance& instance,
                         const EvidenceGroup& group) const override {
    return annotation_predict(instance, group);
  }
};

class CoverageRedundancyChecker final : public RedundancyChecker {
 public:
  bool not_redundant(const ClaimInstance& instance, const EvidenceGroup& g1,
                     const EvidenceGroup& g2) const override {
    return coverage_not_redundant(instance, g1, g2);
  }
};

class NeverRedundant final : public RedundancyChecker {
 public:
  bool not_redundant(const ClaimInstance&, const EvidenceGroup&,
                     const EvidenceGroup&) const override {
    return true;
  }
};

struct PredictionCacheKey {
  std::string claim_id;
  EvidenceGroup group;

  friend bool operator==(const PredictionCacheKey&,
                         const PredictionCacheKey&) = default;
};

struct PredictionCacheKeyHash {
  std::size_t operator()(const PredictionCacheKey& key) const noexcept;
};

// At most one inner call per (claim_id, group) for the lifetime of the
// cache. Failed predictions propagate and are not cached.
class CachedPredictor final : public SupportPredictor {
 public:
  explicit CachedPredictor(const SupportPredictor& inner) : inner_(inner) {}

  SupportVerdict predict(const ClaimInstance& instance,
                         const EvidenceGroup& group) const override;

  std::size_t inner_calls() const { return inner_calls_.load(); }
  std::size_t size() const;

 private:
  const SupportPredictor& inner_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<PredictionCacheKey, SupportVerdict,
                             PredictionCacheKeyHash>
      cache_;
  mutable std::atomic<std::size_t> inner_calls_{0};
};

// Counts calls to an inner predictor; used by diagnostics and tests.
class CountingPredictor final : public SupportPredictor {
 public:
  explicit CountingPredictor(const SupportPredictor& inner) : inner_(inner) {}

  SupportVerdict predict(const ClaimInstance& instance,
                         const EvidenceGroup& group) const override {
    ++calls_;
    return inner_.predict(instance, group);
  }

  std::size_t calls() const { return calls_.load(); }

 private:
  const SupportPredictor& inner_;
  mutable std::atomic<std::size_t> calls_{0};
};

}  // namespace meg

#endif  // MEG_ORACLES_H_
