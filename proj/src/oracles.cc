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

#include <algorithm>
#include <functional>
#include <mutex>

namespace meg {

namespace {

const CoverageModel& require_coverage(const ClaimInstance& instance) {
  if (!instance.coverage) {
    throw DataError("claim '" + instance.claim_id +
                    "' has no coverage model");
  }
  return *instance.coverage;
}

}  // namespace

SupportVerdict coverage_predict(const ClaimInstance& instance,
                                const EvidenceGroup& group) {
  const CoverageModel& cov = require_coverage(instance);
  const UnitSet covered = coverage_of(group, cov);
  const std::size_t hit = covered.count();
  const double fraction =
      static_cast<double>(hit) / static_cast<double>(cov.num_units);
  if (hit == cov.num_units) return {SupportLabel::kFullySupported, fraction};
  if (hit == 0) return {SupportLabel::kNotSupported, fraction};
  return {SupportLabel::kPartiallySupported, fraction};
}

SupportVerdict annotation_predict(const ClaimInstance& instance,
                                  const EvidenceGroup& group) {
  if (instance.reference_megs.empty()) {
    throw DataError("claim '" + instance.claim_id +
                    "' has no reference MEGs for the annotation oracle");
  }
  double best_overlap = 0.0;
  for (const auto& ref : instance.reference_megs) {
    if (group.includes(ref)) return {SupportLabel::kFullySupported, 1.0};
    const double overlap = static_cast<double>(group.intersection_size(ref)) /
                           static_cast<double>(ref.size());
    best_overlap = std::max(best_overlap, overlap);
  }
  if (best_overlap == 0.0) return {SupportLabel::kNotSupported, 1.0};
  return {SupportLabel::kPartiallySupported, best_overlap};
}

bool coverage_not_redundant(const ClaimInstance& instance,
                            const EvidenceGroup& g1, const EvidenceGroup& g2) {
  const CoverageModel& cov = require_coverage(instance);
  const UnitSet c1 = coverage_of(g1, cov);
  const UnitSet c2 = coverage_of(g2, cov);
  const UnitSet merged = c1 | c2;
  return merged != c1 && merged != c2;
}

std::size_t PredictionCacheKeyHash::operator()(
    const PredictionCacheKey& key) const noexcept {
  const std::size_t a = std::hash<std::string>{}(key.claim_id);
  const std::size_t b = EvidenceGroupHash{}(key.group);
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

SupportVerdict CachedPredictor::predict(const ClaimInstance& instance,
                                        const EvidenceGroup& group) const {
  PredictionCacheKey key{instance.claim_id, group};
  {
    std::shared_lock lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  ++inner_calls_;
  SupportVerdict verdict = inner_.predict(instance, group);
  std::unique_lock lock(mu_);
  cache_.insert_or_assign(std::move(key), verdict);
  return verdict;
}

std::size_t CachedPredictor::size() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

}  // namespace meg
