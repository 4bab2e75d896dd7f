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

#include "meg/engine.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

namespace meg {

namespace {

struct FrontierEntry {
  const EvidenceGroup* group;
  std::uint64_t mask;  // only meaningful when every id < 64
};

std::uint64_t mask_of(const EvidenceGroup& g) {
  std::uint64_t m = 0;
  for (EvidenceId id : g) m |= std::uint64_t{1} << id;
  return m;
}

// Labels one group. Returns nullopt when the claim must be abandoned
// (strict mode); otherwise a failed prediction counts as NotSupported.
std::optional<SupportVerdict> label_group(const ClaimInstance& instance,
                                          const EvidenceGroup& group,
                                          const SupportPredictor& predictor,
                                          bool strict_mode,
                                          SearchResult& result) {
  ++result.diagnostics.predictor_calls;
  try {
    return predictor.predict(instance, group);
  } catch (const PredictionFailure& e) {
    ++result.diagnostics.failures;
    if (strict_mode) {
      result.failed = true;
      result.failure_reason = "group " + to_string(group) + ": " + e.what();
      result.megs.clear();
      result.found_size.reset();
      return std::nullopt;
    }
    return SupportVerdict{SupportLabel::kNotSupported, 0.0};
  }
}

}  // namespace

std::size_t PartialGroupFrontier::total_groups() const {
  std::size_t n = 0;
  for (const auto& [size, groups] : levels) n += groups.size();
  return n;
}

std::vector<EvidenceGroup> SearchResult::groups() const {
  std::vector<EvidenceGroup> out;
  out.reserve(megs.size());
  for (const auto& m : megs) out.push_back(m.group);
  return out;
}

CandidateMap merge_partial_groups(const ClaimInstance& instance,
                                  PartialGroupFrontier& frontier,
                                  std::size_t size,
                                  const RedundancyChecker& checker,
                                  SearchDiagnostics* diagnostics) {
  CandidateMap candidates;
  if (size == 1) {
    for (const auto& ep : instance.evidence) {
      candidates.emplace(EvidenceGroup::Singleton(ep.id),
                         std::set<ParentPair>{});
    }
  } else {
    const bool use_masks = instance.evidence.size() <= 64;
    std::vector<FrontierEntry> entries;
    for (const auto& [level, groups] : frontier.levels) {
      if (level >= size) continue;
      for (const auto& [g, parents] : groups) {
        entries.push_back({&g, use_masks ? mask_of(g) : 0});
      }
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const EvidenceGroup& g1 = *entries[i].group;
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        const EvidenceGroup& g2 = *entries[j].group;
        const std::size_t union_size =
            use_masks ? static_cast<std::size_t>(
                            std::popcount(entries[i].mask | entries[j].mask))
                      : g1.size() + g2.size() - g1.intersection_size(g2);
        if (union_size != size) continue;
        if (diagnostics) ++diagnostics->redundancy_checks;
        if (!checker.not_redundant(instance, g1, g2)) {
          if (diagnostics) ++diagnostics->pruned_by_redundancy;
          continue;
        }
        auto parents = g1 < g2 ? ParentPair{g1, g2} : ParentPair{g2, g1};
        candidates[group_union(g1, g2)].insert(std::move(parents));
      }
    }
  }
  frontier.levels[size] = candidates;
  return candidates;
}

std::vector<RankedGroup> rank_top_k(std::vector<RankedGroup> megs,
                                    std::size_t k) {
  std::sort(megs.begin(), megs.end(),
            [](const RankedGroup& a, const RankedGroup& b) {
              if (a.verdict.confidence != b.verdict.confidence) {
                return a.verdict.confidence > b.verdict.confidence;
              }
              return a.group < b.group;
            });
  if (megs.size() > k) megs.resize(k);
  return megs;
}

SearchResult identify_megs(const ClaimInstance& instance,
                           const SupportPredictor& predictor,
                           const RedundancyChecker& checker,
                           const SearchConfig& config) {
  validate(config);
  if (instance.evidence.empty()) {
    throw DataError("claim '" + instance.claim_id + "' has no evidence");
  }
  SearchResult result;
  PartialGroupFrontier frontier;
  std::vector<RankedGroup> found;
  const std::size_t last = std::min(instance.evidence.size(), config.max_size);
  for (std::size_t size = 1; size <= last; ++size) {
    merge_partial_groups(instance, frontier, size, checker,
                         &result.diagnostics);
    CandidateMap& level = frontier.levels[size];
    for (auto it = level.begin(); it != level.end();) {
      const auto verdict = label_group(instance, it->first, predictor,
                                       config.strict_mode, result);
      if (!verdict) return result;
      if (verdict->label == SupportLabel::kPartiallySupported) {
        ++it;
        continue;
      }
      if (verdict->label == SupportLabel::kFullySupported) {
        found.push_back({it->first, *verdict});
      }
      ++result.diagnostics.pruned_by_label;
      it = level.erase(it);
    }
    if (!found.empty()) {
      result.found_size = size;
      break;
    }
  }
  result.diagnostics.megs_found = found.size();
  result.megs = rank_top_k(std::move(found), config.top_k);
  return result;
}

SearchResult brute_force_megs(const ClaimInstance& instance,
                              const SupportPredictor& predictor,
                              std::size_t max_size) {
  const std::size_t n = instance.evidence.size();
  if (n > kBruteForceMaxEvidence) {
    throw DataError("brute force is limited to " +
                    std::to_string(kBruteForceMaxEvidence) +
                    " evidence pieces, claim '" + instance.claim_id +
                    "' has " + std::to_string(n));
  }
  SearchResult result;
  std::vector<RankedGroup> found;
  const std::size_t last = std::min(n, max_size);
  for (std::size_t k = 1; k <= last && found.empty(); ++k) {
    // Combinations of k ids in lexicographic order.
    std::vector<EvidenceId> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      EvidenceGroup g(idx);
      const auto verdict =
          label_group(instance, g, predictor, /*strict_mode=*/false, result);
      if (verdict->label == SupportLabel::kFullySupported) {
        found.push_back({std::move(g), *verdict});
      }
      std::size_t i = k;
      while (i > 0 &&
             idx[i - 1] == static_cast<EvidenceId>(n - k + i - 1)) {
        --i;
      }
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found.empty()) result.found_size = k;
  }
  const std::size_t count = found.size();
  result.diagnostics.megs_found = count;
  result.megs = rank_top_k(std::move(found), count);
  return result;
}

}  // namespace meg
