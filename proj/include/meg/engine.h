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

// Bottom-up search for minimal evidence groups.
//
// The search grows candidate groups one size at a time. Size 1 seeds every
// singleton; each later size merges pairs of partially supporting groups
// whose union has exactly that size and which the redundancy checker does
// not reject. Every candidate is labeled once. Fully supporting candidates
// are MEGs; fully and not supporting candidates leave the frontier, since
// neither can be a strict subset of an MEG. The search stops at the first
// size that yields an MEG.

#ifndef MEG_ENGINE_H_
#define MEG_ENGINE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "meg/core.h"
#include "meg/oracles.h"

namespace meg {

using ParentPair = std::pair<EvidenceGroup, EvidenceGroup>;
using CandidateMap = std::map<EvidenceGroup, std::set<ParentPair>>;

// Partially supporting groups by size, each with the pairs it was merged
// from. Every group at level k has exactly k members.
struct PartialGroupFrontier {
  std::map<std::size_t, CandidateMap> levels;

  std::size_t total_groups() const;
};

struct SearchDiagnostics {
  std::size_t predictor_calls = 0;
  std::size_t redundancy_checks = 0;
  std::size_t pruned_by_redundancy = 0;
  std::size_t pruned_by_label = 0;
  std::size_t failures = 0;
  std::size_t megs_found = 0;  // before top-k truncation
  // Classic baselines: verdict of the concatenated partial group, when one
  // was built and could be labeled.
  std::optional<SupportVerdict> concatenation_verdict;

  friend bool operator==(const SearchDiagnostics&,
                         const SearchDiagnostics&) = default;
};

struct RankedGroup {
  EvidenceGroup group;
  SupportVerdict verdict;

  friend bool operator==(const RankedGroup&, const RankedGroup&) = default;
};

struct SearchResult {
  std::vector<RankedGroup> megs;  // best first
  std::optional<std::size_t> found_size;
  // Set in strict mode when a prediction failed; megs is then empty.
  bool failed = false;
  std::string failure_reason;
  SearchDiagnostics diagnostics;

  std::vector<EvidenceGroup> groups() const;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

// Builds the size-`size` candidates from the frontier and stores them as
// frontier level `size`. Size 1 seeds all singletons of the instance.
CandidateMap merge_partial_groups(const ClaimInstance& instance,
                                  PartialGroupFrontier& frontier,
                                  std::size_t size,
                                  const RedundancyChecker& checker,
                                  SearchDiagnostics* diagnostics = nullptr);

SearchResult identify_megs(const ClaimInstance& instance,
                           const SupportPredictor& predictor,
                           const RedundancyChecker& checker,
                           const SearchConfig& config);

// Confidence descending, then lexicographic member order; keeps k.
std::vector<RankedGroup> rank_top_k(std::vector<RankedGroup> megs,
                                    std::size_t k);

// Every fully supporting subset of the smallest cardinality that has one,
// by exhaustive enumeration. Limited to 20 evidence pieces.
SearchResult brute_force_megs(const ClaimInstance& instance,
                              const SupportPredictor& predictor,
                              std::size_t max_size);

inline constexpr std::size_t kBruteForceMaxEvidence = 20;

}  // namespace meg

#endif  // MEG_ENGINE_H_
