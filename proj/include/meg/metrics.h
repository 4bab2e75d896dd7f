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

// Evaluation of predicted groups against reference MEGs: exact match and
// best soft match (EP-level precision/recall/F0.5 against the reference
// with the highest F0.5), macro-averaged over claims, plus budget counts.
//
// Failed claims are handled two ways and both figures are reported:
// strict mode scores them zero, exclusion mode drops them.

#ifndef MEG_METRICS_H_
#define MEG_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "meg/core.h"

namespace meg {

// (1+β²)pr / (β²p + r), 0 when the denominator is 0.
double f_beta(double precision, double recall, double beta);

struct SoftMatchScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_half = 0.0;
  EvidenceGroup matched_reference;
};

// Ties in F0.5 go to the lexicographically smallest reference. An empty
// prediction scores zero against the first reference.
SoftMatchScore best_soft_match(const EvidenceGroup& pred,
                               std::span<const EvidenceGroup> refs);

// A claim's ranked predictions; `failed` marks a claim whose prediction
// could not be obtained.
struct ClaimPrediction {
  std::string claim_id;
  bool failed = false;
  std::vector<EvidenceGroup> megs;  // best first; may be empty

  // Top-ranked group, or an empty group when nothing was predicted.
  EvidenceGroup top1() const { return megs.empty() ? EvidenceGroup{} : megs[0]; }
};

using ReferenceMap = std::map<std::string, std::vector<EvidenceGroup>>;

// Fraction of included claims whose top-1 prediction equals some reference.
double exact_match_precision(std::span<const ClaimPrediction> predictions,
                             const ReferenceMap& refs_by_claim,
                             bool strict_mode);

struct BudgetStats {
  std::size_t words = 0;
  std::size_t sentences = 0;
};

// Whitespace tokens over member texts; one sentence per member.
BudgetStats budget_stats(const EvidenceGroup& group,
                         const ClaimInstance& instance);

struct ClaimScore {
  std::string claim_id;
  bool failed = false;
  bool exact = false;      // top-1 equals a reference
  bool any_match = false;  // some predicted group equals a reference
  SoftMatchScore soft;
  BudgetStats budget;
  std::size_t num_predicted = 0;
};

ClaimScore score_claim(const ClaimPrediction& prediction,
                       const ClaimInstance& instance);

struct ModeSummary {
  std::size_t included = 0;
  double exact_match_precision = 0.0;
  double exact_match_any = 0.0;
  double soft_precision = 0.0;
  double soft_recall = 0.0;
  double soft_f_half = 0.0;
  double mean_words = 0.0;
  double mean_sentences = 0.0;
};

struct MetricsReport {
  std::size_t num_claims = 0;
  std::size_t num_failed = 0;
  ModeSummary strict;                   // failures count as zero
  std::optional<ModeSummary> excluded;  // failures dropped; none if all failed
  std::vector<ClaimScore> rows;
};

// Throws DataError when `rows` is empty.
MetricsReport aggregate_report(std::vector<ClaimScore> rows);

nlohmann::json to_json(const MetricsReport& report);

// Table with columns: approach, exact-match precision, soft precision,
// recall, F0.5, words, sentences; one line per failure mode.
std::string format_table(const MetricsReport& report,
                         const std::string& approach);

}  // namespace meg

#endif  // MEG_METRICS_H_
