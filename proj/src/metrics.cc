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

#include "meg/metrics.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace meg {

namespace {

bool matches_any(const EvidenceGroup& g, std::span<const EvidenceGroup> refs) {
  return !g.empty() && std::find(refs.begin(), refs.end(), g) != refs.end();
}

ModeSummary summarize(const std::vector<const ClaimScore*>& rows) {
  ModeSummary s;
  s.included = rows.size();
  if (rows.empty()) return s;
  for (const ClaimScore* r : rows) {
    s.exact_match_precision += r->exact ? 1.0 : 0.0;
    s.exact_match_any += r->any_match ? 1.0 : 0.0;
    s.soft_precision += r->soft.precision;
    s.soft_recall += r->soft.recall;
    s.soft_f_half += r->soft.f_half;
    s.mean_words += static_cast<double>(r->budget.words);
    s.mean_sentences += static_cast<double>(r->budget.sentences);
  }
  const double n = static_cast<double>(rows.size());
  s.exact_match_precision /= n;
  s.exact_match_any /= n;
  s.soft_precision /= n;
  s.soft_recall /= n;
  s.soft_f_half /= n;
  s.mean_words /= n;
  s.mean_sentences /= n;
  return s;
}

nlohmann::json summary_json(const ModeSummary& s) {
  return {{"included", s.included},
          {"exact_match_precision", s.exact_match_precision},
          {"exact_match_any", s.exact_match_any},
          {"soft_precision", s.soft_precision},
          {"soft_recall", s.soft_recall},
          {"soft_f_half", s.soft_f_half},
          {"mean_words", s.mean_words},
          {"mean_sentences", s.mean_sentences}};
}

std::vector<EvidenceId> ids_of(const EvidenceGroup& g) {
  return {g.begin(), g.end()};
}

}  // namespace

double f_beta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denom;
}

SoftMatchScore best_soft_match(const EvidenceGroup& pred,
                               std::span<const EvidenceGroup> refs) {
  if (refs.empty()) throw DataError("best_soft_match needs >= 1 reference");
  SoftMatchScore best;
  best.matched_reference = refs.front();
  if (pred.empty()) return best;
  bool have = false;
  for (const auto& ref : refs) {
    const double hit = static_cast<double>(pred.intersection_size(ref));
    SoftMatchScore s;
    s.precision = hit / static_cast<double>(pred.size());
    s.recall = ref.empty() ? 0.0 : hit / static_cast<double>(ref.size());
    s.f_half = f_beta(s.precision, s.recall, 0.5);
    s.matched_reference = ref;
    if (!have || s.f_half > best.f_half ||
        (s.f_half == best.f_half && ref < best.matched_reference)) {
      best = std::move(s);
      have = true;
    }
  }
  return best;
}

double exact_match_precision(std::span<const ClaimPrediction> predictions,
                             const ReferenceMap& refs_by_claim,
                             bool strict_mode) {
  std::size_t included = 0;
  std::size_t correct = 0;
  for (const auto& p : predictions) {
    const auto it = refs_by_claim.find(p.claim_id);
    if (it == refs_by_claim.end()) {
      throw DataError("no references for claim '" + p.claim_id + "'");
    }
    if (p.failed) {
      if (strict_mode) ++included;
      continue;
    }
    ++included;
    if (matches_any(p.top1(), it->second)) ++correct;
  }
  if (included == 0) throw DataError("no claims included in evaluation");
  return static_cast<double>(correct) / static_cast<double>(included);
}

BudgetStats budget_stats(const EvidenceGroup& group,
                         const ClaimInstance& instance) {
  BudgetStats b;
  for (EvidenceId id : group) {
    if (id < 0 || static_cast<std::size_t>(id) >= instance.evidence.size()) {
      throw DataError("evidence id " + std::to_string(id) + " out of range");
    }
    std::istringstream words(instance.evidence[static_cast<std::size_t>(id)].text);
    std::string w;
    while (words >> w) ++b.words;
    ++b.sentences;
  }
  return b;
}

ClaimScore score_claim(const ClaimPrediction& prediction,
                       const ClaimInstance& instance) {
  if (instance.reference_megs.empty()) {
    throw DataError("claim '" + instance.claim_id +
                    "' has no reference MEGs to evaluate against");
  }
  ClaimScore row;
  row.claim_id = prediction.claim_id;
  row.failed = prediction.failed;
  row.soft.matched_reference = instance.reference_megs.front();
  if (prediction.failed) return row;
  const EvidenceGroup top = prediction.top1();
  row.num_predicted = prediction.megs.size();
  row.exact = matches_any(top, instance.reference_megs);
  row.any_match = std::any_of(
      prediction.megs.begin(), prediction.megs.end(),
      [&](const EvidenceGroup& g) {
        return matches_any(g, instance.reference_megs);
      });
  row.soft = best_soft_match(top, instance.reference_megs);
  row.budget = budget_stats(top, instance);
  return row;
}

MetricsReport aggregate_report(std::vector<ClaimScore> rows) {
  if (rows.empty()) throw DataError("no claims to aggregate");
  MetricsReport report;
  report.num_claims = rows.size();
  std::vector<const ClaimScore*> all;
  std::vector<const ClaimScore*> ok;
  report.rows = std::move(rows);
  for (const auto& r : report.rows) {
    all.push_back(&r);
    if (r.failed) {
      ++report.num_failed;
    } else {
      ok.push_back(&r);
    }
  }
  report.strict = summarize(all);
  if (!ok.empty()) report.excluded = summarize(ok);
  return report;
}

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"claim_id", r.claim_id},
                    {"failed", r.failed},
                    {"exact", r.exact},
                    {"any_match", r.any_match},
                    {"precision", r.soft.precision},
                    {"recall", r.soft.recall},
                    {"f_half", r.soft.f_half},
                    {"matched_reference", ids_of(r.soft.matched_reference)},
                    {"words", r.budget.words},
                    {"sentences", r.budget.sentences},
                    {"num_predicted", r.num_predicted}});
  }
  return {{"num_claims", report.num_claims},
          {"num_failed", report.num_failed},
          {"strict", summary_json(report.strict)},
          {"excluded", report.excluded ? summary_json(*report.excluded)
                                       : nlohmann::json(nullptr)},
          {"rows", std::move(rows)}};
}

std::string format_table(const MetricsReport& report,
                         const std::string& approach) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %-9s %8s %8s %8s %8s %8s %8s\n",
                "approach", "failures", "EM-P", "Prec.", "Recall", "F0.5",
                "#Words", "#Sents");
  os << line;
  const auto row = [&](const char* mode, const ModeSummary& s) {
    std::snprintf(line, sizeof(line),
                  "%-12s %-9s %8.3f %8.3f %8.3f %8.3f %8.2f %8.2f\n",
                  approach.c_str(), mode, s.exact_match_precision,
                  s.soft_precision, s.soft_recall, s.soft_f_half, s.mean_words,
                  s.mean_sentences);
    os << line;
  };
  if (report.excluded) row("excluded", *report.excluded);
  row("strict", report.strict);
  os << "claims: " << report.num_claims << ", failed: " << report.num_failed
     << '\n';
  return os.str();
}

}  // namespace meg
