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

#include "meg/baselines.h"

#include <cctype>
#include <charconv>
#include <map>
#include <string>
#include <vector>

namespace meg {

namespace {

struct SingletonPass {
  SearchResult result;
  std::map<EvidenceId, SupportVerdict> verdicts;  // partial pieces only
  std::vector<RankedGroup> full;
};

SingletonPass label_singletons(const ClaimInstance& instance,
                               const SupportPredictor& predictor,
                               const SearchConfig& config) {
  SingletonPass pass;
  for (const auto& ep : instance.evidence) {
    const auto group = EvidenceGroup::Singleton(ep.id);
    ++pass.result.diagnostics.predictor_calls;
    SupportVerdict v;
    try {
      v = predictor.predict(instance, group);
    } catch (const PredictionFailure& e) {
      ++pass.result.diagnostics.failures;
      if (config.strict_mode) {
        pass.result.failed = true;
        pass.result.failure_reason =
            "group " + to_string(group) + ": " + e.what();
        return pass;
      }
      v = {SupportLabel::kNotSupported, 0.0};
    }
    if (v.label == SupportLabel::kFullySupported) {
      pass.full.push_back({group, v});
    } else if (v.label == SupportLabel::kPartiallySupported) {
      pass.verdicts.emplace(ep.id, v);
    }
  }
  return pass;
}

// Labels the concatenated group for diagnostics and returns the output row.
RankedGroup concatenation_row(const ClaimInstance& instance,
                              const SupportPredictor& predictor,
                              EvidenceGroup group, SearchResult& result) {
  RankedGroup row{std::move(group), {SupportLabel::kPartiallySupported, 0.0}};
  ++result.diagnostics.predictor_calls;
  try {
    const SupportVerdict v = predictor.predict(instance, row.group);
    result.diagnostics.concatenation_verdict = v;
    row.verdict = v;
  } catch (const PredictionFailure&) {
    ++result.diagnostics.failures;
  }
  return row;
}

SearchResult finish_classic(const ClaimInstance& instance,
                            const SupportPredictor& predictor,
                            const SearchConfig& config, SingletonPass pass,
                            std::vector<EvidenceId> kept) {
  SearchResult result = std::move(pass.result);
  if (!pass.full.empty()) {
    result.found_size = 1;
    result.diagnostics.megs_found = pass.full.size();
    result.megs = rank_top_k(std::move(pass.full), config.top_k);
    return result;
  }
  if (kept.empty()) return result;
  RankedGroup row = concatenation_row(
      instance, predictor, EvidenceGroup(std::move(kept)), result);
  result.found_size = row.group.size();
  result.diagnostics.megs_found = 1;
  result.megs.push_back(std::move(row));
  return result;
}

}  // namespace

SearchResult classic_identify(const ClaimInstance& instance,
                              const SupportPredictor& predictor,
                              const SearchConfig& config) {
  validate(config);
  if (instance.evidence.empty()) {
    throw DataError("claim '" + instance.claim_id + "' has no evidence");
  }
  SingletonPass pass = label_singletons(instance, predictor, config);
  if (pass.result.failed) return std::move(pass.result);
  std::vector<EvidenceId> kept;
  for (const auto& [id, v] : pass.verdicts) kept.push_back(id);
  return finish_classic(instance, predictor, config, std::move(pass),
                        std::move(kept));
}

SearchResult classic_lr_identify(const ClaimInstance& instance,
                                 const SupportPredictor& predictor,
                                 const RedundancyChecker& checker,
                                 const SearchConfig& config) {
  validate(config);
  if (instance.evidence.empty()) {
    throw DataError("claim '" + instance.claim_id + "' has no evidence");
  }
  SingletonPass pass = label_singletons(instance, predictor, config);
  if (pass.result.failed) return std::move(pass.result);
  std::vector<EvidenceId> kept;
  for (const auto& [id, v] : pass.verdicts) kept.push_back(id);

  if (pass.full.empty()) {
    // Scan pairs in id order; drop one piece of the first redundant pair and
    // rescan until a full pass finds nothing to drop.
    bool dropped = true;
    while (dropped) {
      dropped = false;
      for (std::size_t i = 0; i < kept.size() && !dropped; ++i) {
        for (std::size_t j = i + 1; j < kept.size() && !dropped; ++j) {
          const auto a = EvidenceGroup::Singleton(kept[i]);
          const auto b = EvidenceGroup::Singleton(kept[j]);
          ++pass.result.diagnostics.redundancy_checks;
          if (checker.not_redundant(instance, a, b)) continue;
          ++pass.result.diagnostics.pruned_by_redundancy;
          const double ci = pass.verdicts.at(kept[i]).confidence;
          const double cj = pass.verdicts.at(kept[j]).confidence;
          // kept is ascending, so on a tie kept[j] has the higher id.
          const std::size_t loser = ci < cj ? i : j;
          kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(loser));
          dropped = true;
        }
      }
    }
  }
  return finish_classic(instance, predictor, config, std::move(pass),
                        std::move(kept));
}

EvidenceGroup parse_index_list(std::string_view answer,
                               std::size_t num_evidence, int index_base) {
  std::vector<EvidenceId> ids;
  std::size_t pos = 0;
  while (pos <= answer.size()) {
    std::size_t comma = answer.find(',', pos);
    if (comma == std::string_view::npos) comma = answer.size();
    std::string_view token = answer.substr(pos, comma - pos);
    while (!token.empty() &&
           std::isspace(static_cast<unsigned char>(token.front()))) {
      token.remove_prefix(1);
    }
    while (!token.empty() &&
           (std::isspace(static_cast<unsigned char>(token.back())) ||
            token.back() == '.')) {
      token.remove_suffix(1);
    }
    if (!token.empty()) {
      int value = 0;
      const auto [end, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || end != token.data() + token.size()) {
        throw PredictionFailure("not an evidence index: \"" +
                                std::string(token) + "\"");
      }
      const long long id = static_cast<long long>(value) - index_base;
      if (id < 0 || id >= static_cast<long long>(num_evidence)) {
        throw PredictionFailure("evidence index out of range: " +
                                std::string(token));
      }
      ids.push_back(static_cast<EvidenceId>(id));
    }
    pos = comma + 1;
  }
  if (ids.empty()) throw PredictionFailure("empty index list");
  return EvidenceGroup(std::move(ids));
}

SearchResult direct_identify(const ClaimInstance& instance,
                             const RemotePredictorConfig& cfg,
                             Transport& transport, const SearchConfig& config,
                             int index_base) {
  validate(config);
  SearchResult result;
  std::vector<std::string> texts;
  texts.reserve(instance.evidence.size());
  for (const auto& ep : instance.evidence) texts.push_back(ep.text);
  ++result.diagnostics.predictor_calls;
  try {
    const std::string answer = remote_direct_answer(
        cfg, transport, instance.claim_text, texts, index_base);
    EvidenceGroup group =
        parse_index_list(answer, instance.evidence.size(), index_base);
    result.found_size = group.size();
    result.diagnostics.megs_found = 1;
    result.megs.push_back(
        {std::move(group), {SupportLabel::kFullySupported, 1.0}});
  } catch (const PredictionFailure& e) {
    // A direct answer is all-or-nothing: the claim fails in either mode and
    // evaluation decides whether to exclude it or score it zero.
    ++result.diagnostics.failures;
    result.failed = true;
    result.failure_reason = e.what();
  }
  return result;
}

}  // namespace meg
