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

#include "meg/data_io.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

namespace meg {

namespace {

std::vector<EvidenceId> ids_of(const EvidenceGroup& g) {
  return {g.begin(), g.end()};
}

}  // namespace

ClaimInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("record is not a JSON object");
  ClaimInstance inst;
  try {
    inst.claim_id = j.at("claim_id").get<std::string>();
    inst.claim_text = j.value("claim", std::string{});
    const auto& evidence = j.at("evidence");
    if (!evidence.is_array()) throw DataError("'evidence' must be an array");
    for (std::size_t i = 0; i < evidence.size(); ++i) {
      inst.evidence.push_back(
          {static_cast<EvidenceId>(i), evidence[i].get<std::string>()});
    }
    if (auto it = j.find("reference_megs"); it != j.end()) {
      for (const auto& ref : *it) {
        inst.reference_megs.emplace_back(ref.get<std::vector<EvidenceId>>());
      }
    }
    if (auto it = j.find("coverage"); it != j.end() && !it->is_null()) {
      const auto num_units = it->at("num_units").get<std::size_t>();
      const auto lists =
          it->at("ep_coverage").get<std::vector<std::vector<std::size_t>>>();
      inst.coverage = CoverageModel::FromUnitLists(num_units, lists);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(e.what());
  }
  validate(inst);
  return inst;
}

nlohmann::json to_json(const ClaimInstance& instance) {
  nlohmann::json evidence = nlohmann::json::array();
  for (const auto& ep : instance.evidence) evidence.push_back(ep.text);
  nlohmann::json refs = nlohmann::json::array();
  for (const auto& g : instance.reference_megs) refs.push_back(ids_of(g));
  nlohmann::json j = {{"claim_id", instance.claim_id},
                      {"claim", instance.claim_text},
                      {"evidence", std::move(evidence)},
                      {"reference_megs", std::move(refs)}};
  if (instance.coverage) {
    nlohmann::json lists = nlohmann::json::array();
    for (const auto& bits : instance.coverage->ep_coverage) {
      std::vector<std::size_t> units;
      for (auto u = bits.find_first(); u != UnitSet::npos;
           u = bits.find_next(u)) {
        units.push_back(u);
      }
      lists.push_back(std::move(units));
    }
    j["coverage"] = {{"num_units", instance.coverage->num_units},
                     {"ep_coverage", std::move(lists)}};
  }
  return j;
}

std::vector<ClaimInstance> read_jsonl(std::istream& in,
                                      std::string_view source) {
  std::vector<ClaimInstance> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where =
        std::string(source) + ":" + std::to_string(lineno) + ": ";
    ClaimInstance inst;
    try {
      inst = instance_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    if (!seen.insert(inst.claim_id).second) {
      throw DataError(where + "duplicate claim_id '" + inst.claim_id + "'");
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<ClaimInstance> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_jsonl(in, path.string());
}

void write_jsonl(std::ostream& out, const std::vector<ClaimInstance>& data) {
  for (const auto& inst : data) out << to_json(inst).dump() << '\n';
}

void save_jsonl(const std::filesystem::path& path,
                const std::vector<ClaimInstance>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_jsonl(out, data);
}

std::string stem(std::string_view token) {
  std::string s(token);
  for (char& c : s) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  for (std::string_view suffix : {"ing", "ed", "es", "s"}) {
    if (s.size() >= suffix.size() + 3 && s.ends_with(suffix)) {
      s.resize(s.size() - suffix.size());
      break;
    }
  }
  return s;
}

std::vector<std::string> stemmed_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           !std::isalnum(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() &&
           std::isalnum(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j > i) out.push_back(stem(text.substr(i, j - i)));
    i = j;
  }
  return out;
}

nlohmann::json to_json(const FilterReport& report) {
  nlohmann::json affected = nlohmann::json::array();
  for (const auto& g : report.affected_references) {
    affected.push_back(ids_of(g));
  }
  return {{"claim_id", report.claim_id},
          {"skipped", report.skipped},
          {"dropped", report.dropped},
          {"affected_references", std::move(affected)},
          {"kept_original_ids", report.kept_original_ids}};
}

FilterResult lexical_filter(const ClaimInstance& instance) {
  FilterResult result{instance, {}};
  FilterReport& report = result.report;
  report.claim_id = instance.claim_id;

  const bool has_texts =
      !instance.claim_text.empty() &&
      std::any_of(instance.evidence.begin(), instance.evidence.end(),
                  [](const EvidencePiece& ep) { return !ep.text.empty(); });
  if (!has_texts) {
    report.skipped = true;
    for (const auto& ep : instance.evidence) {
      report.kept_original_ids.push_back(ep.id);
    }
    return result;
  }

  const auto claim_tokens = stemmed_tokens(instance.claim_text);
  const std::set<std::string> claim_stems(claim_tokens.begin(),
                                          claim_tokens.end());
  std::vector<EvidenceId> new_id(instance.evidence.size(), -1);
  ClaimInstance& out = result.instance;
  out.evidence.clear();
  for (const auto& ep : instance.evidence) {
    const auto tokens = stemmed_tokens(ep.text);
    const bool overlap =
        std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
          return claim_stems.count(t) > 0;
        });
    if (!overlap) {
      report.dropped.push_back(ep.id);
      continue;
    }
    new_id[static_cast<std::size_t>(ep.id)] =
        static_cast<EvidenceId>(out.evidence.size());
    report.kept_original_ids.push_back(ep.id);
    out.evidence.push_back(
        {static_cast<EvidenceId>(out.evidence.size()), ep.text});
  }

  out.reference_megs.clear();
  for (const auto& ref : instance.reference_megs) {
    std::vector<EvidenceId> ids;
    for (EvidenceId id : ref) {
      if (new_id[static_cast<std::size_t>(id)] >= 0) {
        ids.push_back(new_id[static_cast<std::size_t>(id)]);
      }
    }
    if (ids.size() != ref.size()) report.affected_references.push_back(ref);
    if (!ids.empty()) out.reference_megs.emplace_back(std::move(ids));
  }

  if (instance.coverage) {
    CoverageModel cov;
    cov.num_units = instance.coverage->num_units;
    for (EvidenceId orig : report.kept_original_ids) {
      cov.ep_coverage.push_back(
          instance.coverage->ep_coverage[static_cast<std::size_t>(orig)]);
    }
    out.coverage = std::move(cov);
  }
  return result;
}

}  // namespace meg
