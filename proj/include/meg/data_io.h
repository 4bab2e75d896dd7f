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

// Canonical JSONL dataset format and the lexical evidence pre-filter.
//
// One claim per line:
//   {"claim_id": "c1", "claim": "...", "evidence": ["...", ...],
//    "reference_megs": [[0, 1], [1, 2]],
//    "coverage": {"num_units": 2, "ep_coverage": [[0], [1], [0]]}}
// Evidence ids are array positions; "coverage" is optional.

#ifndef MEG_DATA_IO_H_
#define MEG_DATA_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "meg/core.h"

namespace meg {

ClaimInstance instance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClaimInstance& instance);

// Parses and validates every line. Errors name the offending line; a
// repeated claim_id is an error.
std::vector<ClaimInstance> read_jsonl(std::istream& in,
                                      std::string_view source = "<stream>");
std::vector<ClaimInstance> load_jsonl(const std::filesystem::path& path);

void write_jsonl(std::ostream& out, const std::vector<ClaimInstance>& data);
void save_jsonl(const std::filesystem::path& path,
                const std::vector<ClaimInstance>& data);

// Lowercases, then strips the first matching suffix of "ing", "ed", "es",
// "s" when at least three characters remain.
std::string stem(std::string_view token);

// Stems of the alphanumeric runs of `text`.
std::vector<std::string> stemmed_tokens(std::string_view text);

struct FilterReport {
  std::string claim_id;
  bool skipped = false;  // no texts to compare
  std::vector<EvidenceId> dropped;               // original ids
  std::vector<EvidenceGroup> affected_references;  // original ids
  std::vector<EvidenceId> kept_original_ids;     // new id -> original id
};

nlohmann::json to_json(const FilterReport& report);

struct FilterResult {
  ClaimInstance instance;
  FilterReport report;
};

// Keeps the evidence pieces that share at least one stem with the claim and
// renumbers them from 0. References lose their dropped members (and vanish
// if nothing is left); the coverage model follows the renumbering.
FilterResult lexical_filter(const ClaimInstance& instance);

}  // namespace meg

#endif  // MEG_DATA_IO_H_
