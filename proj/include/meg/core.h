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

// Domain types shared by every module: evidence pieces, evidence groups,
// support verdicts, claim-unit coverage models and claim instances.

#ifndef MEG_CORE_H_
#define MEG_CORE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace meg {

using EvidenceId = int;
using UnitSet = boost::dynamic_bitset<std::uint64_t>;

// Error hierarchy. The CLI maps each class to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data or a violated instance invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

// The remote endpoint could not be reached or kept failing.
class TransportError : public Error {
 public:
  using Error::Error;
};

// A predictor answered, but the answer could not be turned into a verdict.
class PredictionFailure : public Error {
 public:
  using Error::Error;
};

struct EvidencePiece {
  EvidenceId id = 0;
  std::string text;
};

// A set of evidence-piece ids, stored sorted and deduplicated. Groups that
// take part in a search are never empty; an empty group only appears as
// "no prediction" in evaluation. Comparison is lexicographic over the sorted
// members, so equality is set equality whatever order ids were supplied in.
class EvidenceGroup {
 public:
  EvidenceGroup() = default;
  EvidenceGroup(std::initializer_list<EvidenceId> ids);
  explicit EvidenceGroup(std::vector<EvidenceId> ids);

  static EvidenceGroup Singleton(EvidenceId id);

  std::span<const EvidenceId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(EvidenceId id) const;
  bool includes(const EvidenceGroup& other) const;  // other ⊆ *this
  std::size_t intersection_size(const EvidenceGroup& other) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const EvidenceGroup&, const EvidenceGroup&) = default;
  friend auto operator<=>(const EvidenceGroup& a, const EvidenceGroup& b) {
    return a.members_ <=> b.members_;
  }

 private:
  std::vector<EvidenceId> members_;
};

EvidenceGroup group_union(const EvidenceGroup& a, const EvidenceGroup& b);

// "{0,1,2}".
std::string to_string(const EvidenceGroup& g);
std::ostream& operator<<(std::ostream& os, const EvidenceGroup& g);

struct EvidenceGroupHash {
  std::size_t operator()(const EvidenceGroup& g) const noexcept;
};

// Ordered NotSupported < PartiallySupported < FullySupported.
enum class SupportLabel : std::uint8_t {
  kNotSupported = 0,
  kPartiallySupported = 1,
  kFullySupported = 2,
};

std::string_view to_string(SupportLabel label);

struct SupportVerdict {
  SupportLabel label = SupportLabel::kNotSupported;
  double confidence = 1.0;  // in [0, 1], confidence in `label`

  friend bool operator==(const SupportVerdict&,
                         const SupportVerdict&) = default;
};

// Claim units and, for every evidence piece, the units it verifies.
struct CoverageModel {
  std::size_t num_units = 0;
  std::vector<UnitSet> ep_coverage;  // indexed by evidence id

  // Builds a model from unit-index lists, one list per evidence piece.
  static CoverageModel FromUnitLists(
      std::size_t num_units,
      const std::vector<std::vector<std::size_t>>& unit_lists);
};

// Bitwise OR of the member coverages. Throws DataError on an unknown id.
UnitSet coverage_of(const EvidenceGroup& group, const CoverageModel& cov);

struct ClaimInstance {
  std::string claim_id;
  std::string claim_text;
  std::vector<EvidencePiece> evidence;
  // Kept as annotated; supersets of other references are not removed.
  std::vector<EvidenceGroup> reference_megs;
  std::optional<CoverageModel> coverage;

  std::size_t num_evidence() const { return evidence.size(); }
};

// Throws DataError naming the first violated invariant.
void validate(const ClaimInstance& instance);

struct SearchConfig {
  static constexpr std::size_t kDefaultMaxSize = 5;

  std::size_t max_size = kDefaultMaxSize;
  // Ranked groups kept in a result. Unbounded by default.
  std::size_t top_k = std::numeric_limits<std::size_t>::max();
  // true: one failed prediction fails the whole claim.
  // false: the failed group is treated as NotSupported.
  bool strict_mode = false;
};

void validate(const SearchConfig& config);

}  // namespace meg

template <>
struct std::hash<meg::EvidenceGroup> : meg::EvidenceGroupHash {};

#endif  // MEG_CORE_H_
