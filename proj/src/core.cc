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

#include "meg/core.h"

#include <algorithm>
#include <iterator>
#include <sstream>
#include <utility>

namespace meg {

EvidenceGroup::EvidenceGroup(std::initializer_list<EvidenceId> ids)
    : EvidenceGroup(std::vector<EvidenceId>(ids)) {}

EvidenceGroup::EvidenceGroup(std::vector<EvidenceId> ids)
    : members_(std::move(ids)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()),
                 members_.end());
}

EvidenceGroup EvidenceGroup::Singleton(EvidenceId id) {
  EvidenceGroup g;
  g.members_.push_back(id);
  return g;
}

bool EvidenceGroup::contains(EvidenceId id) const {
  return std::binary_search(members_.begin(), members_.end(), id);
}

bool EvidenceGroup::includes(const EvidenceGroup& other) const {
  return std::includes(members_.begin(), members_.end(),
                       other.members_.begin(), other.members_.end());
}

std::size_t EvidenceGroup::intersection_size(
    const EvidenceGroup& other) const {
  std::size_t n = 0;
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++n;
      ++a;
      ++b;
    }
  }
  return n;
}

EvidenceGroup group_union(const EvidenceGroup& a, const EvidenceGroup& b) {
  std::vector<EvidenceId> merged;
  merged.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(merged));
  return EvidenceGroup(std::move(merged));
}

std::string to_string(const EvidenceGroup& g) {
  std::ostringstream os;
  os << g;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const EvidenceGroup& g) {
  os << '{';
  bool first = true;
  for (EvidenceId id : g) {
    if (!first) os << ',';
    os << id;
    first = false;
  }
  return os << '}';
}

std::size_t EvidenceGroupHash::operator()(
    const EvidenceGroup& g) const noexcept {
  // FNV-1a over the sorted ids.
  std::size_t h = 1469598103934665603ULL;
  for (EvidenceId id : g) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(id));
    h *= 1099511628211ULL;
  }
  return h;
}

std::string_view to_string(SupportLabel label) {
  switch (label) {
    case SupportLabel::kFullySupported:
      return "FULLY_SUPPORTED";
    case SupportLabel::kPartiallySupported:
      return "PARTIALLY_SUPPORTED";
    case SupportLabel::kNotSupported:
      return "NOT_SUPPORTED";
  }
  return "NOT_SUPPORTED";
}

CoverageModel CoverageModel::FromUnitLists(
    std::size_t num_units,
    const std::vector<std::vector<std::size_t>>& unit_lists) {
  CoverageModel model;
  model.num_units = num_units;
  model.ep_coverage.reserve(unit_lists.size());
  for (const auto& units : unit_lists) {
    UnitSet bits(num_units);
    for (std::size_t u : units) {
      if (u >= num_units) {
        throw DataError("claim unit " + std::to_string(u) +
                        " out of range for " + std::to_string(num_units) +
                        " units");
      }
      bits.set(u);
    }
    model.ep_coverage.push_back(std::move(bits));
  }
  return model;
}

UnitSet coverage_of(const EvidenceGroup& group, const CoverageModel& cov) {
  UnitSet out(cov.num_units);
  for (EvidenceId id : group) {
    if (id < 0 || static_cast<std::size_t>(id) >= cov.ep_coverage.size()) {
      throw DataError("evidence id " + std::to_string(id) +
                      " has no coverage vector");
    }
    out |= cov.ep_coverage[static_cast<std::size_t>(id)];
  }
  return out;
}

void validate(const ClaimInstance& instance) {
  const std::string where = "claim '" + instance.claim_id + "': ";
  const auto n = instance.evidence.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (instance.evidence[i].id != static_cast<EvidenceId>(i)) {
      throw DataError(where + "evidence ids must be contiguous from 0");
    }
  }
  for (const auto& ref : instance.reference_megs) {
    if (ref.empty()) throw DataError(where + "empty reference MEG");
    for (EvidenceId id : ref) {
      if (id < 0 || static_cast<std::size_t>(id) >= n) {
        throw DataError(where + "reference MEG " + to_string(ref) +
                        " cites unknown evidence id " + std::to_string(id));
      }
    }
  }
  if (instance.coverage) {
    const auto& cov = *instance.coverage;
    if (cov.num_units < 1) throw DataError(where + "coverage needs >= 1 unit");
    if (cov.ep_coverage.size() != n) {
      throw DataError(where + "coverage lists " +
                      std::to_string(cov.ep_coverage.size()) +
                      " evidence pieces, instance has " + std::to_string(n));
    }
    for (const auto& bits : cov.ep_coverage) {
      if (bits.size() != cov.num_units) {
        throw DataError(where + "coverage bitset width mismatch");
      }
    }
  }
}

void validate(const SearchConfig& config) {
  if (config.max_size < 1) throw DataError("max_size must be >= 1");
  if (config.top_k < 1) throw DataError("top_k must be >= 1");
}

}  // namespace meg
