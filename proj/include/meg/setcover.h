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

// Set Cover: exact and greedy solvers, the many-one mapping between Set
// Cover and claim instances with a coverage model, and a seeded generator of
// synthetic instances. With the coverage oracle, the minimal evidence groups
// of a claim are exactly the minimum covers of the mapped instance.

#ifndef MEG_SETCOVER_H_
#define MEG_SETCOVER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "meg/core.h"

namespace meg {

using IndexSet = std::vector<std::size_t>;  // ascending subset indices

struct SetCoverInstance {
  std::size_t universe_size = 0;
  std::vector<UnitSet> subsets;  // each of width universe_size

  friend bool operator==(const SetCoverInstance&,
                         const SetCoverInstance&) = default;
};

void validate(const SetCoverInstance& inst);

inline constexpr std::size_t kExactMaxUniverse = 24;
inline constexpr std::size_t kExactMaxSubsets = 20;

// All covers of minimum cardinality, lexicographically sorted. Empty when
// the subsets cannot cover the universe. Throws DataError above 24 elements
// or 20 subsets.
std::vector<IndexSet> solve_exact_min_covers(const SetCoverInstance& inst);

// Largest-gain greedy, ties to the lowest index. nullopt if it gets stuck.
std::optional<IndexSet> solve_greedy(const SetCoverInstance& inst);

// One evidence piece per subset, with that subset as its coverage.
ClaimInstance setcover_to_meg(const SetCoverInstance& inst,
                              std::string claim_id = "setcover");

// Universe = claim units, one subset per evidence piece.
SetCoverInstance meg_to_setcover(const ClaimInstance& instance);

// Text format: "universe <n>", then one line per subset listing 1-based
// element ids separated by spaces. A line with no ids is an empty subset.
// Lines starting with '#' are comments.
SetCoverInstance read_setcover(std::istream& in);
void write_setcover(std::ostream& out, const SetCoverInstance& inst);

struct SyntheticSpec {
  std::uint64_t rng_seed = 0;
  std::size_t num_eps = 8;
  std::size_t num_units = 5;
  double density = 0.3;  // per (piece, unit) coverage probability, in (0, 1]
  bool guarantee_cover = true;
};

void validate(const SyntheticSpec& spec);

// Deterministic under the seed. reference_megs holds every minimum cover.
ClaimInstance gen_synthetic(const SyntheticSpec& spec,
                            std::string claim_id = {});

}  // namespace meg

#endif  // MEG_SETCOVER_H_
