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

#include "meg/setcover.h"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace meg {

namespace {

std::uint32_t to_mask(const UnitSet& bits) {
  std::uint32_t m = 0;
  for (auto i = bits.find_first(); i != UnitSet::npos; i = bits.find_next(i)) {
    m |= std::uint32_t{1} << i;
  }
  return m;
}

// Depth-first enumeration of all k-subsets (ascending indices) that cover
// `full`, with two bounds: the remaining subsets must be able to cover
// what is left, and `picks` subsets of the largest remaining size must be
// enough by count.
class ExactEnumerator {
 public:
  ExactEnumerator(std::vector<std::uint32_t> masks, std::uint32_t full)
      : masks_(std::move(masks)), full_(full) {
    const std::size_t m = masks_.size();
    suffix_or_.assign(m + 1, 0);
    suffix_max_.assign(m + 1, 0);
    for (std::size_t i = m; i-- > 0;) {
      suffix_or_[i] = suffix_or_[i + 1] | masks_[i];
      suffix_max_[i] = std::max(suffix_max_[i + 1], std::popcount(masks_[i]));
    }
  }

  std::vector<IndexSet> covers_of_size(std::size_t k) {
    out_.clear();
    chosen_.clear();
    dfs(0, 0, k);
    return out_;
  }

 private:
  void dfs(std::size_t start, std::uint32_t covered, std::size_t picks) {
    const std::uint32_t missing = full_ & ~covered;
    if (picks == 0) {
      if (missing == 0) out_.push_back(chosen_);
      return;
    }
    const std::size_t m = masks_.size();
    for (std::size_t i = start; i + picks <= m; ++i) {
      if ((suffix_or_[i] & missing) != missing) return;
      if (static_cast<std::size_t>(std::popcount(missing)) >
          picks * static_cast<std::size_t>(suffix_max_[i])) {
        return;
      }
      chosen_.push_back(i);
      dfs(i + 1, covered | masks_[i], picks - 1);
      chosen_.pop_back();
    }
  }

  std::vector<std::uint32_t> masks_;
  std::uint32_t full_;
  std::vector<std::uint32_t> suffix_or_;
  std::vector<int> suffix_max_;
  IndexSet chosen_;
  std::vector<IndexSet> out_;
};

}  // namespace

void validate(const SetCoverInstance& inst) {
  if (inst.universe_size < 1) throw DataError("set cover needs >= 1 element");
  if (inst.subsets.empty()) throw DataError("set cover needs >= 1 subset");
  for (const auto& s : inst.subsets) {
    if (s.size() != inst.universe_size) {
      throw DataError("subset width differs from universe size");
    }
  }
}

std::vector<IndexSet> solve_exact_min_covers(const SetCoverInstance& inst) {
  validate(inst);
  if (inst.universe_size > kExactMaxUniverse ||
      inst.subsets.size() > kExactMaxSubsets) {
    throw DataError("exact solver is limited to " +
                    std::to_string(kExactMaxUniverse) + " elements and " +
                    std::to_string(kExactMaxSubsets) + " subsets");
  }
  std::vector<std::uint32_t> masks;
  masks.reserve(inst.subsets.size());
  std::uint32_t reachable = 0;
  for (const auto& s : inst.subsets) {
    masks.push_back(to_mask(s));
    reachable |= masks.back();
  }
  const std::uint32_t full = (std::uint32_t{1} << inst.universe_size) - 1;
  if ((reachable & full) != full) return {};
  ExactEnumerator enumerator(std::move(masks), full);
  for (std::size_t k = 1; k <= inst.subsets.size(); ++k) {
    auto covers = enumerator.covers_of_size(k);
    if (!covers.empty()) return covers;  // DFS order is lexicographic
  }
  return {};
}

std::optional<IndexSet> solve_greedy(const SetCoverInstance& inst) {
  UnitSet covered(inst.universe_size);
  IndexSet picked;
  while (!covered.all()) {
    std::size_t best = inst.subsets.size();
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < inst.subsets.size(); ++i) {
      const std::size_t gain = (inst.subsets[i] - covered).count();
      if (gain > best_gain) {
        best = i;
        best_gain = gain;
      }
    }
    if (best_gain == 0) return std::nullopt;
    covered |= inst.subsets[best];
    picked.push_back(best);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

ClaimInstance setcover_to_meg(const SetCoverInstance& inst,
                              std::string claim_id) {
  validate(inst);
  ClaimInstance out;
  out.claim_id = std::move(claim_id);
  CoverageModel cov;
  cov.num_units = inst.universe_size;
  for (std::size_t i = 0; i < inst.subsets.size(); ++i) {
    out.evidence.push_back({static_cast<EvidenceId>(i), ""});
    cov.ep_coverage.push_back(inst.subsets[i]);
  }
  out.coverage = std::move(cov);
  return out;
}

SetCoverInstance meg_to_setcover(const ClaimInstance& instance) {
  if (!instance.coverage) {
    throw DataError("claim '" + instance.claim_id +
                    "' has no coverage model");
  }
  return {instance.coverage->num_units, instance.coverage->ep_coverage};
}

SetCoverInstance read_setcover(std::istream& in) {
  SetCoverInstance inst;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') continue;
    std::istringstream fields(line);
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (!have_header) {
      if (first == std::string::npos) continue;
      std::string keyword;
      long long n = -1;
      fields >> keyword >> n;
      if (keyword != "universe" || n < 0) {
        throw DataError(where + "expected 'universe <n>'");
      }
      inst.universe_size = static_cast<std::size_t>(n);
      have_header = true;
      continue;
    }
    UnitSet bits(inst.universe_size);
    std::string token;
    while (fields >> token) {
      std::size_t pos = 0;
      long long element = 0;
      try {
        element = std::stoll(token, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != token.size() || element < 1 ||
          element > static_cast<long long>(inst.universe_size)) {
        throw DataError(where + "bad element id '" + token + "'");
      }
      bits.set(static_cast<std::size_t>(element - 1));
    }
    inst.subsets.push_back(std::move(bits));
  }
  if (!have_header) throw DataError("missing 'universe <n>' header");
  validate(inst);
  return inst;
}

void write_setcover(std::ostream& out, const SetCoverInstance& inst) {
  out << "universe " << inst.universe_size << '\n';
  for (const auto& s : inst.subsets) {
    bool first = true;
    for (auto i = s.find_first(); i != UnitSet::npos; i = s.find_next(i)) {
      if (!first) out << ' ';
      out << i + 1;
      first = false;
    }
    out << '\n';
  }
}

void validate(const SyntheticSpec& spec) {
  if (spec.num_eps < 1) throw DataError("synthetic spec needs >= 1 piece");
  if (spec.num_units < 1) throw DataError("synthetic spec needs >= 1 unit");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) {
    throw DataError("density must be in (0, 1]");
  }
  if (spec.num_eps > kExactMaxSubsets || spec.num_units > kExactMaxUniverse) {
    throw DataError("synthetic instances are limited to " +
                    std::to_string(kExactMaxSubsets) + " pieces and " +
                    std::to_string(kExactMaxUniverse) + " units");
  }
}

ClaimInstance gen_synthetic(const SyntheticSpec& spec, std::string claim_id) {
  validate(spec);
  std::mt19937_64 rng(spec.rng_seed);
  // Explicit conversions keep the stream identical across standard
  // libraries, unlike the <random> distributions.
  const auto uniform01 = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  SetCoverInstance inst;
  inst.universe_size = spec.num_units;
  UnitSet reached(spec.num_units);
  for (std::size_t e = 0; e < spec.num_eps; ++e) {
    UnitSet bits(spec.num_units);
    for (std::size_t u = 0; u < spec.num_units; ++u) {
      if (uniform01() < spec.density) bits.set(u);
    }
    reached |= bits;
    inst.subsets.push_back(std::move(bits));
  }
  if (spec.guarantee_cover) {
    for (std::size_t u = 0; u < spec.num_units; ++u) {
      if (reached.test(u)) continue;
      inst.subsets[rng() % spec.num_eps].set(u);
      reached.set(u);
    }
  }
  if (claim_id.empty()) claim_id = "synth-" + std::to_string(spec.rng_seed);
  ClaimInstance out = setcover_to_meg(inst, std::move(claim_id));
  for (const auto& cover : solve_exact_min_covers(inst)) {
    std::vector<EvidenceId> ids(cover.begin(), cover.end());
    out.reference_megs.emplace_back(std::move(ids));
  }
  return out;
}

}  // namespace meg
