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

// Comparison systems: classic per-piece verification, classic with pairwise
// redundancy removal, and direct prediction of a group by a remote model.

#ifndef MEG_BASELINES_H_
#define MEG_BASELINES_H_

#include <string_view>

#include "meg/core.h"
#include "meg/engine.h"
#include "meg/oracles.h"
#include "meg/remote.h"

namespace meg {

// Labels every singleton. Fully supporting singletons are returned as-is;
// otherwise all partially supporting pieces are returned as one group.
SearchResult classic_identify(const ClaimInstance& instance,
                              const SupportPredictor& predictor,
                              const SearchConfig& config = {});

// classic_identify, then on the concatenation path repeatedly drops one
// piece of a redundant pair (the lower-confidence one, ties to the higher
// id) until no pair is redundant.
SearchResult classic_lr_identify(const ClaimInstance& instance,
                                 const SupportPredictor& predictor,
                                 const RedundancyChecker& checker,
                                 const SearchConfig& config = {});

// Comma-separated evidence indices -> group of ids. Throws
// PredictionFailure on a non-integer token, an index out of range, or an
// empty answer.
EvidenceGroup parse_index_list(std::string_view answer,
                               std::size_t num_evidence, int index_base);

SearchResult direct_identify(const ClaimInstance& instance,
                             const RemotePredictorConfig& cfg,
                             Transport& transport,
                             const SearchConfig& config = {},
                             int index_base = 1);

}  // namespace meg

#endif  // MEG_BASELINES_H_
