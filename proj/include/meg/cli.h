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

// Command-line front end: identify, evaluate, synth, reduce, filter.

#ifndef MEG_CLI_H_
#define MEG_CLI_H_

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "meg/engine.h"
#include "meg/metrics.h"

namespace meg::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kDataError = 3,
  kTransportError = 4,
};

// Runs one command; args exclude the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// One row of a predictions file.
nlohmann::json prediction_row(const std::string& claim_id,
                              const std::string& approach,
                              const SearchResult& result);
ClaimPrediction prediction_from_row(const nlohmann::json& row);

// Runs `task(i)` for i in [0, n) on `workers` threads. The first exception
// by index is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace meg::cli

#endif  // MEG_CLI_H_
