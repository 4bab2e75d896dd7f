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

// Client for a remote support/redundancy model.
//
// Wire protocol (UTF-8 JSON over HTTP POST):
//   {endpoint}/support    {claim, evidence[], template, prompt}
//                         -> {label, score?}
//   {endpoint}/redundant  {claim, group1[], group2[], template, prompt}
//                         -> {answer}
// `template` is the raw template text and `prompt` the rendered one.
//
// All traffic goes through a Transport, which can record to or replay from
// a file.

#ifndef MEG_REMOTE_H_
#define MEG_REMOTE_H_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "meg/core.h"
#include "meg/oracles.h"

namespace meg {

struct PromptTemplates {
  std::string support;     // {{claim}}, {{evidence text}}
  std::string redundancy;  // {{claim}}, {{evidence text 1}}, {{evidence text 2}}
  std::string direct;      // {{claim}}, {{evidence text}}

  // Reads support.txt, redundancy.txt and direct.txt from `dir`.
  static PromptTemplates Load(const std::filesystem::path& dir);
};

struct RemotePredictorConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8080 or http://host/api
  double timeout_seconds = 60.0;
  int max_retries = 2;
  int max_in_flight = 4;
  PromptTemplates templates;
};

void validate(const RemotePredictorConfig& cfg);

// Replaces every "{{name}}" with its value; unknown placeholders are left.
std::string render_template(
    std::string_view tmpl,
    const std::map<std::string, std::string, std::less<>>& values);

// The label token that occurs last in `answer`. Throws PredictionFailure if
// none of FULLY_SUPPORTED, PARTIALLY_SUPPORTED, NOT_SUPPORTED occurs.
SupportLabel parse_support_label(std::string_view answer);

// The last YES/NO word in `answer` (case-insensitive): true for YES.
std::optional<bool> parse_yes_no(std::string_view answer);

class Transport {
 public:
  virtual ~Transport() = default;
  // POSTs `body` to `path` ("/support", "/redundant") and returns the parsed
  // JSON response. Throws TransportError when no response is obtained and
  // PredictionFailure when the response is not JSON.
  virtual nlohmann::json post(std::string_view path,
                              const nlohmann::json& body) = 0;
};

class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(const RemotePredictorConfig& cfg);

  nlohmann::json post(std::string_view path,
                      const nlohmann::json& body) override;

 private:
  std::string host_;  // scheme://host[:port]
  std::string base_path_;
  double timeout_seconds_;
  int max_retries_;
  std::counting_semaphore<> in_flight_;
};

// Forwards to `inner` and appends every exchange to a JSONL log.
class RecordingTransport final : public Transport {
 public:
  RecordingTransport(Transport& inner, const std::filesystem::path& log);

  nlohmann::json post(std::string_view path,
                      const nlohmann::json& body) override;

 private:
  Transport& inner_;
  std::mutex mu_;
  std::ofstream out_;
};

// Serves responses from a log written by RecordingTransport.
class ReplayTransport final : public Transport {
 public:
  explicit ReplayTransport(const std::filesystem::path& log);

  nlohmann::json post(std::string_view path,
                      const nlohmann::json& body) override;

  std::size_t size() const { return responses_.size(); }

 private:
  std::unordered_map<std::string, nlohmann::json> responses_;
};

// Key under which an exchange is recorded: path plus canonical body.
std::string replay_key(std::string_view path, const nlohmann::json& body);

SupportVerdict remote_predict(const RemotePredictorConfig& cfg,
                              Transport& transport,
                              std::string_view claim_text,
                              std::span<const std::string> evidence_texts);

// YES means redundant (false); unparsable answers never prune (true).
bool remote_not_redundant(const RemotePredictorConfig& cfg,
                          Transport& transport, std::string_view claim_text,
                          std::span<const std::string> g1_texts,
                          std::span<const std::string> g2_texts);

// Raw answer of the direct-prediction prompt. Evidence is listed one per
// line, prefixed with its index starting at `index_base`.
std::string remote_direct_answer(const RemotePredictorConfig& cfg,
                                 Transport& transport,
                                 std::string_view claim_text,
                                 std::span<const std::string> evidence_texts,
                                 int index_base);

std::vector<std::string> member_texts(const ClaimInstance& instance,
                                      const EvidenceGroup& group);

class RemotePredictor final : public SupportPredictor {
 public:
  RemotePredictor(const RemotePredictorConfig& cfg, Transport& transport)
      : cfg_(cfg), transport_(transport) {}

  SupportVerdict predict(const ClaimInstance& instance,
                         const EvidenceGroup& group) const override;

 private:
  const RemotePredictorConfig& cfg_;
  Transport& transport_;
};

class RemoteRedundancyChecker final : public RedundancyChecker {
 public:
  RemoteRedundancyChecker(const RemotePredictorConfig& cfg,
                          Transport& transport)
      : cfg_(cfg), transport_(transport) {}

  bool not_redundant(const ClaimInstance& instance, const EvidenceGroup& g1,
                     const EvidenceGroup& g2) const override;

 private:
  const RemotePredictorConfig& cfg_;
  Transport& transport_;
};

}  // namespace meg

#endif  // MEG_REMOTE_H_
