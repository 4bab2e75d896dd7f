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

#include "meg/remote.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <iostream>
#include <sstream>
#include <thread>

#include "httplib.h"

namespace meg {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string join_lines(std::span<const std::string> texts) {
  std::string out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (i > 0) out += '\n';
    out += texts[i];
  }
  return out;
}

std::string join_spaced(std::span<const std::string> texts) {
  std::string out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (i > 0) out += ' ';
    out += texts[i];
  }
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

// Text of a response field, or "" if absent or not a string.
std::string string_field(const nlohmann::json& j, const char* name) {
  if (j.is_object()) {
    if (auto it = j.find(name); it != j.end() && it->is_string()) {
      return it->get<std::string>();
    }
  }
  return {};
}

}  // namespace

PromptTemplates PromptTemplates::Load(const std::filesystem::path& dir) {
  return {read_file(dir / "support.txt"), read_file(dir / "redundancy.txt"),
          read_file(dir / "direct.txt")};
}

void validate(const RemotePredictorConfig& cfg) {
  if (cfg.endpoint.empty()) throw DataError("remote endpoint is not set");
  if (!(cfg.timeout_seconds > 0)) throw DataError("timeout must be > 0");
  if (cfg.max_retries < 0) throw DataError("max_retries must be >= 0");
  if (cfg.max_in_flight < 1) throw DataError("max_in_flight must be >= 1");
}

std::string render_template(
    std::string_view tmpl,
    const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out.append(tmpl.substr(pos, open - pos));
    const std::string_view name = tmpl.substr(open + 2, close - open - 2);
    if (auto it = values.find(name); it != values.end()) {
      out += it->second;
    } else {
      out.append(tmpl.substr(open, close + 2 - open));
    }
    pos = close + 2;
  }
  out.append(tmpl.substr(pos));
  return out;
}

SupportLabel parse_support_label(std::string_view answer) {
  static constexpr std::pair<std::string_view, SupportLabel> kTokens[] = {
      {"FULLY_SUPPORTED", SupportLabel::kFullySupported},
      {"PARTIALLY_SUPPORTED", SupportLabel::kPartiallySupported},
      {"NOT_SUPPORTED", SupportLabel::kNotSupported},
  };
  const std::string text = upper(answer);
  std::size_t best_pos = std::string::npos;
  SupportLabel best = SupportLabel::kNotSupported;
  for (const auto& [token, label] : kTokens) {
    const std::size_t p = text.rfind(token);
    if (p == std::string::npos) continue;
    if (best_pos == std::string::npos || p > best_pos) {
      best_pos = p;
      best = label;
    }
  }
  if (best_pos == std::string::npos) {
    throw PredictionFailure("no support label in answer: \"" +
                            std::string(answer.substr(0, 80)) + "\"");
  }
  return best;
}

std::optional<bool> parse_yes_no(std::string_view answer) {
  std::size_t end = answer.size();
  while (end > 0) {
    while (end > 0 &&
           !std::isalpha(static_cast<unsigned char>(answer[end - 1]))) {
      --end;
    }
    std::size_t begin = end;
    while (begin > 0 &&
           std::isalpha(static_cast<unsigned char>(answer[begin - 1]))) {
      --begin;
    }
    const std::string word = upper(answer.substr(begin, end - begin));
    if (word == "YES") return true;
    if (word == "NO") return false;
    end = begin;
  }
  return std::nullopt;
}

HttpTransport::HttpTransport(const RemotePredictorConfig& cfg)
    : timeout_seconds_(cfg.timeout_seconds),
      max_retries_(cfg.max_retries),
      in_flight_(cfg.max_in_flight) {
  validate(cfg);
  const std::size_t scheme = cfg.endpoint.find("://");
  const std::size_t host_start =
      scheme == std::string::npos ? 0 : scheme + 3;
  const std::size_t slash = cfg.endpoint.find('/', host_start);
  host_ = cfg.endpoint.substr(0, slash);
  if (scheme == std::string::npos) host_ = "http://" + host_;
  if (slash != std::string::npos) base_path_ = cfg.endpoint.substr(slash);
  while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
}

nlohmann::json HttpTransport::post(std::string_view path,
                                   const nlohmann::json& body) {
  const std::string target = base_path_ + std::string(path);
  const std::string payload = body.dump();
  const auto timeout = std::chrono::duration<double>(timeout_seconds_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);

  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{in_flight_};

  std::string last_error;
  for (int attempt = 0; attempt <= max_retries_; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
    }
    httplib::Client client(host_);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    auto res = client.Post(target, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("POST " + target + ": HTTP " +
                           std::to_string(res->status));
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error&) {
      throw PredictionFailure("POST " + target + ": response is not JSON");
    }
  }
  throw TransportError("POST " + host_ + target + " failed after " +
                       std::to_string(max_retries_ + 1) +
                       " attempt(s): " + last_error);
}

std::string replay_key(std::string_view path, const nlohmann::json& body) {
  std::string key(path);
  key += '\n';
  key += body.dump();  // object keys are sorted, so the dump is canonical
  return key;
}

RecordingTransport::RecordingTransport(Transport& inner,
                                       const std::filesystem::path& log)
    : inner_(inner), out_(log, std::ios::binary | std::ios::trunc) {
  if (!out_) throw DataError("cannot write " + log.string());
}

nlohmann::json RecordingTransport::post(std::string_view path,
                                        const nlohmann::json& body) {
  nlohmann::json response = inner_.post(path, body);
  nlohmann::json entry = {
      {"path", path}, {"request", body}, {"response", response}};
  std::lock_guard lock(mu_);
  out_ << entry.dump() << '\n';
  out_.flush();
  return response;
}

ReplayTransport::ReplayTransport(const std::filesystem::path& log) {
  std::ifstream in(log, std::ios::binary);
  if (!in) throw DataError("cannot open replay log " + log.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto entry = nlohmann::json::parse(line);
      responses_.insert_or_assign(
          replay_key(entry.at("path").get<std::string>(), entry.at("request")),
          entry.at("response"));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(log.string() + ":" + std::to_string(lineno) + ": " +
                      e.what());
    }
  }
}

nlohmann::json ReplayTransport::post(std::string_view path,
                                     const nlohmann::json& body) {
  if (auto it = responses_.find(replay_key(path, body));
      it != responses_.end()) {
    return it->second;
  }
  throw TransportError("no recorded response for POST " + std::string(path));
}

SupportVerdict remote_predict(const RemotePredictorConfig& cfg,
                              Transport& transport,
                              std::string_view claim_text,
                              std::span<const std::string> evidence_texts) {
  const std::string prompt =
      render_template(cfg.templates.support,
                      {{"claim", std::string(claim_text)},
                       {"evidence text", join_lines(evidence_texts)}});
  const nlohmann::json body = {
      {"claim", claim_text},
      {"evidence", std::vector<std::string>(evidence_texts.begin(),
                                            evidence_texts.end())},
      {"template", cfg.templates.support},
      {"prompt", prompt}};
  const nlohmann::json response = transport.post("/support", body);
  SupportVerdict verdict{parse_support_label(string_field(response, "label")),
                         1.0};
  if (response.is_object()) {
    if (auto it = response.find("score");
        it != response.end() && !it->is_null()) {
      if (!it->is_number()) throw PredictionFailure("score is not a number");
      const double score = it->get<double>();
      if (!(score >= 0.0 && score <= 1.0)) {
        throw PredictionFailure("score outside [0, 1]");
      }
      verdict.confidence = score;
    }
  }
  return verdict;
}

bool remote_not_redundant(const RemotePredictorConfig& cfg,
                          Transport& transport, std::string_view claim_text,
                          std::span<const std::string> g1_texts,
                          std::span<const std::string> g2_texts) {
  const std::string prompt =
      render_template(cfg.templates.redundancy,
                      {{"claim", std::string(claim_text)},
                       {"evidence text 1", join_spaced(g1_texts)},
                       {"evidence text 2", join_spaced(g2_texts)}});
  const nlohmann::json body = {
      {"claim", claim_text},
      {"group1", std::vector<std::string>(g1_texts.begin(), g1_texts.end())},
      {"group2", std::vector<std::string>(g2_texts.begin(), g2_texts.end())},
      {"template", cfg.templates.redundancy},
      {"prompt", prompt}};
  nlohmann::json response;
  try {
    response = transport.post("/redundant", body);
  } catch (const PredictionFailure& e) {
    std::clog << "warning: redundancy check: " << e.what()
              << "; treating as not redundant\n";
    return true;
  }
  const std::string answer = string_field(response, "answer");
  const std::optional<bool> redundant = parse_yes_no(answer);
  if (!redundant) {
    std::clog << "warning: unparsable redundancy answer \""
              << answer.substr(0, 80) << "\"; treating as not redundant\n";
    return true;
  }
  return !*redundant;
}

std::string remote_direct_answer(const RemotePredictorConfig& cfg,
                                 Transport& transport,
                                 std::string_view claim_text,
                                 std::span<const std::string> evidence_texts,
                                 int index_base) {
  std::string listing;
  for (std::size_t i = 0; i < evidence_texts.size(); ++i) {
    if (i > 0) listing += '\n';
    listing += std::to_string(static_cast<int>(i) + index_base);
    listing += ". ";
    listing += evidence_texts[i];
  }
  const std::string prompt = render_template(
      cfg.templates.direct,
      {{"claim", std::string(claim_text)}, {"evidence text", listing}});
  const nlohmann::json body = {
      {"claim", claim_text},
      {"evidence", std::vector<std::string>(evidence_texts.begin(),
                                            evidence_texts.end())},
      {"template", cfg.templates.direct},
      {"prompt", prompt}};
  const nlohmann::json response = transport.post("/support", body);
  std::string answer = string_field(response, "label");
  if (answer.empty()) answer = string_field(response, "answer");
  return answer;
}

std::vector<std::string> member_texts(const ClaimInstance& instance,
                                      const EvidenceGroup& group) {
  std::vector<std::string> texts;
  texts.reserve(group.size());
  for (EvidenceId id : group) {
    if (id < 0 || static_cast<std::size_t>(id) >= instance.evidence.size()) {
      throw DataError("evidence id " + std::to_string(id) + " out of range");
    }
    texts.push_back(instance.evidence[static_cast<std::size_t>(id)].text);
  }
  return texts;
}

SupportVerdict RemotePredictor::predict(const ClaimInstance& instance,
                                        const EvidenceGroup& group) const {
  return remote_predict(cfg_, transport_, instance.claim_text,
                        member_texts(instance, group));
}

bool RemoteRedundancyChecker::not_redundant(const ClaimInstance& instance,
                                            const EvidenceGroup& g1,
                                            const EvidenceGroup& g2) const {
  return remote_not_redundant(cfg_, transport_, instance.claim_text,
                              member_texts(instance, g1),
                              member_texts(instance, g2));
}

}  // namespace meg
