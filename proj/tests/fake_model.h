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

// In-process stand-in for the remote model endpoint.

#ifndef MEG_TESTS_FAKE_MODEL_H_
#define MEG_TESTS_FAKE_MODEL_H_

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <chrono>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "meg/remote.h"

namespace meg::testing {

using nlohmann::json;

// Local HTTP server whose /support and /redundant handlers are swappable.
class FakeModel {
 public:
  using Handler = std::function<json(const json&)>;

  FakeModel() {
    server_.Post("/support", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      handle(support_, req, res);
    });
    server_.Post("/redundant", [this](const httplib::Request& req,
                                      httplib::Response& res) {
      handle(redundant_, req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeModel() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }

  void on_support(Handler h) {
    std::lock_guard lock(mu_);
    support_ = std::move(h);
  }
  void on_redundant(Handler h) {
    std::lock_guard lock(mu_);
    redundant_ = std::move(h);
  }
  void fail_first(int n) { fail_remaining_ = n; }
  void set_delay_ms(int ms) { delay_ms_ = ms; }

  json last_body() {
    std::lock_guard lock(mu_);
    return last_body_;
  }
  int max_in_flight() const { return max_in_flight_; }
  int requests() const { return requests_; }

 private:
  void handle(Handler& h, const httplib::Request& req,
              httplib::Response& res) {
    ++requests_;
    const int now = ++in_flight_;
    int seen = max_in_flight_;
    while (now > seen && !max_in_flight_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_.load()));
    if (fail_remaining_.fetch_sub(1) > 0) {
      res.status = 500;
      --in_flight_;
      return;
    }
    json body = json::parse(req.body);
    Handler handler;
    {
      std::lock_guard lock(mu_);
      last_body_ = body;
      handler = h;
    }
    res.set_content(handler(body).dump(), "application/json");
    --in_flight_;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  Handler support_ = [](const json&) { return json{{"label", "NOT_SUPPORTED"}}; };
  Handler redundant_ = [](const json&) { return json{{"answer", "NO"}}; };
  json last_body_;
  std::atomic<int> fail_remaining_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  std::atomic<int> requests_{0};
  std::atomic<int> delay_ms_{0};
};

inline RemotePredictorConfig ConfigFor(const FakeModel& model) {
  RemotePredictorConfig cfg;
  cfg.endpoint = model.endpoint();
  cfg.timeout_seconds = 5;
  cfg.max_retries = 0;
  cfg.max_in_flight = 4;
  cfg.templates = PromptTemplates::Load(MEG_TEMPLATE_DIR);
  return cfg;
}

// Texts in the "u<k>" vocabulary: a claim needs, and a piece covers, the
// units it names. The fake model answers every prompt from that reading.
inline std::set<int> UnitsIn(const std::string& text) {
  std::set<int> units;
  std::istringstream words(text);
  std::string w;
  while (words >> w) {
    if (w.size() > 1 && w[0] == 'u') units.insert(std::stoi(w.substr(1)));
  }
  return units;
}

inline std::string UnitsText(const std::string& lead,
                             const std::vector<std::size_t>& units) {
  std::string s = lead;
  for (std::size_t u : units) s += " u" + std::to_string(u);
  return s;
}

inline std::set<int> UnitsOf(const json& texts) {
  std::set<int> out;
  for (const auto& t : texts) {
    const auto u = UnitsIn(t.get<std::string>());
    out.insert(u.begin(), u.end());
  }
  return out;
}

inline void ServeUnitSemantics(FakeModel& model) {
  model.on_support([](const json& body) {
    const auto need = UnitsIn(body.at("claim").get<std::string>());
    const auto& evidence = body.at("evidence");
    if (body.at("template").get<std::string>().find("indices") !=
        std::string::npos) {
      // Direct prompt: smallest covering index set, lexicographically first.
      const std::size_t n = evidence.size();
      for (std::size_t k = 1; k <= n; ++k) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
          std::set<int> got;
          std::string answer;
          for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            const auto u = UnitsIn(evidence[i].get<std::string>());
            got.insert(u.begin(), u.end());
            if (!answer.empty()) answer += ", ";
            answer += std::to_string(i + 1);
          }
          if (std::includes(got.begin(), got.end(), need.begin(),
                            need.end())) {
            return json{{"answer", answer}};
          }
        }
      }
      return json{{"answer", "none"}};
    }
    const auto have = UnitsOf(evidence);
    std::size_t hit = 0;
    for (int u : need) hit += have.count(u);
    const char* label = hit == need.size() ? "FULLY_SUPPORTED"
                        : hit == 0         ? "NOT_SUPPORTED"
                                           : "PARTIALLY_SUPPORTED";
    return json{{"label", label},
                {"score", need.empty() ? 1.0
                                       : static_cast<double>(hit) /
                                             static_cast<double>(need.size())}};
  });
  model.on_redundant([](const json& body) {
    const auto a = UnitsOf(body.at("group1"));
    const auto b = UnitsOf(body.at("group2"));
    std::set<int> both = a;
    both.insert(b.begin(), b.end());
    return json{{"answer", both == a || both == b ? "YES" : "NO"}};
  });
}

}  // namespace meg::testing

#endif  // MEG_TESTS_FAKE_MODEL_H_
