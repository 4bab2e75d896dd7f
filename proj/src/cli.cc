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

#include "meg/cli.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "meg/baselines.h"
#include "meg/data_io.h"
#include "meg/oracles.h"
#include "meg/remote.h"
#include "meg/setcover.h"

#ifndef MEG_DEFAULT_TEMPLATE_DIR
#define MEG_DEFAULT_TEMPLATE_DIR "templates"
#endif

namespace meg::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<EvidenceId> ids_of(const EvidenceGroup& g) {
  return {g.begin(), g.end()};
}

nlohmann::json diagnostics_json(const SearchDiagnostics& d) {
  nlohmann::json j = {{"predictor_calls", d.predictor_calls},
                      {"redundancy_checks", d.redundancy_checks},
                      {"pruned_by_redundancy", d.pruned_by_redundancy},
                      {"pruned_by_label", d.pruned_by_label},
                      {"failures", d.failures},
                      {"megs_found", d.megs_found}};
  if (d.concatenation_verdict) {
    j["concatenation_verdict"] = {
        {"label", to_string(d.concatenation_verdict->label)},
        {"confidence", d.concatenation_verdict->confidence}};
  }
  return j;
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, std::ostream& out,
          const std::string& content) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + path);
  f << content;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// ---------------------------------------------------------------- identify

struct IdentifyOptions {
  std::string in;
  std::string out = "-";
  std::string approach = "ours";
  std::string oracle = "coverage";
  std::size_t max_size = SearchConfig::kDefaultMaxSize;
  std::size_t top_k = 0;  // 0: keep all
  bool strict = false;
  bool no_prune = false;
  std::size_t workers = 1;
  int index_base = 1;
  std::string endpoint;
  std::string templates = MEG_DEFAULT_TEMPLATE_DIR;
  double timeout = 60.0;
  int retries = 2;
  int concurrency = 4;
  std::string record;
  std::string replay;
};

// Remote plumbing shared by all workers of one run.
struct RemoteContext {
  RemotePredictorConfig cfg;
  std::unique_ptr<Transport> http;
  std::unique_ptr<Transport> wrapper;
  Transport* transport = nullptr;
};

std::unique_ptr<RemoteContext> make_remote(const IdentifyOptions& o) {
  auto ctx = std::make_unique<RemoteContext>();
  ctx->cfg.endpoint = o.endpoint;
  if (ctx->cfg.endpoint.empty()) {
    if (const char* env = std::getenv("MEG_ENDPOINT")) ctx->cfg.endpoint = env;
  }
  ctx->cfg.timeout_seconds = o.timeout;
  ctx->cfg.max_retries = o.retries;
  ctx->cfg.max_in_flight = o.concurrency;
  ctx->cfg.templates = PromptTemplates::Load(o.templates);
  if (!o.replay.empty()) {
    if (!o.record.empty()) throw UsageError("--record and --replay conflict");
    ctx->wrapper = std::make_unique<ReplayTransport>(o.replay);
    ctx->transport = ctx->wrapper.get();
    return ctx;
  }
  if (ctx->cfg.endpoint.empty()) {
    throw UsageError(
        "remote predictor needs --endpoint, MEG_ENDPOINT, or --replay");
  }
  ctx->http = std::make_unique<HttpTransport>(ctx->cfg);
  ctx->transport = ctx->http.get();
  if (!o.record.empty()) {
    ctx->wrapper = std::make_unique<RecordingTransport>(*ctx->http, o.record);
    ctx->transport = ctx->wrapper.get();
  }
  return ctx;
}

int cmd_identify(const IdentifyOptions& o, std::ostream& out) {
  const std::vector<ClaimInstance> data = load_jsonl(o.in);

  SearchConfig config;
  config.max_size = o.max_size;
  if (o.top_k > 0) config.top_k = o.top_k;
  config.strict_mode = o.strict;
  validate(config);

  const bool needs_remote = o.oracle == "remote" || o.approach == "direct";
  std::unique_ptr<RemoteContext> remote;
  if (needs_remote) remote = make_remote(o);

  std::unique_ptr<SupportPredictor> base;
  std::unique_ptr<RedundancyChecker> checker;
  if (o.oracle == "coverage") {
    base = std::make_unique<CoveragePredictor>();
    checker = std::make_unique<CoverageRedundancyChecker>();
  } else if (o.oracle == "annotation") {
    base = std::make_unique<AnnotationPredictor>();
    checker = std::make_unique<NeverRedundant>();
  } else {
    base = std::make_unique<RemotePredictor>(remote->cfg, *remote->transport);
    checker = std::make_unique<RemoteRedundancyChecker>(remote->cfg,
                                                        *remote->transport);
  }
  if (o.no_prune) checker = std::make_unique<NeverRedundant>();
  const CachedPredictor predictor(*base);

  std::vector<std::string> lines(data.size());
  parallel_for(data.size(), o.workers, [&](std::size_t i) {
    const ClaimInstance& inst = data[i];
    SearchResult r;
    if (o.approach == "ours") {
      r = identify_megs(inst, predictor, *checker, config);
    } else if (o.approach == "classic") {
      r = classic_identify(inst, predictor, config);
    } else if (o.approach == "classic-lr") {
      r = classic_lr_identify(inst, predictor, *checker, config);
    } else if (o.approach == "direct") {
      r = direct_identify(inst, remote->cfg, *remote->transport, config,
                          o.index_base);
    } else {
      r = brute_force_megs(inst, predictor, config.max_size);
      r.megs = rank_top_k(std::move(r.megs), config.top_k);
    }
    lines[i] = prediction_row(inst.claim_id, o.approach, r).dump() + '\n';
  });

  std::string content;
  for (const auto& line : lines) content += line;
  emit(o.out, out, content);
  return kOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::string data;
  std::string predictions;
  std::string out;
  std::string table;
  std::string approach;
  bool strict = false;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  const std::vector<ClaimInstance> data = load_jsonl(o.data);
  std::map<std::string, const ClaimInstance*> by_id;
  for (const auto& inst : data) by_id.emplace(inst.claim_id, &inst);

  std::ifstream in(o.predictions, std::ios::binary);
  if (!in) throw DataError("cannot open " + o.predictions);
  std::vector<ClaimPrediction> predictions;
  std::set<std::string> seen;
  std::string approach = o.approach;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where =
        o.predictions + ":" + std::to_string(lineno) + ": ";
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
      predictions.push_back(prediction_from_row(row));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what());
    }
    const std::string& id = predictions.back().claim_id;
    if (!by_id.count(id)) {
      throw DataError(where + "claim '" + id + "' is not in the dataset");
    }
    if (!seen.insert(id).second) {
      throw DataError(where + "duplicate prediction for '" + id + "'");
    }
    if (approach.empty()) approach = row.value("approach", std::string{});
  }
  if (predictions.empty()) throw DataError("no predictions in " + o.predictions);
  for (const auto& inst : data) {
    if (!seen.count(inst.claim_id)) {
      throw DataError("no prediction for claim '" + inst.claim_id + "'");
    }
  }

  std::vector<ClaimScore> rows;
  rows.reserve(predictions.size());
  for (const auto& p : predictions) {
    rows.push_back(score_claim(p, *by_id.at(p.claim_id)));
  }
  const MetricsReport report = aggregate_report(std::move(rows));
  const std::string table = format_table(report, approach);
  if (!o.out.empty()) emit(o.out, out, to_json(report).dump(2) + '\n');
  if (!o.table.empty()) emit(o.table, out, table);

  const ModeSummary* head = &report.strict;
  std::string mode = "strict";
  if (!o.strict && report.excluded) {
    head = &*report.excluded;
    mode = "excluded";
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "mode=%s claims=%zu failed=%zu exact_match_precision=%.4f "
                "soft_precision=%.4f soft_recall=%.4f soft_f_half=%.4f\n",
                mode.c_str(), report.num_claims, report.num_failed,
                head->exact_match_precision, head->soft_precision,
                head->soft_recall, head->soft_f_half);
  out << buf;
  if (o.table.empty()) out << table;
  return kOk;
}

// ------------------------------------------------------------------- synth

struct SynthOptions {
  std::uint64_t seed = 0;
  std::size_t eps = 8;
  std::size_t units = 5;
  double density = 0.3;
  std::size_t count = 1;
  bool guarantee_cover = false;
  std::string out = "-";
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  std::vector<ClaimInstance> data;
  data.reserve(o.count);
  for (std::size_t i = 0; i < o.count; ++i) {
    SyntheticSpec spec;
    spec.rng_seed = splitmix64(o.seed ^ splitmix64(i));
    spec.num_eps = o.eps;
    spec.num_units = o.units;
    spec.density = o.density;
    spec.guarantee_cover = o.guarantee_cover;
    data.push_back(gen_synthetic(
        spec, "synth-" + std::to_string(o.seed) + "-" + std::to_string(i)));
  }
  std::ostringstream ss;
  write_jsonl(ss, data);
  emit(o.out, out, ss.str());
  return kOk;
}

// ------------------------------------------------------------------ reduce

struct ReduceOptions {
  std::string in;
  std::string from;  // setcover | meg; inferred from the extension if empty
  std::string to;    // setcover | meg; no conversion if empty
  std::string out = "-";
  std::string solve;  // exact | greedy
  std::string claim;
};

nlohmann::json one_based(const IndexSet& s) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i : s) j.push_back(i + 1);
  return j;
}

int cmd_reduce(const ReduceOptions& o, std::ostream& out) {
  std::string from = o.from;
  if (from.empty()) from = o.in.ends_with(".jsonl") ? "meg" : "setcover";

  SetCoverInstance inst;
  std::string claim_id = "setcover";
  if (from == "setcover") {
    std::istringstream text(read_text(o.in));
    inst = read_setcover(text);
  } else {
    const auto data = load_jsonl(o.in);
    const ClaimInstance* chosen = nullptr;
    for (const auto& c : data) {
      if (o.claim.empty() ? data.size() == 1 : c.claim_id == o.claim) {
        chosen = &c;
      }
    }
    if (!chosen) {
      throw UsageError(o.claim.empty()
                           ? "input has several claims; pick one with --claim"
                           : "claim '" + o.claim + "' not found");
    }
    inst = meg_to_setcover(*chosen);
    claim_id = chosen->claim_id;
  }

  if (o.to == "meg") {
    std::ostringstream ss;
    write_jsonl(ss, {setcover_to_meg(inst, claim_id)});
    emit(o.out, out, ss.str());
  } else if (o.to == "setcover") {
    std::ostringstream ss;
    write_setcover(ss, inst);
    emit(o.out, out, ss.str());
  }

  if (o.solve == "exact") {
    nlohmann::json covers = nlohmann::json::array();
    for (const auto& c : solve_exact_min_covers(inst)) {
      covers.push_back(one_based(c));
    }
    out << covers.dump() << '\n';
  } else if (o.solve == "greedy") {
    const auto cover = solve_greedy(inst);
    out << (cover ? one_based(*cover) : nlohmann::json(nullptr)).dump() << '\n';
  }
  return kOk;
}

// ------------------------------------------------------------------ filter

int cmd_filter(const std::string& in, const std::string& out_path,
               const std::string& report_path, std::ostream& out) {
  const auto data = load_jsonl(in);
  std::vector<ClaimInstance> filtered;
  std::ostringstream reports;
  for (const auto& inst : data) {
    FilterResult r = lexical_filter(inst);
    reports << to_json(r.report).dump() << '\n';
    filtered.push_back(std::move(r.instance));
  }
  std::ostringstream ss;
  write_jsonl(ss, filtered);
  emit(out_path, out, ss.str());
  if (!report_path.empty()) emit(report_path, out, reports.str());
  return kOk;
}

}  // namespace

nlohmann::json prediction_row(const std::string& claim_id,
                              const std::string& approach,
                              const SearchResult& result) {
  nlohmann::json megs = nlohmann::json::array();
  nlohmann::json confidences = nlohmann::json::array();
  for (const auto& m : result.megs) {
    megs.push_back(ids_of(m.group));
    confidences.push_back(m.verdict.confidence);
  }
  nlohmann::json row = {
      {"claim_id", claim_id},
      {"approach", approach},
      {"failed", result.failed},
      {"found_size", result.found_size ? nlohmann::json(*result.found_size)
                                       : nlohmann::json(nullptr)},
      {"megs", std::move(megs)},
      {"confidences", std::move(confidences)},
      {"diagnostics", diagnostics_json(result.diagnostics)}};
  if (result.failed) row["failure_reason"] = result.failure_reason;
  return row;
}

ClaimPrediction prediction_from_row(const nlohmann::json& row) {
  ClaimPrediction p;
  p.claim_id = row.at("claim_id").get<std::string>();
  p.failed = row.value("failed", false);
  if (auto it = row.find("megs"); it != row.end()) {
    for (const auto& g : *it) {
      p.megs.emplace_back(g.get<std::vector<EvidenceId>>());
    }
  }
  return p;
}

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Minimal evidence group identification"};
  app.require_subcommand(1);

  IdentifyOptions id;
  auto* identify = app.add_subcommand("identify", "Find MEGs for every claim");
  identify->add_option("--in", id.in, "Dataset JSONL")->required();
  identify->add_option("--out", id.out, "Predictions JSONL ('-' = stdout)");
  identify->add_option("--approach", id.approach)
      ->check(CLI::IsMember({"ours", "classic", "classic-lr", "direct",
                             "brute"}));
  identify->add_option("--oracle", id.oracle)
      ->check(CLI::IsMember({"coverage", "annotation", "remote"}));
  identify->add_option("--max-size", id.max_size)->check(CLI::PositiveNumber);
  identify->add_option("--top-k", id.top_k, "Groups kept per claim (0 = all)");
  identify->add_flag("--strict", id.strict,
                     "A failed prediction fails the whole claim");
  identify->add_flag("--no-prune", id.no_prune, "Disable redundancy pruning");
  identify->add_option("--workers", id.workers)->check(CLI::PositiveNumber);
  identify->add_option("--index-base", id.index_base,
                       "First index in direct-prediction prompts")
      ->check(CLI::IsMember({0, 1}));
  identify->add_option("--endpoint", id.endpoint,
                       "Remote model URL (default: $MEG_ENDPOINT)");
  identify->add_option("--templates", id.templates, "Prompt template dir");
  identify->add_option("--timeout", id.timeout, "Seconds per request");
  identify->add_option("--retries", id.retries);
  identify->add_option("--concurrency", id.concurrency,
                       "Max in-flight remote requests");
  identify->add_option("--record", id.record, "Record remote traffic here");
  identify->add_option("--replay", id.replay, "Serve remote traffic from here");

  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  evaluate->add_option("--data", ev.data, "Dataset JSONL")->required();
  evaluate->add_option("--predictions", ev.predictions)->required();
  evaluate->add_option("--out", ev.out, "Report JSON");
  evaluate->add_option("--table", ev.table, "Plain-text table");
  evaluate->add_option("--approach", ev.approach, "Name shown in the table");
  evaluate->add_flag("--strict", ev.strict,
                     "Headline counts failed claims as zero");

  SynthOptions sy;
  auto* synth = app.add_subcommand("synth", "Generate coverage instances");
  synth->add_option("--seed", sy.seed);
  synth->add_option("--eps", sy.eps)->check(CLI::Range(1, 20));
  synth->add_option("--units", sy.units)->check(CLI::Range(1, 24));
  synth->add_option("--density", sy.density);
  synth->add_option("--count", sy.count);
  synth->add_flag("--guarantee-cover", sy.guarantee_cover);
  synth->add_option("--out", sy.out);

  ReduceOptions rd;
  auto* reduce = app.add_subcommand("reduce", "Convert or solve Set Cover");
  reduce->add_option("--in", rd.in)->required();
  reduce->add_option("--from", rd.from)
      ->check(CLI::IsMember({"setcover", "meg"}));
  reduce->add_option("--to", rd.to)->check(CLI::IsMember({"setcover", "meg"}));
  reduce->add_option("--out", rd.out);
  reduce->add_option("--solve", rd.solve)
      ->check(CLI::IsMember({"exact", "greedy"}));
  reduce->add_option("--claim", rd.claim, "Claim to convert from a dataset");

  std::string filter_in, filter_out = "-", filter_report;
  auto* filter = app.add_subcommand("filter", "Drop evidence without stem "
                                              "overlap with the claim");
  filter->add_option("--in", filter_in)->required();
  filter->add_option("--out", filter_out);
  filter->add_option("--report", filter_report, "Drop report JSONL");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*identify) return cmd_identify(id, out);
    if (*evaluate) return cmd_evaluate(ev, out);
    if (*synth) {
      validate(SyntheticSpec{0, sy.eps, sy.units, sy.density, true});
      return cmd_synth(sy, out);
    }
    if (*reduce) return cmd_reduce(rd, out);
    if (*filter) return cmd_filter(filter_in, filter_out, filter_report, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const TransportError& e) {
    err << "transport error: " << e.what() << '\n';
    return kTransportError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace meg::cli
