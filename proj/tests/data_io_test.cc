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

#include "meg/data_io.h"

#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.h"

namespace meg {
namespace {

std::vector<ClaimInstance> Parse(const std::string& text) {
  std::istringstream in(text);
  return read_jsonl(in, "mem");
}

TEST(JsonlTest, LoadsFixture) {
  const auto data = load_jsonl(std::string(MEG_DATA_DIR) + "/festival.jsonl");
  ASSERT_EQ(data.size(), 1u);
  const auto& inst = data[0];
  EXPECT_EQ(inst.claim_id, "festival");
  EXPECT_EQ(inst.evidence.size(), 3u);
  EXPECT_EQ(inst.evidence[2].id, 2);
  EXPECT_EQ(inst.reference_megs,
            (std::vector<EvidenceGroup>{{0, 1}, {1, 2}}));
  ASSERT_TRUE(inst.coverage.has_value());
  EXPECT_EQ(inst.coverage->num_units, 2u);
}

TEST(JsonlTest, CoverageIsOptionalAndBlankLinesSkipped) {
  const auto data = Parse(
      "{\"claim_id\":\"a\",\"claim\":\"x\",\"evidence\":[\"e\"],"
      "\"reference_megs\":[[0]]}\n\n"
      "{\"claim_id\":\"b\",\"evidence\":[],\"reference_megs\":[]}\n");
  ASSERT_EQ(data.size(), 2u);
  EXPECT_FALSE(data[0].coverage.has_value());
  EXPECT_TRUE(data[1].evidence.empty());
}

TEST(JsonlTest, ErrorsNameTheLine) {
  const std::string good =
      "{\"claim_id\":\"a\",\"evidence\":[\"e\"],\"reference_megs\":[[0]]}\n";
  const struct {
    std::string text;
    std::string needle;
  } cases[] = {
      {good + "{not json\n", "mem:2"},
      {good + good, "duplicate claim_id"},
      {"{\"claim_id\":\"a\",\"evidence\":[\"e\"],\"reference_megs\":[[3]]}\n",
       "mem:1"},
      {"{\"evidence\":[\"e\"]}\n", "mem:1"},
      {"{\"claim_id\":\"a\",\"evidence\":\"e\"}\n", "mem:1"},
      {"[1,2]\n", "mem:1"},
      {"{\"claim_id\":\"a\",\"evidence\":[\"e\"],\"reference_megs\":[[0]],"
       "\"coverage\":{\"num_units\":1,\"ep_coverage\":[[5]]}}\n",
       "mem:1"},
      {"{\"claim_id\":\"a\",\"evidence\":[\"e\",\"f\"],"
       "\"reference_megs\":[[0]],"
       "\"coverage\":{\"num_units\":1,\"ep_coverage\":[[0]]}}\n",
       "mem:1"},
  };
  for (const auto& c : cases) {
    try {
      Parse(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find(c.needle), std::string::npos)
          << e.what();
    }
  }
  EXPECT_THROW(load_jsonl("/nonexistent/file.jsonl"), DataError);
}

TEST(JsonlTest, RoundTrip) {
  std::mt19937_64 rng(21);
  std::vector<ClaimInstance> data;
  for (int i = 0; i < 50; ++i) {
    auto inst =
        testing::RandomCoverageInstance(rng, 6, 5, "r" + std::to_string(i));
    inst.claim_text = "claim " + std::to_string(i) + " \"quoted\"";
    for (auto& ep : inst.evidence) ep.text = "piece\t" + std::to_string(ep.id);
    if (i % 2 == 0) inst.coverage.reset();
    inst.reference_megs.push_back(EvidenceGroup{0});
    data.push_back(std::move(inst));
  }
  std::ostringstream out;
  write_jsonl(out, data);
  const auto back = Parse(out.str());
  ASSERT_EQ(back.size(), data.size());
  std::ostringstream again;
  write_jsonl(again, back);
  EXPECT_EQ(out.str(), again.str());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(back[i].claim_text, data[i].claim_text);
    EXPECT_EQ(back[i].reference_megs, data[i].reference_megs);
    EXPECT_EQ(back[i].coverage.has_value(), data[i].coverage.has_value());
    if (data[i].coverage) {
      EXPECT_EQ(back[i].coverage->ep_coverage, data[i].coverage->ep_coverage);
    }
  }

  const auto path =
      std::filesystem::temp_directory_path() / "meg_data_io_roundtrip.jsonl";
  save_jsonl(path, data);
  EXPECT_EQ(load_jsonl(path).size(), data.size());
  std::filesystem::remove(path);
}

TEST(StemTest, Examples) {
  EXPECT_EQ(stem("Chased"), "chas");
  EXPECT_EQ(stem("chasing"), "chas");
  EXPECT_EQ(stem("cats"), "cat");
  EXPECT_EQ(stem("boxes"), "box");
  EXPECT_EQ(stem("is"), "is");
  EXPECT_EQ(stem("bed"), "bed");
  EXPECT_EQ(stem("RECORDS"), "record");
  EXPECT_EQ(stemmed_tokens("The cat, chased!"),
            (std::vector<std::string>{"the", "cat", "chas"}));
}

ClaimInstance CatInstance() {
  ClaimInstance inst;
  inst.claim_id = "cat";
  inst.claim_text = "The cat chased a mouse";
  inst.evidence = {{0, "A cat was chasing birds."},
                   {1, "Dogs bark loudly."},
                   {2, "Mice are chased often."}};
  inst.reference_megs = {EvidenceGroup{0, 2}, EvidenceGroup{1, 2}};
  inst.coverage = CoverageModel::FromUnitLists(3, {{0}, {1}, {2}});
  return inst;
}

TEST(LexicalFilterTest, DropsPiecesWithoutSharedStems) {
  const auto [out, report] = lexical_filter(CatInstance());
  EXPECT_FALSE(report.skipped);
  EXPECT_EQ(report.dropped, (std::vector<EvidenceId>{1}));
  EXPECT_EQ(report.kept_original_ids, (std::vector<EvidenceId>{0, 2}));
  ASSERT_EQ(out.evidence.size(), 2u);
  EXPECT_EQ(out.evidence[1].id, 1);
  EXPECT_EQ(out.evidence[1].text, "Mice are chased often.");
  // {0,2} survives renumbered; {1,2} loses piece 1 and is reported.
  EXPECT_EQ(out.reference_megs,
            (std::vector<EvidenceGroup>{{0, 1}, {1}}));
  EXPECT_EQ(report.affected_references,
            (std::vector<EvidenceGroup>{{1, 2}}));
  ASSERT_TRUE(out.coverage.has_value());
  EXPECT_EQ(out.coverage->ep_coverage.size(), 2u);
  EXPECT_TRUE(out.coverage->ep_coverage[1].test(2));
  validate(out);
  EXPECT_EQ(to_json(report).at("dropped"), nlohmann::json::array({1}));
}

TEST(LexicalFilterTest, SkipsInstancesWithoutText) {
  auto inst = testing::CoverageInstance(2, {{0}, {1}}, "synthetic");
  inst.reference_megs = {EvidenceGroup{0, 1}};
  const auto [out, report] = lexical_filter(inst);
  EXPECT_TRUE(report.skipped);
  EXPECT_TRUE(report.dropped.empty());
  EXPECT_EQ(out.evidence.size(), 2u);
  EXPECT_EQ(out.reference_megs, inst.reference_megs);
}

TEST(LexicalFilterTest, ReferenceVanishesWhenAllMembersDrop) {
  auto inst = CatInstance();
  inst.reference_megs = {EvidenceGroup{1}, EvidenceGroup{0}};
  const auto [out, report] = lexical_filter(inst);
  EXPECT_EQ(out.reference_megs, (std::vector<EvidenceGroup>{{0}}));
  EXPECT_EQ(report.affected_references, (std::vector<EvidenceGroup>{{1}}));
}

TEST(LexicalFilterTest, Idempotent) {
  const auto once = lexical_filter(CatInstance()).instance;
  const auto twice = lexical_filter(once);
  EXPECT_TRUE(twice.report.dropped.empty());
  EXPECT_EQ(twice.instance.evidence.size(), once.evidence.size());
  EXPECT_EQ(twice.instance.reference_megs, once.reference_megs);
}

}  // namespace
}  // namespace meg
