// Copyright 2026 The nsum Authors.
//
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

#include <gtest/gtest.h>

#include "json.hpp"
#include "nsum/rouge.hpp"
#include "rouge_oracle.hpp"
#include "test_util.hpp"

namespace nsum {
namespace {

using testing::ExpectErrorCode;

Sentence Toks(const std::string& text) { return TokenizeSentence(text); }

void ExpectScore(const RougeScore& got, const RougeScore& want) {
  EXPECT_DOUBLE_EQ(got.precision, want.precision);
  EXPECT_DOUBLE_EQ(got.recall, want.recall);
  EXPECT_DOUBLE_EQ(got.f1, want.f1);
}

TEST(Rouge, HandComputedCatSat) {
  const auto r1 = RougeN(Toks("the cat sat"), {Toks("the cat sat on the mat")}, 1);
  EXPECT_DOUBLE_EQ(r1.recall, 0.5);
  EXPECT_DOUBLE_EQ(r1.precision, 1.0);
  EXPECT_DOUBLE_EQ(r1.f1, 2.0 / 3.0);
  const auto r2 = RougeN(Toks("the cat sat"), {Toks("the cat sat on the mat")}, 2);
  EXPECT_DOUBLE_EQ(r2.recall, 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(r2.precision, 1.0);
}

TEST(Rouge, IdenticalAndDisjoint) {
  const Sentence s = Toks("a b c d");
  for (std::size_t n : {1, 2}) ExpectScore(RougeN(s, {s}, n), {1.0, 1.0, 1.0});
  ExpectScore(RougeL(s, {s}), {1.0, 1.0, 1.0});
  ExpectScore(RougeN(s, {Toks("w x y z")}, 1), {0.0, 0.0, 0.0});
  ExpectScore(RougeN({}, {s}, 1), {0.0, 0.0, 0.0});
  ExpectScore(RougeL({}, {s}), {0.0, 0.0, 0.0});
}

TEST(Rouge, ClippedCounts) {
  const auto r = RougeN(Toks("the the the"), {Toks("the cat on the mat")}, 1);
  EXPECT_DOUBLE_EQ(r.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.recall, 2.0 / 5.0);
}

TEST(Rouge, ReversedSequenceHasLcsOne) {
  EXPECT_EQ(LcsLength(Toks("c b a"), Toks("a b c")), 1u);
  EXPECT_DOUBLE_EQ(RougeL(Toks("c b a"), {Toks("a b c")}).recall, 1.0 / 3.0);
}

TEST(Rouge, MatchesBruteForceOraclesOnRandomPairs) {
  RngStream rng(42);
  for (int i = 0; i < 100; ++i) {
    const auto [cand, ref] = testing::RandomPair(rng);
    for (std::size_t n : {1, 2}) ExpectScore(RougeN(cand, {ref}, n), testing::OracleRougeN(cand, ref, n));
    EXPECT_EQ(LcsLength(cand, ref), testing::OracleLcs(cand, ref));
    ExpectScore(RougeL(cand, {ref}), testing::OracleRougeL(cand, ref));
  }
}

TEST(Rouge, PropertiesOnRandomPairs) {
  RngStream rng(43);
  for (int i = 0; i < 300; ++i) {
    const auto [a, b] = testing::RandomPair(rng);
    EXPECT_LE(RougeL(a, {b}).recall, RougeN(a, {b}, 1).recall + 1e-15);
    for (std::size_t n : {1, 2}) {
      const auto ab = RougeN(a, {b}, n), ba = RougeN(b, {a}, n);
      EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
      EXPECT_DOUBLE_EQ(ab.recall, ba.precision);
      EXPECT_GE(ab.f1, 0.0);
      EXPECT_LE(ab.f1, 1.0);
    }
  }
}

TEST(Rouge, SuffixWithoutCrossNgramsKeepsOverlapCount) {
  // The suffix shares no token with the prefix, so it adds exactly its own
  // n-grams to both sides and one new boundary bigram on each side.
  const Sentence cand = Toks("a b c"), ref = Toks("a b d c");
  const Sentence suffix = {"x", "y"};
  Sentence c2 = cand, r2 = ref;
  c2.insert(c2.end(), suffix.begin(), suffix.end());
  r2.insert(r2.end(), suffix.begin(), suffix.end());
  const auto before = RougeN(cand, {ref}, 2), after = RougeN(c2, {r2}, 2);
  // "a b" matched before; "x y" and "c x" match after.
  EXPECT_DOUBLE_EQ(before.recall, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(after.recall, 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(after.precision, 3.0 / 4.0);
}

TEST(Rouge, MultipleReferencesTakeBestF1OrAverage) {
  const Sentence cand = Toks("a b c");
  const std::vector<Sentence> refs = {Toks("x y z"), Toks("a b c")};
  ExpectScore(RougeN(cand, refs, 1), {1.0, 1.0, 1.0});
  const auto avg = RougeN(cand, refs, 1, ReferenceAggregation::kAverage);
  EXPECT_DOUBLE_EQ(avg.recall, 0.5);
  EXPECT_DOUBLE_EQ(avg.f1, 0.5);
}

TEST(Limits, ParseAndFormat) {
  EXPECT_EQ(LimitSpec::Parse("none").kind, LimitKind::kNone);
  EXPECT_EQ(LimitSpec::Parse("words:100").amount, 100u);
  EXPECT_EQ(LimitSpec::Parse("bytes:75").kind, LimitKind::kBytes);
  EXPECT_EQ(LimitSpec::Parse("bytes:275").str(), "bytes:275");
  ExpectErrorCode("invalid-limit", [] { LimitSpec::Parse("lines:3"); });
  ExpectErrorCode("invalid-limit", [] { LimitSpec::Parse("words:0"); });
  ExpectErrorCode("invalid-limit", [] { LimitSpec::Parse("words:abc"); });
}

TEST(Limits, TruncationRules) {
  Sentence ninety(90, "w");
  EXPECT_EQ(Truncate(ninety, LimitSpec::Words(100)), ninety);
  EXPECT_EQ(Truncate(ninety, LimitSpec::None()), ninety);
  EXPECT_EQ(Truncate(ninety, LimitSpec::Words(10)).size(), 10u);
  // 8 + 1 + 5 + 1 + 5 = 20 bytes fit; adding " sleeps" (7) makes 27.
  const Sentence s = {"elephant", "walks", "again", "sleeps"};
  EXPECT_EQ(DetokenizedBytes(s), 27u);
  EXPECT_EQ(Truncate(s, LimitSpec::Bytes(20)), (Sentence{"elephant", "walks", "again"}));
  EXPECT_EQ(Truncate(s, LimitSpec::Bytes(26)), (Sentence{"elephant", "walks", "again"}));
  EXPECT_EQ(Truncate(s, LimitSpec::Bytes(27)), s);
  EXPECT_TRUE(Truncate(s, LimitSpec::Bytes(7)).empty());
}

TEST(Limits, SeventyFiveBytePrefix) {
  const Sentence s = Toks("entity3 said on tuesday that the company would cut <num> jobs across its european "
                          "plants by the end of next year .");
  const Sentence t = Truncate(s, LimitSpec::Bytes(75));
  ASSERT_LT(t.size(), s.size());
  EXPECT_LE(DetokenizedBytes(t), 75u);
  Sentence longer(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(t.size() + 1));
  EXPECT_GT(DetokenizedBytes(longer), 75u);
  // Through "its" the prefix is 72 bytes; " european" would make it 81.
  EXPECT_EQ(DetokenizedBytes(t), 72u);
  EXPECT_EQ(t.back(), "its");
}

TEST(Corpus, SystemEqualsReferenceGivesHundred) {
  const std::vector<Summary> sys = {{"a", Toks("the cat sat")}, {"b", Toks("dogs bark loudly")}};
  const std::vector<ReferenceSet> refs = {{"b", {Toks("dogs bark loudly")}}, {"a", {Toks("the cat sat")}}};
  const auto report = EvaluateCorpus(sys, refs, {LimitSpec::None(), LimitSpec::Words(100)});
  ASSERT_EQ(report.rows.size(), 2u);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.documents, 2u);
    EXPECT_DOUBLE_EQ(row.rouge1.recall, 100.0);
    EXPECT_DOUBLE_EQ(row.rouge2.f1, 100.0);
    EXPECT_DOUBLE_EQ(row.rougeL.precision, 100.0);
  }
}

TEST(Corpus, EmptySummariesGiveZero) {
  const auto report = EvaluateCorpus({{"a", {}}}, {{"a", {Toks("x y")}}}, {LimitSpec::None()});
  EXPECT_EQ(report.rows[0].rouge1.recall, 0.0);
  EXPECT_EQ(report.rows[0].rougeL.f1, 0.0);
}

TEST(Corpus, MacroAverageOfThreeDocuments) {
  const std::vector<Summary> sys = {{"1", Toks("the cat sat")}, {"2", Toks("a b")}, {"3", Toks("q")}};
  const std::vector<ReferenceSet> refs = {
      {"1", {Toks("the cat sat on the mat")}}, {"2", {Toks("a b c d")}}, {"3", {Toks("z")}}};
  const auto row = EvaluateCorpus(sys, refs, {LimitSpec::None()}).rows[0];
  EXPECT_NEAR(row.rouge1.recall, 100.0 * (0.5 + 0.5 + 0.0) / 3.0, 1e-12);
  EXPECT_NEAR(row.rouge2.recall, 100.0 * (0.4 + 1.0 / 3.0 + 0.0) / 3.0, 1e-12);
  EXPECT_NEAR(row.rouge1.precision, 100.0 * (1.0 + 1.0 + 0.0) / 3.0, 1e-12);
}

TEST(Corpus, MisalignedIdsSignal) {
  try {
    EvaluateCorpus({{"a", {"x"}}, {"b", {"y"}}}, {{"a", {{"x"}}}, {"c", {{"z"}}}}, {LimitSpec::None()});
    ADD_FAILURE() << "expected alignment-error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "alignment-error");
    EXPECT_NE(std::string(e.what()).find("b"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("c"), std::string::npos);
  }
}

TEST(Corpus, ReportRendersJsonAndTable) {
  const auto report = EvaluateCorpus({{"a", Toks("the cat sat")}}, {{"a", {Toks("the cat sat on the mat")}}},
                                     {LimitSpec::Words(100), LimitSpec::Bytes(75)});
  const auto json = nlohmann::json::parse(report.to_json());
  ASSERT_TRUE(json.is_array());
  ASSERT_EQ(json.size(), 2u);
  EXPECT_EQ(json[0]["limit"], "words:100");
  EXPECT_DOUBLE_EQ(json[0]["rouge1"]["recall"].get<double>(), 50.0);
  const std::string table = report.to_table();
  EXPECT_NE(table.find("words:100"), std::string::npos);
  EXPECT_NE(table.find("50.0"), std::string::npos);
}

}  // namespace
}  // namespace nsum
