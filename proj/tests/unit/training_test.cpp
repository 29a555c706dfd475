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

#include "nsum/checkpoint.hpp"
#include "nsum/training.hpp"
#include "small_corpus.hpp"
#include "test_util.hpp"

namespace nsum {
namespace {

using testing::ExpectErrorCode;

std::vector<std::vector<float>> Values(const ParameterSet<float>& params) {
  std::vector<std::vector<float>> out;
  for (std::size_t i = 0; i < params.size(); ++i) out.push_back(params[i].value.data);
  return out;
}

RunConfig NoisyConfig(std::size_t epochs) {
  RunConfig c = testing::TinyConfig();
  c.dims.dropout = 0.3;
  c.epochs = epochs;
  c.batch_size = 3;
  return c;
}

TEST(SentenceTrainer, SameSeedSameRun) {
  const auto docs = testing::PreparedFixture(8, 2);
  const Vocabulary vocab = BuildVocab(docs, 1);
  SentenceTrainer a(NoisyConfig(3), vocab, docs), b(NoisyConfig(3), vocab, docs);
  for (int e = 0; e < 3; ++e) {
    a.run_epoch();
    b.run_epoch();
  }
  EXPECT_EQ(a.loss_history(), b.loss_history());
  EXPECT_EQ(Values(a.model().params()), Values(b.model().params()));
  RunConfig other = NoisyConfig(3);
  other.seed = 6;
  SentenceTrainer c(other, vocab, docs);
  c.run_epoch();
  EXPECT_NE(c.loss_history()[0], a.loss_history()[0]);
}

TEST(SentenceTrainer, ResumeMatchesUninterruptedRun) {
  const auto docs = testing::PreparedFixture(8, 2);
  const Vocabulary vocab = BuildVocab(docs, 1);
  SentenceTrainer straight(NoisyConfig(4), vocab, docs);
  for (int e = 0; e < 4; ++e) straight.run_epoch();

  SentenceTrainer first(NoisyConfig(4), vocab, docs);
  first.run_epoch();
  first.run_epoch();
  SentenceTrainer resumed(DeserializeCheckpoint(SerializeCheckpoint(first.checkpoint())), docs);
  EXPECT_EQ(resumed.epoch(), 2u);
  resumed.run_epoch();
  resumed.run_epoch();
  EXPECT_EQ(resumed.loss_history(), straight.loss_history());
  EXPECT_EQ(Values(resumed.model().params()), Values(straight.model().params()));
}

TEST(SentenceTrainer, LossDecreases) {
  const auto docs = testing::PreparedFixture(8, 4);
  RunConfig c = testing::TinyConfig();
  c.epochs = 40;
  c.teacher_forcing = true;  // same inputs every epoch, so losses are comparable
  SentenceTrainer t(c, BuildVocab(docs, 1), docs);
  t.set_evaluate_each_epoch(false);
  for (std::size_t e = 0; e < c.epochs; ++e) t.run_epoch();
  const auto& h = t.loss_history();
  EXPECT_LT(h.back(), 0.8 * h.front());
  for (double l : h) EXPECT_TRUE(std::isfinite(l));
}

TEST(SentenceTrainer, RejectsUnlabeledOrEmptyCorpora) {
  auto docs = testing::PreparedFixture(3, 2);
  const Vocabulary vocab = BuildVocab(docs, 1);
  ExpectErrorCode("no-training-data", [&] { SentenceTrainer(testing::TinyConfig(), vocab, {}); });
  docs[1].labels.reset();
  ExpectErrorCode("missing-labels", [&] { SentenceTrainer(testing::TinyConfig(), vocab, docs); });
}

TEST(SentenceScores, CoverEverySentenceUnderTruncation) {
  const auto docs = testing::PreparedFixture(4, 2);
  SentenceTrainer t(testing::TinyConfig(), BuildVocab(docs, 1), docs);
  t.run_epoch();
  const BatchLimits limits{3, 50};
  for (const auto& d : docs) {
    const auto p = SentenceScores(t.model(), t.vocab(), d, limits);
    ASSERT_EQ(p.size(), d.sentences.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i < 3) {
        EXPECT_GT(p[i], 0.0);
        EXPECT_LT(p[i], 1.0);
      } else {
        EXPECT_EQ(p[i], 0.0);
      }
    }
  }
  EXPECT_TRUE(SentenceScores(t.model(), t.vocab(), Document{}, limits).empty());
}

TEST(TruncateSentences, KeepsLeadingSentencesAndWords) {
  const std::vector<Sentence> s = {{"a", "b", "c"}, {"d"}, {"e", "f"}};
  EXPECT_EQ(TruncateSentences(s, {2, 2}), (std::vector<Sentence>{{"a", "b"}, {"d"}}));
  EXPECT_EQ(TruncateSentences(s, {30, 50}), s);
}

RunConfig WordConfig(std::size_t epochs) {
  RunConfig c = testing::TinyConfig();
  c.epochs = epochs;
  c.dims.dropout = 0.2;
  c.noise_samples = 5;
  c.batch_size = 2;
  return c;
}

TEST(WordTrainer, ResumeMatchesUninterruptedRun) {
  const auto docs = testing::PreparedFixture(6, 8);
  const Vocabulary vocab = BuildVocab(docs, 1);
  const auto examples = testing::WordExamples(docs, vocab);
  ASSERT_GE(examples.size(), 3u);
  WordTrainer straight(WordConfig(3), vocab, examples);
  for (int e = 0; e < 3; ++e) straight.run_epoch();
  WordTrainer first(WordConfig(3), vocab, examples);
  first.run_epoch();
  WordTrainer resumed(DeserializeCheckpoint(SerializeCheckpoint(first.checkpoint())), examples);
  resumed.run_epoch();
  resumed.run_epoch();
  EXPECT_EQ(resumed.loss_history(), straight.loss_history());
  EXPECT_EQ(Values(resumed.model().params()), Values(straight.model().params()));
}

TEST(WordTrainer, SkipsTargetsLostToTruncation) {
  const auto docs = testing::PreparedFixture(6, 8);
  const Vocabulary vocab = BuildVocab(docs, 1);
  auto examples = testing::WordExamples(docs, vocab);
  WordExtractionExample late = examples[0];
  late.sentences = {{"the", "report"}, {"the", "market"}, {"shares", "fell"}};
  late.target = {"shares", "fell"};
  RunConfig c = WordConfig(1);
  c.limits.max_sentences = 2;
  c.limits.max_words = 60;
  const std::size_t before = WordTrainer(c, vocab, examples).skipped();
  examples.push_back(late);
  EXPECT_EQ(WordTrainer(c, vocab, examples).skipped(), before + 1);
  ExpectErrorCode("no-training-data", [&] { WordTrainer(c, vocab, {late}); });
}

TEST(WordTrainer, FirstUpdateLowersTheLoss) {
  const auto docs = testing::PreparedFixture(1, 21);
  const Vocabulary vocab = BuildVocab(docs, 1);
  RunConfig c = WordConfig(2);
  c.dims.dropout = 0.0;
  c.noise_samples = 100000;
  c.permute_entities = false;
  WordTrainer t(c, vocab, testing::WordExamples(docs, vocab));
  t.run_epoch();
  t.run_epoch();
  EXPECT_LT(t.loss_history()[1], t.loss_history()[0]);
}

// Single-example overfitting sits on a saddle for most documents at the
// default init range; this document and init range escape it.
TEST(WordTrainer, MemorizesASingleExample) {
  const auto docs = testing::PreparedFixture(1, 21);
  const Vocabulary vocab = BuildVocab(docs, 1);
  const auto examples = testing::WordExamples(docs, vocab);
  ASSERT_EQ(examples.size(), 1u);
  RunConfig c = testing::TinyConfig();
  c.dims.word_dim = 64;
  c.dims.sentence_dim = 64;
  c.dims.hidden_dim = 64;
  c.dims.attention_dim = 64;
  c.dims.init_range = 0.15;
  c.feed_attention = true;
  c.noise_samples = 100000;  // above the support size: exact softmax
  c.permute_entities = false;
  c.adam.lr = 0.003;
  c.seed = 1;
  c.epochs = 600;
  c.batch_size = 1;
  WordTrainer t(c, vocab, examples);
  std::vector<std::string> out;
  for (std::size_t e = 0; e < c.epochs && out != examples[0].target; ++e) {
    t.run_epoch();
    out = GreedyWords(t.model(), vocab, examples[0].sentences, c.max_len, c.limits);
  }
  EXPECT_EQ(out, examples[0].target);
}

}  // namespace
}  // namespace nsum
