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

#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "gradient_suite.hpp"
#include "nsum/word_extractor.hpp"
#include "test_util.hpp"

namespace nsum {
namespace {

using testing::ExpectErrorCode;
using testing::ToyDims;
using testing::ToyDocument;

TEST(WordSupport, DocumentWordsThenStopWordsThenEnd) {
  const ToyDocument doc;
  const WordSupport s = BuildWordSupport(doc.sentences, doc.vocab);
  const std::vector<std::string> first = {"entity0", "met", "the", "board", "shares", "fell",
                                          "entity1", "signed", "a", "deal", "with"};
  ASSERT_GT(s.size(), first.size());
  for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(s.tokens[i], first[i]);
  EXPECT_EQ(s.end_index, s.size() - 1);
  EXPECT_EQ(s.tokens.back(), "</s>");
  EXPECT_EQ(s.ids.back(), Vocabulary::kEnd);
  std::set<std::string> distinct(s.tokens.begin(), s.tokens.end());
  EXPECT_EQ(distinct.size(), s.size());
  for (const auto& w : StopWords()) EXPECT_TRUE(s.find(w).has_value()) << w;
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(*s.find(s.tokens[i]), i);
  EXPECT_FALSE(s.find("zebra").has_value());
}

TEST(WordSupport, TargetIndicesEndWithEnd) {
  const ToyDocument doc;
  const WordSupport s = BuildWordSupport(doc.sentences, doc.vocab);
  const auto t = TargetIndices(s, {"entity1", "signed", "the", "deal"});
  EXPECT_EQ(t, (std::vector<std::size_t>{6, 7, 2, 9, s.end_index}));
  EXPECT_EQ(SupportTokens(s, t), (std::vector<std::string>{"entity1", "signed", "the", "deal"}));
  ExpectErrorCode("target-outside-support", [&] { TargetIndices(s, {"zebra"}); });
}

TEST(NoiseWeights, CountsToThePowerWithFloorOne) {
  const ToyDocument doc;
  Vocabulary vocab = doc.vocab;
  vocab.set_count(vocab.id("deal"), 16);
  const WordSupport s = BuildWordSupport(doc.sentences, vocab);
  const auto w = NoiseWeights(s, vocab);
  EXPECT_NEAR(w[*s.find("deal")], 8.0, 1e-12);
  EXPECT_EQ(w[s.end_index], 1.0);
  EXPECT_EQ(w[*s.find("met")], 1.0);
}

TEST(SampleNoise, NeverDrawsTheTargetAndFollowsWeights) {
  const std::vector<double> weights = {1.0, 2.0, 0.0, 4.0, 1.0};
  RngStream rng(3);
  std::vector<std::size_t> hits(weights.size(), 0);
  const std::size_t n = 80000;
  for (std::size_t i : SampleNoise(weights, 4, n, rng)) ++hits[i];
  EXPECT_EQ(hits[4], 0u);
  EXPECT_EQ(hits[2], 0u);
  const double total = 7.0;
  for (std::size_t i : {0, 1, 3})
    EXPECT_NEAR(static_cast<double>(hits[i]) / n, weights[i] / total, 0.01) << i;
  ExpectErrorCode("empty-support", [&] { SampleNoise({0.0, 3.0}, 1, 2, rng); });
}

template <typename T>
struct Model {
  ToyDocument doc;
  WordExtractor<T> model;
  WordSupport support;
  explicit Model(bool feed = false, std::uint64_t seed = 1)
      : model(ToyDims(), doc.vocab.size(), feed), support(BuildWordSupport(doc.sentences, doc.vocab)) {
    RngStream rng(seed);
    model.params().init_uniform(rng, 0.5);
  }
};

TEST(Attention, SentenceWeightsSumToOne) {
  Model<double> m;
  Tape<double> tape;
  RngStream rng(1);
  const auto ctx = m.model.prepare(tape, m.doc.encoded, m.support, false, rng);
  auto state = m.model.initial(tape, ctx);
  for (int step = 0; step < 5; ++step) {
    const auto att = m.model.attend(tape, ctx, state.lstm.h);
    const auto& w = tape.value(att.sentence_weights).data;
    ASSERT_EQ(w.size(), 3u);
    double sum = 0;
    for (double v : w) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(tape.value(att.logits).size(), m.support.size());
    state = m.model.advance(tape, ctx, state, m.support.ids[static_cast<std::size_t>(step)]);
  }
}

TEST(Attention, ZeroScoreVectorIsUniform) {
  Model<double> m;
  for (auto& v : m.model.params().get("att.sent_score").value.data) v = 0;
  Tape<double> tape;
  RngStream rng(2);
  const auto ctx = m.model.prepare(tape, m.doc.encoded, m.support, false, rng);
  const auto att = m.model.attend(tape, ctx, m.model.initial(tape, ctx).lstm.h);
  for (double v : tape.value(att.sentence_weights).data) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Attention, SingleSentenceGetsAllWeight) {
  Model<double> m;
  EncodedDocument one;
  one.sentences = {m.doc.encoded.sentences[2]};
  const WordSupport s = BuildWordSupport({m.doc.sentences[2]}, m.doc.vocab);
  Tape<double> tape;
  RngStream rng(3);
  const auto ctx = m.model.prepare(tape, one, s, false, rng);
  const auto att = m.model.attend(tape, ctx, m.model.initial(tape, ctx).lstm.h);
  EXPECT_EQ(tape.value(att.sentence_weights).data, std::vector<double>{1.0});
}

// Two-level attention on plain vectors.
std::vector<double> ReferenceWordDistribution(const ParameterSet<double>& p, const std::vector<std::vector<double>>& states,
                                              const std::vector<std::vector<double>>& words,
                                              const std::vector<double>& dec_h) {
  auto mv = [](const Tensor<double>& m, const std::vector<double>& x) {
    std::vector<double> y(m.shape[0], 0.0);
    for (std::size_t r = 0; r < m.shape[0]; ++r)
      for (std::size_t c = 0; c < m.shape[1]; ++c) y[r] += m.data[r * m.shape[1] + c] * x[c];
    return y;
  };
  auto score = [](const std::vector<double>& v, const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t k = 0; k < v.size(); ++k) s += v[k] * std::tanh(a[k] + b[k]);
    return s;
  };
  const auto& z = p.get("att.sent_score").value.data;
  const auto& v = p.get("att.word_score").value.data;
  const auto dec = mv(p.get("att.sent_dec").value, dec_h);
  std::vector<double> a;
  for (const auto& h : states) a.push_back(score(z, mv(p.get("att.sent_enc").value, h), dec));
  double amax = *std::max_element(a.begin(), a.end()), az = 0;
  for (double x : a) az += std::exp(x - amax);
  std::vector<double> context(states[0].size(), 0.0);
  for (std::size_t j = 0; j < states.size(); ++j)
    for (std::size_t k = 0; k < context.size(); ++k) context[k] += std::exp(a[j] - amax) / az * states[j][k];
  const auto ctx = mv(p.get("att.word_ctx").value, context);
  std::vector<double> u;
  for (const auto& w : words) u.push_back(score(v, mv(p.get("att.word_emb").value, w), ctx));
  double umax = *std::max_element(u.begin(), u.end()), uz = 0;
  for (double x : u) uz += std::exp(x - umax);
  for (double& x : u) x = std::exp(x - umax) / uz;
  return u;
}

TEST(Attention, WordDistributionMatchesReferenceLoop) {
  ToyDocument doc;
  doc.sentences = {{"entity0", "met", "the"}, {"board", "signed", "deal"}};
  doc.encoded.sentences.clear();
  for (const auto& s : doc.sentences) doc.encoded.sentences.push_back(doc.vocab.encode(s));
  WordExtractor<double> model(ToyDims(), doc.vocab.size());
  RngStream rng(4);
  model.params().init_uniform(rng, 0.5);
  const WordSupport support = BuildWordSupport(doc.sentences, doc.vocab);
  Tape<double> tape;
  const auto ctx = model.prepare(tape, doc.encoded, support, false, rng);
  const auto state = model.initial(tape, ctx);
  const auto att = model.attend(tape, ctx, state.lstm.h);
  std::vector<std::vector<double>> states, words;
  for (const Var h : ctx.encoding.states) states.push_back(tape.value(h).data);
  const auto& emb = model.params().get("embedding").value;
  for (int id : support.ids) {
    std::vector<double> w(ToyDims().word_dim);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = id == Vocabulary::kPad ? 0.0 : emb.data[static_cast<std::size_t>(id) * w.size() + k];
    words.push_back(w);
  }
  const auto ref = ReferenceWordDistribution(model.params(), states, words, tape.value(state.lstm.h).data);
  const auto& logits = tape.value(att.logits).data;
  double m = *std::max_element(logits.begin(), logits.end()), z = 0;
  for (double u : logits) z += std::exp(u - m);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(std::exp(logits[i] - m) / z, ref[i], 1e-6);
}

TEST(WordLoss, FullSoftmaxFallbackEqualsSummedCrossEntropy) {
  Model<double> m;
  const auto targets = TargetIndices(m.support, m.doc.target);
  const auto weights = NoiseWeights(m.support, m.doc.vocab);
  Tape<double> tape;
  RngStream rng(5);
  const auto ctx = m.model.prepare(tape, m.doc.encoded, m.support, false, rng);
  const auto loss = m.model.loss(tape, ctx, m.support, targets, weights, m.support.size(), rng);
  EXPECT_EQ(loss.fallbacks, targets.size());

  WordDecoder<double> decoder(m.model, m.doc.encoded, m.support);
  auto state = decoder.initial();
  double expect = 0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    expect -= decoder.log_probs(state)[targets[t]];
    state = decoder.advance(state, targets[t]);
  }
  EXPECT_NEAR(tape.value(loss.value)[0], expect, 1e-10);
}

TEST(WordLoss, NegativeSamplingUsesNoFallback) {
  Model<double> m;
  const auto targets = TargetIndices(m.support, m.doc.target);
  const auto weights = NoiseWeights(m.support, m.doc.vocab);
  Tape<double> tape;
  RngStream rng(6);
  const auto ctx = m.model.prepare(tape, m.doc.encoded, m.support, false, rng);
  const auto loss = m.model.loss(tape, ctx, m.support, targets, weights, 5, rng);
  EXPECT_EQ(loss.fallbacks, 0u);
  EXPECT_GT(tape.value(loss.value)[0], 0.0);
  ExpectErrorCode("shape-error", [&] { m.model.loss(tape, ctx, m.support, {}, weights, 5, rng); });
}

TEST(WordDecoder, LogProbsNormalizeAndGreedyStaysInSupport) {
  for (const bool feed : {false, true}) {
    Model<float> m(feed);
    WordDecoder<float> decoder(m.model, m.doc.encoded, m.support);
    auto state = decoder.initial();
    for (int step = 0; step < 4; ++step) {
      const auto lp = decoder.log_probs(state);
      ASSERT_EQ(lp.size(), m.support.size());
      double mass = 0;
      for (double v : lp) mass += std::exp(v);
      EXPECT_NEAR(mass, 1.0, 1e-6);
      double wsum = 0;
      for (double v : decoder.last_sentence_weights()) wsum += v;
      EXPECT_NEAR(wsum, 1.0, 1e-6);
      state = decoder.advance(state, static_cast<std::size_t>(step));
    }
    const auto greedy = GreedyDecode(decoder, decoder.end_token(), 10);
    for (std::size_t tok : greedy.tokens) EXPECT_LT(tok, m.support.size());
  }
}

TEST(WordDecoder, FeedAttentionChangesTheDistribution) {
  Model<double> plain(false, 8), fed(true, 8);
  WordDecoder<double> a(plain.model, plain.doc.encoded, plain.support);
  WordDecoder<double> b(fed.model, fed.doc.encoded, fed.support);
  EXPECT_EQ(plain.model.params().num_scalars() < fed.model.params().num_scalars(), true);
  const auto sa = a.advance(a.initial(), 0);
  const auto sb = b.advance(b.initial(), 0);
  EXPECT_NE(a.log_probs(sa), b.log_probs(sb));
}

}  // namespace
}  // namespace nsum
