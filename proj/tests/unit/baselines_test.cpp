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

#include <gtest/gtest.h>

#include "nsum/baselines.hpp"
#include "test_util.hpp"

namespace nsum {
namespace {

using testing::ExpectErrorCode;

TEST(Lead3, TakesThePrefix) {
  const std::vector<Sentence> doc = {{"a", "b"}, {"c"}, {"d", "e"}, {"f"}};
  EXPECT_EQ(Lead3(doc), (Sentence{"a", "b", "c", "d", "e"}));
  EXPECT_EQ(Lead3({{"a"}, {"b"}}), (Sentence{"a", "b"}));
  EXPECT_TRUE(Lead3({}).empty());
}

TEST(Lead3, LimitMatchesTruncate) {
  std::vector<Sentence> doc;
  for (int s = 0; s < 5; ++s) doc.push_back(Sentence(45, "word" + std::to_string(s)));
  for (const auto& limit : {LimitSpec::Words(100), LimitSpec::Bytes(75), LimitSpec::Bytes(275)}) {
    const Sentence out = Lead3(doc, limit);
    EXPECT_TRUE(limit.fits(out));
    Sentence full = Lead3(doc);
    EXPECT_EQ(out, Truncate(full, limit));
    EXPECT_TRUE(std::equal(out.begin(), out.end(), full.begin()));
  }
  EXPECT_EQ(Lead3(doc, LimitSpec::Words(100)).size(), 100u);
}

struct EmbeddedVocab {
  Vocabulary vocab{4};
  EmbeddingTable table;
  EmbeddedVocab() {
    const std::vector<std::pair<std::string, std::vector<float>>> rows = {
        {"x", {1, 0}}, {"y", {0, 1}}, {"z", {1, 1}}, {"w", {-1, 0}}};
    for (const auto& [w, v] : rows) vocab.add(w, 1);
    table.dim = 2;
    table.values.assign(vocab.size() * 2, 0.0f);
    table.pretrained.assign(vocab.size(), true);
    for (const auto& [w, v] : rows) std::copy(v.begin(), v.end(), table.row(static_cast<std::size_t>(vocab.id(w))));
  }
};

TEST(LregFeatures, ThreeSentenceHandComputed) {
  const EmbeddedVocab ev;
  // Sentence means: s0 = (1, 0), s1 = (0, 1), s2 = (0.5, 0.5) via "x y".
  const std::vector<Sentence> doc = {{"x", "entity0"}, {"y"}, {"x", "y", "unknown"}};
  const auto f = LregFeatures(doc, ev.table, ev.vocab);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0][0], 2.0);
  EXPECT_EQ(f[2][0], 3.0);
  EXPECT_EQ(f[0][1], 0.0);
  EXPECT_EQ(f[2][1], 2.0);
  EXPECT_EQ(f[0][2], 1.0);
  EXPECT_EQ(f[1][2], 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  // Raw cohesion: s0 -> 0 + r, s1 -> 0 + r, s2 -> 2r; max 2r.
  EXPECT_NEAR(f[0][3], 0.5, 1e-12);
  EXPECT_NEAR(f[1][3], 0.5, 1e-12);
  EXPECT_NEAR(f[2][3], 1.0, 1e-12);
  // Document mean over in-vocabulary tokens x, y, x, y = (0.5, 0.5).
  EXPECT_NEAR(f[0][4], r, 1e-6);
  EXPECT_NEAR(f[1][4], r, 1e-6);
  EXPECT_NEAR(f[2][4], 1.0, 1e-6);
}

TEST(LregFeatures, IdenticalSentencesShareCohesion) {
  const EmbeddedVocab ev;
  const auto f = LregFeatures({{"x", "z"}, {"x", "z"}, {"x", "z"}, {"x", "z"}}, ev.table, ev.vocab);
  for (const auto& row : f) EXPECT_DOUBLE_EQ(row[3], f[0][3]);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(f[i][1], static_cast<double>(i));
}

TEST(LregFeatures, SingleSentenceHasZeroCohesion) {
  const EmbeddedVocab ev;
  EXPECT_EQ(LregFeatures({{"x", "y"}}, ev.table, ev.vocab)[0][3], 0.0);
}

LabeledFeatures Separable() {
  LabeledFeatures d;
  for (int i = 0; i < 20; ++i) {
    const double x = i - 9.5;
    d.sentences.push_back({x, static_cast<double>(i % 3), 0, 0.1 * (i % 2), 0});
    d.labels.push_back(x > 0 ? 1 : 0);
  }
  return d;
}

double Accuracy(const LregModel& m, const LabeledFeatures& d) {
  const auto y = m.predict(d.sentences);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += y[i] == d.labels[i];
  return static_cast<double>(ok) / static_cast<double>(y.size());
}

TEST(Lreg, SeparableDataIsFit) {
  const auto d = Separable();
  const auto m = TrainLreg({d});
  EXPECT_EQ(Accuracy(m, d), 1.0);
  EXPECT_GT(m.weights[0], 0.0);
}

TEST(Lreg, ZeroModelPredictsOneHalf) {
  const LregModel m;
  for (double p : m.predict_proba(Separable().sentences)) EXPECT_EQ(p, 0.5);
}

TEST(Lreg, DuplicatingTheDataGivesTheSameModel) {
  const auto d = Separable();
  const auto once = TrainLreg({d});
  const auto twice = TrainLreg({d, d});
  for (std::size_t k = 0; k < kLregFeatures; ++k) EXPECT_NEAR(once.weights[k], twice.weights[k], 1e-9);
  EXPECT_EQ(once.predict(d.sentences), twice.predict(d.sentences));
}

TEST(Lreg, DegenerateAndEmptyDataSignal) {
  LabeledFeatures d = Separable();
  for (auto& y : d.labels) y = 1;
  ExpectErrorCode("degenerate-labels", [&] { TrainLreg({d}); });
  ExpectErrorCode("missing-labels", [] { TrainLreg({}); });
}

TEST(Lreg, MatchesIndependentGradientDescent) {
  // Same objective solved with a plain loop on the raw standardized data.
  const auto d = Separable();
  LregOptions opt;
  opt.max_epochs = 50;
  opt.tolerance = 0.0;
  const auto m = TrainLreg({d}, opt);
  const std::size_t n = d.sentences.size();
  std::array<double, 5> mu{}, sd{}, w{};
  double b = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    for (const auto& x : d.sentences) mu[k] += x[k] / n;
    for (const auto& x : d.sentences) sd[k] += (x[k] - mu[k]) * (x[k] - mu[k]) / n;
    sd[k] = std::sqrt(sd[k]) > 1e-12 ? std::sqrt(sd[k]) : 1.0;
  }
  for (int epoch = 0; epoch < 50; ++epoch) {
    std::array<double, 5> gw{};
    double gb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = b;
      for (std::size_t k = 0; k < 5; ++k) s += w[k] * (d.sentences[i][k] - mu[k]) / sd[k];
      const double r = 1.0 / (1.0 + std::exp(-s)) - d.labels[i];
      for (std::size_t k = 0; k < 5; ++k) gw[k] += r * (d.sentences[i][k] - mu[k]) / sd[k];
      gb += r;
    }
    for (std::size_t k = 0; k < 5; ++k) w[k] -= 0.5 * gw[k] / n;
    b -= 0.5 * gb / n;
  }
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(m.weights[k], w[k], 1e-10);
  EXPECT_NEAR(m.bias, b, 1e-10);
}

TEST(Lreg, ThresholdTuningMaximizesAccuracy) {
  LregModel m;
  m.weights = {1, 0, 0, 0, 0};
  LabeledFeatures v;
  v.sentences = {{-2, 0, 0, 0, 0}, {-1, 0, 0, 0, 0}, {0.5, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {2, 0, 0, 0, 0}};
  v.labels = {0, 0, 0, 1, 1};
  const double t = TuneLregThreshold(m, {v});
  m.threshold = t;
  EXPECT_EQ(m.predict(v.sentences), v.labels);
  EXPECT_GT(t, m.probability(v.sentences[2]));
  ExpectErrorCode("no-validation-data", [&] { TuneLregThreshold(m, {}); });
}

}  // namespace
}  // namespace nsum
