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

#ifndef NSUM_BASELINES_HPP_
#define NSUM_BASELINES_HPP_

#include <array>
#include <cstddef>
#include <vector>

#include "nsum/rouge.hpp"
#include "nsum/text.hpp"

namespace nsum {

// The first three sentences, truncated to the limit.
Sentence Lead3(const std::vector<Sentence>& sentences, const LimitSpec& limit = LimitSpec::None());

// length, position, entity count, cohesion, relevance.
inline constexpr std::size_t kLregFeatures = 5;
using LregFeatureVector = std::array<double, kLregFeatures>;

// Sentence embeddings are mean word embeddings over in-vocabulary tokens.
// Cohesion sums cosines to every other sentence; relevance is the cosine to
// the whole-document mean. Both are divided by their largest magnitude in
// the document. A single sentence has cohesion 0.
std::vector<LregFeatureVector> LregFeatures(const std::vector<Sentence>& sentences,
                                            const EmbeddingTable& embeddings,
                                            const Vocabulary& vocab);

struct LregModel {
  LregFeatureVector weights{};
  double bias = 0.0;
  LregFeatureVector mean{};
  LregFeatureVector stddev{1.0, 1.0, 1.0, 1.0, 1.0};
  double threshold = 0.5;

  double probability(const LregFeatureVector& x) const;
  std::vector<double> predict_proba(const std::vector<LregFeatureVector>& doc) const;
  std::vector<int> predict(const std::vector<LregFeatureVector>& doc) const;
};

struct LregOptions {
  double learning_rate = 0.5;
  std::size_t max_epochs = 5000;
  double tolerance = 1e-6;  // stop when the mean loss changes less than this
  double l2 = 0.0;
};

struct LabeledFeatures {
  std::vector<LregFeatureVector> sentences;
  std::vector<int> labels;
};

// Full-batch gradient descent on standardized features. Signals
// "degenerate-labels" when every label agrees and "missing-labels" when
// the data is empty.
LregModel TrainLreg(const std::vector<LabeledFeatures>& data, const LregOptions& options = {});

// Decision threshold maximizing label accuracy on validation data (ties go
// to the threshold closest to 0.5).
double TuneLregThreshold(const LregModel& model, const std::vector<LabeledFeatures>& validation);

}  // namespace nsum

#endif  // NSUM_BASELINES_HPP_
