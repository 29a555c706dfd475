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

#ifndef NSUM_RERANK_HPP_
#define NSUM_RERANK_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "nsum/error.hpp"
#include "nsum/text.hpp"

namespace nsum {

// Document-overlap counts of candidate 1-, 2- and 3-grams, then length.
inline constexpr std::size_t kRerankFeatures = 4;
using RerankFeatureVector = std::array<double, kRerankFeatures>;

RerankFeatureVector RerankFeatures(const Sentence& candidate, const std::vector<Sentence>& document);

struct RerankerWeights {
  RerankFeatureVector lambda{};
};

struct NBestCandidate {
  Sentence tokens;
  double logprob = 0.0;  // model score (length-normalized log-probability)
  RerankFeatureVector features{};
};

// Index of the candidate maximizing logprob + lambda . features; ties go to
// the higher model score, then the earlier candidate.
std::size_t Rerank(const std::vector<NBestCandidate>& candidates, const RerankerWeights& weights);

struct RerankExample {
  std::string id;
  std::vector<NBestCandidate> candidates;
  std::vector<Sentence> references;
};

struct RerankTuning {
  RerankerWeights weights;
  double objective = 0.0;  // mean ROUGE-2 F of the reranked choices
  double baseline = 0.0;   // same with all weights zero
  std::size_t passes = 0;
};

// Coordinate ascent over a fixed grid of weight values, one feature at a
// time in feature order, accepting only strict gains in mean ROUGE-2 F.
// Among equally good values the smaller magnitude wins. Stops after a pass
// without improvement. Signals "no-validation-data" on empty input.
RerankTuning TuneRerankWeights(const std::vector<RerankExample>& validation,
                               const std::vector<double>& grid = {0.0, 0.1, -0.1, 0.25, -0.25,
                                                                  0.5, -0.5, 1.0, -1.0, 2.0,
                                                                  -2.0, 4.0, -4.0, 8.0, -8.0},
                               std::size_t max_passes = 20);

// One JSON object per candidate: {doc_id, rank, tokens, logprob, features}.
std::string NBestToJsonl(const std::string& doc_id, const std::vector<NBestCandidate>& candidates);
// Groups n-best lines by doc_id in first-appearance order, sorted by rank.
std::vector<std::pair<std::string, std::vector<NBestCandidate>>> ParseNBestJsonl(
    const std::vector<std::string>& lines);

std::string WeightsToJson(const RerankerWeights& weights);
RerankerWeights WeightsFromJson(const std::string& text);

}  // namespace nsum

#endif  // NSUM_RERANK_HPP_
