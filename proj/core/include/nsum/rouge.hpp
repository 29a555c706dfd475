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

#ifndef NSUM_ROUGE_HPP_
#define NSUM_ROUGE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "nsum/corpus_io.hpp"
#include "nsum/error.hpp"
#include "nsum/text.hpp"

namespace nsum {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

RougeScore ScoreFromCounts(std::size_t overlap, std::size_t candidate_total,
                           std::size_t reference_total);

enum class LimitKind { kNone, kWords, kBytes };

struct LimitSpec {
  LimitKind kind = LimitKind::kNone;
  std::size_t amount = 0;

  static LimitSpec None() { return {}; }
  static LimitSpec Words(std::size_t n) { return {LimitKind::kWords, n}; }
  static LimitSpec Bytes(std::size_t n) { return {LimitKind::kBytes, n}; }
  // "none", "full", "words:N" or "bytes:N"; signals "invalid-limit".
  static LimitSpec Parse(const std::string& text);
  std::string str() const;
  // True when tokens fit within the limit.
  bool fits(const Sentence& tokens) const;
};

// Byte length of the tokens joined by single spaces.
std::size_t DetokenizedBytes(const Sentence& tokens);

Sentence Truncate(const Sentence& tokens, const LimitSpec& limit);

enum class ReferenceAggregation { kMax, kAverage };

// Multiset n-gram counts clipped by the reference. With several references
// kMax keeps the reference giving the best F1 (first on ties), kAverage
// averages precision, recall and F1.
RougeScore RougeN(const Sentence& candidate, const std::vector<Sentence>& references,
                  std::size_t n, ReferenceAggregation agg = ReferenceAggregation::kMax);
RougeScore RougeL(const Sentence& candidate, const std::vector<Sentence>& references,
                  ReferenceAggregation agg = ReferenceAggregation::kMax);

std::size_t LcsLength(const Sentence& a, const Sentence& b);

struct RougeRow {
  LimitSpec limit;
  std::size_t documents = 0;
  RougeScore rouge1, rouge2, rougeL;  // macro averages, x100
};

struct CorpusReport {
  std::vector<RougeRow> rows;

  std::string to_json() const;
  // Aligned table; metric is "recall", "precision" or "f1".
  std::string to_table(const std::string& metric = "recall") const;
};

// Aligns system summaries and reference sets by id; any id missing on
// either side signals "alignment-error" naming the offenders.
CorpusReport EvaluateCorpus(const std::vector<Summary>& system,
                            const std::vector<ReferenceSet>& references,
                            const std::vector<LimitSpec>& limits,
                            ReferenceAggregation agg = ReferenceAggregation::kMax);

}  // namespace nsum

#endif  // NSUM_ROUGE_HPP_
