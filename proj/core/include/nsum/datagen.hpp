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

#ifndef NSUM_DATAGEN_HPP_
#define NSUM_DATAGEN_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nsum/rng.hpp"
#include "nsum/text.hpp"

namespace nsum {

// ---------------------------------------------------------------------------
// Sentence labeling

struct SentenceFeatures {
  std::size_t position = 0;
  double unigram_overlap = 0.0;  // highlight-side recall vs. the best-matching highlight
  double bigram_overlap = 0.0;
  std::size_t entity_overlap_count = 0;
  std::size_t sentence_length = 0;
};

// Distinct n-grams (joined with a single space).
std::vector<std::string> NgramSet(const Sentence& tokens, std::size_t n);

// The best-matching highlight maximizes (unigram, bigram) overlap
// lexicographically, which makes the result independent of highlight
// order. Entity overlap counts distinct markers shared with any highlight.
SentenceFeatures ScoreSentence(const Sentence& sentence, const std::vector<Sentence>& highlights,
                               std::size_t position);

struct LabelRuleWeights {
  double position = 0.0;
  double unigram = 1.0;
  double bigram = 1.0;
  double entity = 0.0;
  double length = 0.0;
  double bias = 0.0;
  double threshold = 1.0;

  double score(const SentenceFeatures& f) const {
    return bias + position * static_cast<double>(f.position) + unigram * f.unigram_overlap +
           bigram * f.bigram_overlap + entity * static_cast<double>(f.entity_overlap_count) +
           length * static_cast<double>(f.sentence_length);
  }
};

struct LabelingResult {
  std::vector<int> labels;
  double positive_rate = 0.0;
};

LabelingResult LabelDocument(const Document& doc, const std::vector<Sentence>& highlights,
                             const LabelRuleWeights& weights);

struct RuleTuningResult {
  LabelRuleWeights weights;
  double accuracy = 0.0;
  std::size_t sentences = 0;
};

// The weight grid searched by TuneRuleWeights (bias is fixed at zero).
struct RuleGrid {
  std::vector<double> position = {-0.1, -0.05, -0.02, 0.0};
  std::vector<double> unigram = {0.0, 0.5, 1.0, 2.0};
  std::vector<double> bigram = {0.0, 0.5, 1.0, 2.0};
  std::vector<double> entity = {0.0, 0.1, 0.25, 0.5};
  std::vector<double> length = {-0.02, 0.0, 0.02};
};

// Grid search over weights with a full threshold sweep per grid point,
// maximizing sentence-level accuracy on documents with gold labels and
// highlights. Ties prefer the smaller L1 weight norm, then the earlier
// grid point, then the lower threshold. Signals "degenerate-labels" when
// all gold labels agree.
RuleTuningResult TuneRuleWeights(const std::vector<Document>& labeled, const RuleGrid& grid = {});

double LabelAccuracy(const std::vector<Document>& labeled, const LabelRuleWeights& weights);

// ---------------------------------------------------------------------------
// Word extraction examples

struct Substitution {
  std::string original;
  std::string replacement;
  double cosine = 1.0;
  std::string kind;  // "stem" or "neighbor"
};

struct WordExtractionExample {
  std::string id;
  std::vector<Sentence> sentences;
  std::vector<std::string> document_tokens;  // flattened sentences
  std::vector<std::string> target;           // document tokens and stop-words only
  std::vector<Substitution> substitutions;
};

struct WordExampleOutcome {
  std::optional<WordExtractionExample> example;
  std::string rejected_token;  // set on rejection
};

// Highlight tokens that are neither document tokens nor stop-words are first matched by stem,
// then by the k nearest embedding neighbours (cosine >= tau) that occur in
// the document; any remaining unmatched token rejects the pair.
WordExampleOutcome BuildWordExtractionExample(const Document& doc,
                                              const std::vector<Sentence>& highlights,
                                              const EmbeddingTable& embeddings,
                                              const Vocabulary& vocab, std::size_t k = 10,
                                              double tau = 0.6);

double Cosine(const float* a, const float* b, std::size_t dim);

// ---------------------------------------------------------------------------
// Synthetic fixture corpus

struct FixtureParams {
  std::size_t n_docs = 32;
  std::size_t min_sentences = 6;
  std::size_t max_sentences = 12;
  double positive_rate = 0.3;
  // Probability that a highlight token is replaced by a synonym, and that
  // a non-summary sentence reuses the subject of a summary sentence.
  double paraphrase_rate = 0.0;
  double distractor_rate = 0.0;
  std::string id_prefix = "fx";
};

// Template-grammar news-like documents. Summary-worthy sentences report
// events with a dedicated lexicon; the rest are background filler with the
// same length and entity statistics. Every document gets at least one
// positive sentence, gold labels, and one highlight per positive sentence
// (a compressed, verbatim-extractable version of it unless paraphrased).
// Tokens are case-preserving so the entity anonymizer can run.
std::vector<Document> GenerateFixtureCorpus(RngStream& rng, const FixtureParams& params);

}  // namespace nsum

#endif  // NSUM_DATAGEN_HPP_
