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

#ifndef NSUM_TRAINING_HPP_
#define NSUM_TRAINING_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "nsum/checkpoint.hpp"
#include "nsum/config.hpp"
#include "nsum/datagen.hpp"
#include "nsum/rerank.hpp"
#include "nsum/sentence_extractor.hpp"
#include "nsum/word_extractor.hpp"

namespace nsum {

inline constexpr const char* kSentenceModelKind = "sentence-extractor";
inline constexpr const char* kWordModelKind = "word-extractor";

struct EpochLog {
  std::size_t epoch = 0;  // 1-based count of completed epochs
  double loss = 0.0;      // mean per-document training loss
  double accuracy = -1.0; // evaluation-mode label accuracy (sentence model)
  double gold_rate = 1.0; // curriculum probability used this epoch
  std::size_t fallbacks = 0;
};

// Copies every tensor (names, shapes and values).
ParameterSet<float> CloneParameters(const ParameterSet<float>& params);

// Random init in +-init_range with the PAD embedding row zeroed; rows of a
// pretrained table with matching width replace the non-reserved rows.
void InitializeParameters(ParameterSet<float>& params, const RunConfig& config,
                          const Vocabulary& vocab, RngStream& rng,
                          const EmbeddingTable* pretrained = nullptr);

class SentenceTrainer {
 public:
  // Documents must be anonymized, lowercased and labeled.
  SentenceTrainer(const RunConfig& config, Vocabulary vocab, std::vector<Document> corpus,
                  const EmbeddingTable* pretrained = nullptr);
  SentenceTrainer(Checkpoint checkpoint, std::vector<Document> corpus);

  EpochLog run_epoch();
  std::size_t epoch() const { return epoch_; }
  const std::vector<double>& loss_history() const { return loss_history_; }
  Checkpoint checkpoint() const;

  SentenceExtractor<float>& model() { return *model_; }
  const Vocabulary& vocab() const { return vocab_; }
  const RunConfig& config() const { return config_; }
  void set_evaluate_each_epoch(bool on) { evaluate_each_epoch_ = on; }

 private:
  void check_corpus() const;

  RunConfig config_;
  Vocabulary vocab_;
  std::vector<Document> corpus_;
  RngStream rng_;
  std::unique_ptr<SentenceExtractor<float>> model_;
  AdamState<float> adam_;
  std::size_t epoch_ = 0;
  std::vector<double> loss_history_;
  bool evaluate_each_epoch_ = true;
};

class WordTrainer {
 public:
  WordTrainer(const RunConfig& config, Vocabulary vocab, std::vector<WordExtractionExample> examples,
              const EmbeddingTable* pretrained = nullptr);
  WordTrainer(Checkpoint checkpoint, std::vector<WordExtractionExample> examples);

  EpochLog run_epoch();
  std::size_t epoch() const { return epoch_; }
  const std::vector<double>& loss_history() const { return loss_history_; }
  Checkpoint checkpoint() const;
  // Examples dropped because truncation removed part of their target.
  std::size_t skipped() const { return skipped_; }

  WordExtractor<float>& model() { return *model_; }
  const Vocabulary& vocab() const { return vocab_; }
  const RunConfig& config() const { return config_; }

 private:
  void filter_examples();

  RunConfig config_;
  Vocabulary vocab_;
  std::vector<WordExtractionExample> examples_;
  RngStream rng_;
  std::unique_ptr<WordExtractor<float>> model_;
  AdamState<float> adam_;
  std::size_t epoch_ = 0;
  std::vector<double> loss_history_;
  std::size_t skipped_ = 0;
};

// Sentences cut to the configured limits.
std::vector<Sentence> TruncateSentences(const std::vector<Sentence>& sentences, const BatchLimits& limits);

// Evaluation-mode probability per document sentence; sentences beyond the
// truncation limit get probability 0.
std::vector<double> SentenceScores(const SentenceExtractor<float>& model, const Vocabulary& vocab,
                                   const Document& doc, const BatchLimits& limits);

// Evaluation-mode label accuracy at threshold 0.5 over labeled documents.
double ModelLabelAccuracy(const SentenceExtractor<float>& model, const Vocabulary& vocab,
                          const std::vector<Document>& docs, const BatchLimits& limits);

struct WordDecodeResult {
  std::vector<NBestCandidate> candidates;  // best first
  std::vector<std::string> greedy;
};

// Beam (and greedy) decoding of one document with n-best features filled.
WordDecodeResult DecodeWords(const WordExtractor<float>& model, const Vocabulary& vocab,
                             const std::vector<Sentence>& sentences, const BeamOptions& beam,
                             const BatchLimits& limits);

std::vector<std::string> GreedyWords(const WordExtractor<float>& model, const Vocabulary& vocab,
                                     const std::vector<Sentence>& sentences, std::size_t max_len,
                                     const BatchLimits& limits);

std::unique_ptr<SentenceExtractor<float>> LoadSentenceModel(const Checkpoint& ckpt);
std::unique_ptr<WordExtractor<float>> LoadWordModel(const Checkpoint& ckpt);

}  // namespace nsum

#endif  // NSUM_TRAINING_HPP_
