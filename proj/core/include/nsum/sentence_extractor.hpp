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

#ifndef NSUM_SENTENCE_EXTRACTOR_HPP_
#define NSUM_SENTENCE_EXTRACTOR_HPP_

#include <cstddef>
#include <vector>

#include "nsum/encoder.hpp"
#include "nsum/rouge.hpp"

namespace nsum {

// Probability of feeding the gold label as the previous-step gate.
// Decays linearly from 1 to 0 over decay_fraction * total_epochs, then
// stays at 0. teacher_forcing pins it at 1.
struct CurriculumSchedule {
  std::size_t total_epochs = 1;
  double decay_fraction = 0.5;
  bool teacher_forcing = false;

  double operator()(std::size_t epoch) const;
};

// Sequence labeler over a read document: an extractor LSTM whose input is
// the previous sentence vector scaled by the previous label probability,
// followed by a one-hidden-layer MLP on [extractor state; encoder state].
template <typename T>
class SentenceExtractor {
 public:
  SentenceExtractor(const ModelDims& dims, std::size_t vocab_size);
  SentenceExtractor(const SentenceExtractor&) = delete;
  SentenceExtractor& operator=(const SentenceExtractor&) = delete;

  ParameterSet<T>& params() { return params_; }
  const ParameterSet<T>& params() const { return params_; }
  const DocumentReader<T>& reader() const { return reader_; }
  const ModelDims& dims() const { return reader_.dims(); }

  struct Step {
    ops::LstmState state;
    Var logit;  // shape {1}
    Var prob;   // sigmoid(logit)
  };
  // p_prev has shape {1}. The extractor LSTM sees p_prev * s_prev.
  Step extract_step(Tape<T>& tape, Var p_prev, Var s_prev, const ops::LstmState& prev,
                    Var encoder_state, bool train, RngStream& rng) const;

  struct Run {
    std::vector<Var> logits;
    std::vector<Var> probs;
  };
  // Labels every sentence. With gold labels, each step after the first
  // feeds the gold label with probability gold_rate and otherwise the
  // previous predicted probability (gradients flow through it).
  Run run(Tape<T>& tape, const DocumentEncoding& enc, const std::vector<int>* gold,
          double gold_rate, bool train, RngStream& rng) const;

  // Summed binary cross-entropy over the document's sentences.
  Var loss(Tape<T>& tape, const Run& run, const std::vector<int>& labels) const;

  // Evaluation-mode probabilities for every sentence.
  std::vector<double> predict(const EncodedDocument& doc) const;

 private:
  ParameterSet<T> params_;
  DocumentReader<T> reader_;
  Parameter<T>* lstm_w_;
  Parameter<T>* lstm_b_;
  Parameter<T>* mlp_w1_;
  Parameter<T>* mlp_b1_;
  Parameter<T>* mlp_w2_;
  Parameter<T>* mlp_b2_;
};

extern template class SentenceExtractor<float>;
extern template class SentenceExtractor<double>;

// Top-k sentences by probability (ties to the lower index) returned in
// document order. While the selection exceeds the limit and more than one
// sentence remains, the lowest-probability sentence is dropped.
std::vector<std::size_t> SelectSummarySentences(const std::vector<double>& probs,
                                                const std::vector<Sentence>& sentences,
                                                std::size_t k = 3,
                                                const LimitSpec& limit = LimitSpec::None());

Sentence JoinSentences(const std::vector<Sentence>& sentences,
                       const std::vector<std::size_t>& indices);

}  // namespace nsum

#endif  // NSUM_SENTENCE_EXTRACTOR_HPP_
