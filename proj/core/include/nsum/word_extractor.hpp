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

#ifndef NSUM_WORD_EXTRACTOR_HPP_
#define NSUM_WORD_EXTRACTOR_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nsum/beam.hpp"
#include "nsum/encoder.hpp"

namespace nsum {

// Output vocabulary of one document: its distinct words in order of first
// occurrence, then the stop-words it lacks, then the end symbol.
struct WordSupport {
  std::vector<std::string> tokens;
  std::vector<int> ids;  // vocabulary ids (kUnk for unknown words)
  std::size_t end_index = 0;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return tokens.size(); }
  std::optional<std::size_t> find(const std::string& token) const;
};

WordSupport BuildWordSupport(const std::vector<Sentence>& sentences, const Vocabulary& vocab);

// Corpus unigram counts (at least 1) raised to the given power.
std::vector<double> NoiseWeights(const WordSupport& support, const Vocabulary& vocab,
                                 double power = 0.75);

// Draws k support positions proportionally to weights, never `exclude`.
std::vector<std::size_t> SampleNoise(const std::vector<double>& weights, std::size_t exclude,
                                     std::size_t k, RngStream& rng);

// Target token strings -> support positions followed by the end symbol.
// Signals "target-outside-support" for tokens the support lacks.
std::vector<std::size_t> TargetIndices(const WordSupport& support,
                                       const std::vector<std::string>& target);

// Pointer-style decoder over a read document with two-level attention:
// first over encoder states, then over the support's word embeddings.
template <typename T>
class WordExtractor {
 public:
  WordExtractor(const ModelDims& dims, std::size_t vocab_size, bool feed_attention = false);
  WordExtractor(const WordExtractor&) = delete;
  WordExtractor& operator=(const WordExtractor&) = delete;

  ParameterSet<T>& params() { return params_; }
  const ParameterSet<T>& params() const { return params_; }
  const DocumentReader<T>& reader() const { return reader_; }
  const ModelDims& dims() const { return reader_.dims(); }
  bool feed_attention() const { return feed_attention_; }

  struct Context {
    DocumentEncoding encoding;
    Var states;       // [m x H]
    Var state_proj;   // [m x A], encoder states projected once
    Var word_proj;    // [S x A], support embeddings projected once
    std::size_t support_size = 0;
  };
  Context prepare(Tape<T>& tape, const EncodedDocument& doc, const WordSupport& support,
                  bool train, RngStream& rng) const;

  struct Attention {
    Var sentence_weights;  // [m], sums to 1
    Var context;           // [H]
    Var logits;            // [S]
  };
  Attention attend(Tape<T>& tape, const Context& ctx, Var decoder_h) const;

  struct State {
    ops::LstmState lstm;
  };
  // State after consuming the start symbol; the decoder starts from the
  // last encoder state with an empty cell.
  State initial(Tape<T>& tape, const Context& ctx) const;
  // With feed_attention the decoder input also carries the attended
  // context of `state` (recomputed when not supplied).
  State advance(Tape<T>& tape, const Context& ctx, const State& state, int vocab_id,
                Var context = Var{}) const;

  struct Loss {
    Var value;
    std::size_t fallbacks = 0;  // steps that used the full softmax
  };
  // Teacher-forced loss over target support positions (ending with the end
  // symbol): negative sampling with `noise_samples` draws per step, or full
  // softmax cross-entropy when noise_samples >= support size.
  Loss loss(Tape<T>& tape, const Context& ctx, const WordSupport& support,
            const std::vector<std::size_t>& targets, const std::vector<double>& noise_weights,
            std::size_t noise_samples, RngStream& rng) const;

 private:
  ParameterSet<T> params_;
  DocumentReader<T> reader_;
  bool feed_attention_;
  Parameter<T>* lstm_w_;
  Parameter<T>* lstm_b_;
  Parameter<T>* sent_score_;   // z
  Parameter<T>* sent_dec_;     // decoder state -> attention space
  Parameter<T>* sent_enc_;     // encoder state -> attention space
  Parameter<T>* word_score_;   // v
  Parameter<T>* word_ctx_;     // attended context -> attention space
  Parameter<T>* word_emb_;     // word embedding -> attention space
};

extern template class WordExtractor<float>;
extern template class WordExtractor<double>;

// Adapts a prepared document to the beam/greedy decoding concept.
template <typename T>
class WordDecoder {
 public:
  WordDecoder(const WordExtractor<T>& model, const EncodedDocument& doc, const WordSupport& support);

  using State = typename WordExtractor<T>::State;
  State initial();
  std::vector<double> log_probs(const State& state);
  State advance(const State& state, std::size_t token);

  std::size_t end_token() const { return support_.end_index; }
  // Sentence attention of the most recent log_probs call.
  const std::vector<double>& last_sentence_weights() const { return last_weights_; }

 private:
  const WordExtractor<T>& model_;
  const WordSupport& support_;
  Tape<T> tape_;
  typename WordExtractor<T>::Context ctx_;
  std::vector<double> last_weights_;
};

extern template class WordDecoder<float>;
extern template class WordDecoder<double>;

// Decoded support positions -> tokens, dropping the end symbol.
std::vector<std::string> SupportTokens(const WordSupport& support,
                                       const std::vector<std::size_t>& positions);

}  // namespace nsum

#endif  // NSUM_WORD_EXTRACTOR_HPP_
