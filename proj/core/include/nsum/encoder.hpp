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

#ifndef NSUM_ENCODER_HPP_
#define NSUM_ENCODER_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nsum/ops.hpp"
#include "nsum/rng.hpp"
#include "nsum/tape.hpp"
#include "nsum/text.hpp"

namespace nsum {

struct ModelDims {
  std::size_t word_dim = 150;
  std::size_t sentence_dim = 300;  // feature maps per kernel width
  std::size_t hidden_dim = 750;    // document, extractor and decoder LSTMs
  std::size_t mlp_dim = 750;
  std::size_t attention_dim = 750;
  std::vector<std::size_t> kernel_widths = {1, 2, 3, 4, 5, 6, 7};
  double dropout = 0.5;
  double init_range = 0.05;

  void validate() const;
};

struct DocumentEncoding {
  std::vector<Var> sentence_vectors;  // one per real sentence
  std::vector<Var> states;            // document LSTM outputs h_1..h_m
  Var last_state;                     // h_m

  std::size_t length() const { return states.size(); }
};

// Convolutional sentence encoder plus a forward LSTM over sentence
// vectors. Registers its parameters in a caller-owned set:
//   embedding           [V x word_dim]
//   conv.w<c>, conv.b<c> [F x c x word_dim], [F]
//   doc_lstm.w, doc_lstm.b
template <typename T>
class DocumentReader {
 public:
  DocumentReader(ParameterSet<T>& params, const ModelDims& dims, std::size_t vocab_size);

  const ModelDims& dims() const { return dims_; }
  std::size_t vocab_size() const { return vocab_size_; }

  // Embedding rows for the given ids; PAD stays frozen at zero.
  Var embed(Tape<T>& tape, std::span<const int> ids) const;

  // Sum over kernel widths of max-pooled narrow convolutions. Sentences
  // shorter than a kernel are extended with PAD rows.
  Var encode_sentence(Tape<T>& tape, std::span<const int> ids) const;

  // Forward LSTM from a zero state. Masked positions (false) are skipped
  // and produce no state.
  DocumentEncoding encode_document(Tape<T>& tape, std::span<const Var> sentence_vectors,
                                   const std::vector<bool>& mask = {}) const;

  // Full read of one document. Dropout applies to the sentence vectors in
  // training mode.
  DocumentEncoding read(Tape<T>& tape, const EncodedDocument& doc, bool train,
                        RngStream& rng) const;
  // Same, for document d of a padded batch.
  DocumentEncoding read(Tape<T>& tape, const Batch& batch, std::size_t d, bool train,
                        RngStream& rng) const;

 private:
  ParameterSet<T>& params_;
  ModelDims dims_;
  std::size_t vocab_size_;
  Parameter<T>* embedding_;
  std::vector<Parameter<T>*> kernels_;
  std::vector<Parameter<T>*> kernel_bias_;
  Parameter<T>* lstm_w_;
  Parameter<T>* lstm_b_;
};

extern template class DocumentReader<float>;
extern template class DocumentReader<double>;

}  // namespace nsum

#endif  // NSUM_ENCODER_HPP_
