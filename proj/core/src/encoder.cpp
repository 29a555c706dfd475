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

#include "nsum/encoder.hpp"

#include <algorithm>

namespace nsum {

void ModelDims::validate() const {
  Require(word_dim > 0 && sentence_dim > 0 && hidden_dim > 0 && mlp_dim > 0 && attention_dim > 0,
          "invalid-config", "model dimensions must be positive");
  Require(!kernel_widths.empty(), "invalid-config", "at least one kernel width is required");
  for (std::size_t c : kernel_widths)
    Require(c >= 1 && c <= 16, "invalid-config", "kernel widths must lie in [1, 16]");
  Require(dropout >= 0.0 && dropout < 1.0, "invalid-config", "dropout must lie in [0, 1)");
  Require(init_range > 0.0 && init_range <= 1.0, "invalid-config", "init range must lie in (0, 1]");
}

template <typename T>
DocumentReader<T>::DocumentReader(ParameterSet<T>& params, const ModelDims& dims,
                                  std::size_t vocab_size)
    : params_(params), dims_(dims), vocab_size_(vocab_size) {
  dims_.validate();
  Require(vocab_size > 0, "invalid-config", "empty vocabulary");
  const std::size_t d = dims_.word_dim, f = dims_.sentence_dim, h = dims_.hidden_dim;
  embedding_ = &params_.add("embedding", {vocab_size, d});
  for (std::size_t c : dims_.kernel_widths) {
    kernels_.push_back(&params_.add("conv.w" + std::to_string(c), {f, c, d}));
    kernel_bias_.push_back(&params_.add("conv.b" + std::to_string(c), {f}));
  }
  lstm_w_ = &params_.add("doc_lstm.w", {4 * h, h + f});
  lstm_b_ = &params_.add("doc_lstm.b", {4 * h});
}

template <typename T>
Var DocumentReader<T>::embed(Tape<T>& tape, std::span<const int> ids) const {
  return ops::embedding_lookup(tape, tape.param(*embedding_), ids, Vocabulary::kPad);
}

template <typename T>
Var DocumentReader<T>::encode_sentence(Tape<T>& tape, std::span<const int> ids) const {
  Require(!ids.empty(), "empty-sentence", "cannot encode an empty sentence");
  const Var words = embed(tape, ids);
  Var total;
  for (std::size_t k = 0; k < kernels_.size(); ++k) {
    const std::size_t width = dims_.kernel_widths[k];
    const Var x = ids.size() < width ? ops::pad_rows(tape, words, width) : words;
    const Var fmap = ops::conv1d_narrow(tape, x, tape.param(*kernels_[k]), tape.param(*kernel_bias_[k]));
    const Var pooled = ops::max_over_time(tape, fmap);
    total = total.valid() ? ops::add(tape, total, pooled) : pooled;
  }
  return total;
}

template <typename T>
DocumentEncoding DocumentReader<T>::encode_document(Tape<T>& tape,
                                                    std::span<const Var> sentence_vectors,
                                                    const std::vector<bool>& mask) const {
  Require(mask.empty() || mask.size() == sentence_vectors.size(), "shape-error",
          "sentence mask length differs from sentence count");
  const std::size_t h = dims_.hidden_dim;
  const Var w = tape.param(*lstm_w_);
  const Var b = tape.param(*lstm_b_);
  ops::LstmState state{tape.constant(Tensor<T>({h})), tape.constant(Tensor<T>({h}))};
  DocumentEncoding out;
  for (std::size_t t = 0; t < sentence_vectors.size(); ++t) {
    if (!mask.empty() && !mask[t]) continue;
    state = ops::lstm_cell(tape, sentence_vectors[t], state, w, b);
    out.sentence_vectors.push_back(sentence_vectors[t]);
    out.states.push_back(state.h);
  }
  Require(!out.states.empty(), "empty-document", "document has no sentences");
  out.last_state = out.states.back();
  return out;
}

template <typename T>
DocumentEncoding DocumentReader<T>::read(Tape<T>& tape, const EncodedDocument& doc, bool train,
                                         RngStream& rng) const {
  std::vector<Var> vectors;
  vectors.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences)
    vectors.push_back(ops::dropout(tape, encode_sentence(tape, s), dims_.dropout, train, rng));
  return encode_document(tape, vectors);
}

template <typename T>
DocumentEncoding DocumentReader<T>::read(Tape<T>& tape, const Batch& batch, std::size_t d,
                                         bool train, RngStream& rng) const {
  Require(d < batch.docs, "index-error", "batch document index out of range");
  std::vector<Var> vectors;
  std::vector<bool> mask;
  for (std::size_t s = 0; s < batch.max_sentences; ++s) {
    const bool real = batch.sentence_mask[batch.sentence_index(d, s)];
    mask.push_back(real);
    if (!real) {
      vectors.push_back(tape.constant(Tensor<T>({dims_.sentence_dim})));
      continue;
    }
    const std::size_t n = batch.word_counts[batch.sentence_index(d, s)];
    const int* first = &batch.word_ids[batch.word_index(d, s, 0)];
    const Var v = encode_sentence(tape, std::span<const int>(first, n));
    vectors.push_back(ops::dropout(tape, v, dims_.dropout, train, rng));
  }
  return encode_document(tape, vectors, mask);
}

template class DocumentReader<float>;
template class DocumentReader<double>;

}  // namespace nsum
