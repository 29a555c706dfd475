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

#include "nsum/sentence_extractor.hpp"

#include <algorithm>
#include <numeric>

namespace nsum {

double CurriculumSchedule::operator()(std::size_t epoch) const {
  if (teacher_forcing) return 1.0;
  const double span = decay_fraction * static_cast<double>(total_epochs);
  if (span <= 0.0) return epoch == 0 ? 1.0 : 0.0;
  return std::max(0.0, 1.0 - static_cast<double>(epoch) / span);
}

template <typename T>
SentenceExtractor<T>::SentenceExtractor(const ModelDims& dims, std::size_t vocab_size)
    : reader_(params_, dims, vocab_size) {
  const std::size_t f = dims.sentence_dim, h = dims.hidden_dim, m = dims.mlp_dim;
  lstm_w_ = &params_.add("ext_lstm.w", {4 * h, h + f});
  lstm_b_ = &params_.add("ext_lstm.b", {4 * h});
  mlp_w1_ = &params_.add("mlp.w1", {m, 2 * h});
  mlp_b1_ = &params_.add("mlp.b1", {m});
  mlp_w2_ = &params_.add("mlp.w2", {1, m});
  mlp_b2_ = &params_.add("mlp.b2", {1});
}

template <typename T>
typename SentenceExtractor<T>::Step SentenceExtractor<T>::extract_step(
    Tape<T>& tape, Var p_prev, Var s_prev, const ops::LstmState& prev, Var encoder_state,
    bool train, RngStream& rng) const {
  const Var input = ops::scale_by(tape, p_prev, s_prev);
  Step step;
  step.state = ops::lstm_cell(tape, input, prev, tape.param(*lstm_w_), tape.param(*lstm_b_));
  const Var parts[] = {step.state.h, encoder_state};
  Var joint = ops::concat<T>(tape, parts);
  joint = ops::dropout(tape, joint, dims().dropout, train, rng);
  const Var hidden = ops::tanh(
      tape, ops::add(tape, ops::matvec(tape, tape.param(*mlp_w1_), joint), tape.param(*mlp_b1_)));
  step.logit = ops::add(tape, ops::matvec(tape, tape.param(*mlp_w2_), hidden), tape.param(*mlp_b2_));
  step.prob = ops::sigmoid(tape, step.logit);
  return step;
}

template <typename T>
typename SentenceExtractor<T>::Run SentenceExtractor<T>::run(Tape<T>& tape,
                                                             const DocumentEncoding& enc,
                                                             const std::vector<int>* gold,
                                                             double gold_rate, bool train,
                                                             RngStream& rng) const {
  const std::size_t m = enc.length();
  Require(gold == nullptr || gold->size() == m, "shape-error",
          "label count differs from sentence count");
  const std::size_t h = dims().hidden_dim;
  ops::LstmState state{enc.last_state, tape.constant(Tensor<T>({h}))};
  Var p_prev = tape.constant(Tensor<T>::Scalar(0));
  Var s_prev = tape.constant(Tensor<T>({dims().sentence_dim}));
  Run out;
  for (std::size_t t = 0; t < m; ++t) {
    if (t > 0) {
      s_prev = enc.sentence_vectors[t - 1];
      if (gold != nullptr && (gold_rate >= 1.0 || (gold_rate > 0.0 && rng.bernoulli(gold_rate))))
        p_prev = tape.constant(Tensor<T>::Scalar(static_cast<T>((*gold)[t - 1])));
      else
        p_prev = out.probs.back();
    }
    Step step = extract_step(tape, p_prev, s_prev, state, enc.states[t], train, rng);
    state = step.state;
    out.logits.push_back(step.logit);
    out.probs.push_back(step.prob);
  }
  return out;
}

template <typename T>
Var SentenceExtractor<T>::loss(Tape<T>& tape, const Run& run, const std::vector<int>& labels) const {
  Require(labels.size() == run.logits.size(), "shape-error", "label count differs from step count");
  Var total;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const Var l = ops::bce_with_logits(tape, run.logits[t], static_cast<T>(labels[t]));
    total = total.valid() ? ops::add(tape, total, l) : l;
  }
  return total;
}

template <typename T>
std::vector<double> SentenceExtractor<T>::predict(const EncodedDocument& doc) const {
  if (doc.sentences.empty()) return {};
  Tape<T> tape;
  RngStream unused(0);
  const DocumentEncoding enc = reader_.read(tape, doc, false, unused);
  const Run r = run(tape, enc, nullptr, 0.0, false, unused);
  std::vector<double> probs;
  for (Var p : r.probs) probs.push_back(static_cast<double>(tape.value(p)[0]));
  return probs;
}

template class SentenceExtractor<float>;
template class SentenceExtractor<double>;

std::vector<std::size_t> SelectSummarySentences(const std::vector<double>& probs,
                                                const std::vector<Sentence>& sentences,
                                                std::size_t k, const LimitSpec& limit) {
  Require(probs.size() == sentences.size(), "shape-error",
          "probability count differs from sentence count");
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  order.resize(std::min(k, order.size()));
  // order is now by descending probability; drop from the back.
  auto selected = [&] {
    std::vector<std::size_t> idx = order;
    std::sort(idx.begin(), idx.end());
    return idx;
  };
  while (order.size() > 1 && !limit.fits(JoinSentences(sentences, selected()))) order.pop_back();
  return selected();
}

Sentence JoinSentences(const std::vector<Sentence>& sentences,
                       const std::vector<std::size_t>& indices) {
  Sentence out;
  for (std::size_t i : indices) out.insert(out.end(), sentences.at(i).begin(), sentences.at(i).end());
  return out;
}

}  // namespace nsum
