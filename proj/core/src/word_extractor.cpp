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

#include "nsum/word_extractor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace nsum {

std::optional<std::size_t> WordSupport::find(const std::string& token) const {
  auto it = index.find(token);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

WordSupport BuildWordSupport(const std::vector<Sentence>& sentences, const Vocabulary& vocab) {
  WordSupport s;
  const std::string& end = vocab.token(Vocabulary::kEnd);
  auto add = [&](const std::string& token) {
    if (token != end && s.index.emplace(token, s.tokens.size()).second) {
      s.tokens.push_back(token);
      s.ids.push_back(vocab.id(token));
    }
  };
  for (const auto& sentence : sentences)
    for (const auto& t : sentence) add(t);
  for (const auto& w : StopWords()) add(w);
  s.end_index = s.tokens.size();
  s.index.emplace(end, s.end_index);
  s.tokens.push_back(end);
  s.ids.push_back(Vocabulary::kEnd);
  return s;
}

std::vector<double> NoiseWeights(const WordSupport& support, const Vocabulary& vocab, double power) {
  std::vector<double> w;
  w.reserve(support.size());
  for (int id : support.ids)
    w.push_back(std::pow(static_cast<double>(std::max<std::size_t>(vocab.count(id), 1)), power));
  return w;
}

std::vector<std::size_t> SampleNoise(const std::vector<double>& weights, std::size_t exclude,
                                     std::size_t k, RngStream& rng) {
  std::vector<double> cumulative(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (i != exclude) total += weights[i];
    cumulative[i] = total;
  }
  Require(total > 0.0, "empty-support", "no noise candidates besides the target");
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    const double u = rng.uniform() * total;
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    i = std::min(i, weights.size() - 1);
    while (i == exclude || weights[i] <= 0.0) i = (i + 1) % weights.size();
    out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> TargetIndices(const WordSupport& support,
                                       const std::vector<std::string>& target) {
  std::vector<std::size_t> out;
  for (const auto& t : target) {
    auto pos = support.find(t);
    Require(pos.has_value() && *pos != support.end_index, "target-outside-support",
            "target token not in document support: " + t);
    out.push_back(*pos);
  }
  out.push_back(support.end_index);
  return out;
}

std::vector<std::string> SupportTokens(const WordSupport& support,
                                       const std::vector<std::size_t>& positions) {
  std::vector<std::string> out;
  for (std::size_t p : positions)
    if (p != support.end_index) out.push_back(support.tokens.at(p));
  return out;
}

template <typename T>
WordExtractor<T>::WordExtractor(const ModelDims& dims, std::size_t vocab_size, bool feed_attention)
    : reader_(params_, dims, vocab_size), feed_attention_(feed_attention) {
  const std::size_t d = dims.word_dim, h = dims.hidden_dim, a = dims.attention_dim;
  const std::size_t input = d + (feed_attention ? h : 0);
  lstm_w_ = &params_.add("dec_lstm.w", {4 * h, h + input});
  lstm_b_ = &params_.add("dec_lstm.b", {4 * h});
  sent_score_ = &params_.add("att.sent_score", {a});
  sent_dec_ = &params_.add("att.sent_dec", {a, h});
  sent_enc_ = &params_.add("att.sent_enc", {a, h});
  word_score_ = &params_.add("att.word_score", {a});
  word_ctx_ = &params_.add("att.word_ctx", {a, h});
  word_emb_ = &params_.add("att.word_emb", {a, d});
}

template <typename T>
typename WordExtractor<T>::Context WordExtractor<T>::prepare(Tape<T>& tape,
                                                             const EncodedDocument& doc,
                                                             const WordSupport& support,
                                                             bool train, RngStream& rng) const {
  Context ctx;
  ctx.encoding = reader_.read(tape, doc, train, rng);
  ctx.states = ops::stack_rows<T>(tape, ctx.encoding.states);
  ctx.state_proj = ops::matmul_nt(tape, ctx.states, tape.param(*sent_enc_));
  const Var words = reader_.embed(tape, support.ids);
  ctx.word_proj = ops::matmul_nt(tape, words, tape.param(*word_emb_));
  ctx.support_size = support.size();
  return ctx;
}

template <typename T>
typename WordExtractor<T>::Attention WordExtractor<T>::attend(Tape<T>& tape, const Context& ctx,
                                                              Var decoder_h) const {
  Attention att;
  const Var dec = ops::matvec(tape, tape.param(*sent_dec_), decoder_h);
  const Var sent_hidden = ops::tanh(tape, ops::add_rowwise(tape, ctx.state_proj, dec));
  const Var sent_scores = ops::matvec(tape, sent_hidden, tape.param(*sent_score_));
  att.sentence_weights =
      ops::masked_softmax(tape, sent_scores, std::vector<bool>(ctx.encoding.length(), true));
  att.context = ops::vecmat(tape, att.sentence_weights, ctx.states);
  const Var c = ops::matvec(tape, tape.param(*word_ctx_), att.context);
  const Var word_hidden = ops::tanh(tape, ops::add_rowwise(tape, ctx.word_proj, c));
  att.logits = ops::matvec(tape, word_hidden, tape.param(*word_score_));
  return att;
}

template <typename T>
typename WordExtractor<T>::State WordExtractor<T>::initial(Tape<T>& tape, const Context& ctx) const {
  const std::size_t h = dims().hidden_dim;
  State start{ops::LstmState{ctx.encoding.last_state, tape.constant(Tensor<T>({h}))}};
  return advance(tape, ctx, start, Vocabulary::kStart, tape.constant(Tensor<T>({h})));
}

template <typename T>
typename WordExtractor<T>::State WordExtractor<T>::advance(Tape<T>& tape, const Context& ctx,
                                                           const State& state, int vocab_id,
                                                           Var context) const {
  const int ids[] = {vocab_id};
  Var input = ops::slice(tape, reader_.embed(tape, ids), 0, dims().word_dim);
  if (feed_attention_) {
    if (!context.valid()) context = attend(tape, ctx, state.lstm.h).context;
    const Var parts[] = {input, context};
    input = ops::concat<T>(tape, parts);
  }
  return State{ops::lstm_cell(tape, input, state.lstm, tape.param(*lstm_w_), tape.param(*lstm_b_))};
}

template <typename T>
typename WordExtractor<T>::Loss WordExtractor<T>::loss(Tape<T>& tape, const Context& ctx,
                                                       const WordSupport& support,
                                                       const std::vector<std::size_t>& targets,
                                                       const std::vector<double>& noise_weights,
                                                       std::size_t noise_samples,
                                                       RngStream& rng) const {
  Require(!targets.empty(), "shape-error", "empty target sequence");
  Require(noise_weights.size() == support.size(), "shape-error",
          "noise weights do not cover the support");
  const std::vector<bool> all(support.size(), true);
  Loss out;
  State state = initial(tape, ctx);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    Require(targets[t] < support.size(), "index-error", "target outside support");
    const Attention att = attend(tape, ctx, state.lstm.h);
    Var step;
    if (noise_samples >= support.size()) {
      step = ops::softmax_cross_entropy(tape, att.logits, all, targets[t]);
      ++out.fallbacks;
    } else {
      const auto noise = SampleNoise(noise_weights, targets[t], noise_samples, rng);
      step = ops::negative_sampling_loss<T>(tape, att.logits, targets[t], noise);
    }
    out.value = out.value.valid() ? ops::add(tape, out.value, step) : step;
    if (t + 1 < targets.size())
      state = advance(tape, ctx, state, support.ids[targets[t]], att.context);
  }
  return out;
}

template class WordExtractor<float>;
template class WordExtractor<double>;

template <typename T>
WordDecoder<T>::WordDecoder(const WordExtractor<T>& model, const EncodedDocument& doc,
                            const WordSupport& support)
    : model_(model), support_(support) {
  RngStream unused(0);
  ctx_ = model_.prepare(tape_, doc, support_, false, unused);
}

template <typename T>
typename WordDecoder<T>::State WordDecoder<T>::initial() {
  return model_.initial(tape_, ctx_);
}

template <typename T>
std::vector<double> WordDecoder<T>::log_probs(const State& state) {
  const auto att = model_.attend(tape_, ctx_, state.lstm.h);
  const auto& logits = tape_.value(att.logits).data;
  const auto& weights = tape_.value(att.sentence_weights).data;
  last_weights_.assign(weights.begin(), weights.end());
  double max = -INFINITY;
  for (T u : logits) max = std::max(max, static_cast<double>(u));
  double z = 0.0;
  for (T u : logits) z += std::exp(static_cast<double>(u) - max);
  const double log_z = max + std::log(z);
  std::vector<double> out;
  out.reserve(logits.size());
  for (T u : logits) out.push_back(static_cast<double>(u) - log_z);
  return out;
}

template <typename T>
typename WordDecoder<T>::State WordDecoder<T>::advance(const State& state, std::size_t token) {
  return model_.advance(tape_, ctx_, state, support_.ids.at(token));
}

template class WordDecoder<float>;
template class WordDecoder<double>;

}  // namespace nsum
