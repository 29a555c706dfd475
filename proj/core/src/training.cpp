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

#include "nsum/training.hpp"

#include <algorithm>
#include <numeric>

#include "nsum/ops.hpp"

namespace nsum {
namespace {

std::vector<std::size_t> ShuffledOrder(std::size_t n, RngStream& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_int(i)]);
  return order;
}

void CheckKind(const Checkpoint& ckpt, const std::string& kind) {
  Require(ckpt.kind == kind, "checkpoint-mismatch",
          "expected a " + kind + " checkpoint, found " + ckpt.kind);
}

double Step(ParameterSet<float>& params, AdamState<float>& adam, double clip) {
  const double norm = params.clip_grad_norm(clip);
  AdamStep(params, adam);
  return norm;
}

}  // namespace

ParameterSet<float> CloneParameters(const ParameterSet<float>& params) {
  ParameterSet<float> out;
  for (std::size_t i = 0; i < params.size(); ++i)
    out.add(params[i].name, params[i].value.shape).value.data = params[i].value.data;
  return out;
}

void InitializeParameters(ParameterSet<float>& params, const RunConfig& config,
                          const Vocabulary& vocab, RngStream& rng, const EmbeddingTable* pretrained) {
  params.init_uniform(rng, config.dims.init_range);
  auto& emb = params.get("embedding");
  const std::size_t d = config.dims.word_dim;
  std::fill(emb.value.data.begin(), emb.value.data.begin() + static_cast<std::ptrdiff_t>(d), 0.0f);
  if (pretrained != nullptr && pretrained->dim == d) {
    const std::size_t rows = std::min(pretrained->rows(), vocab.size());
    for (std::size_t r = static_cast<std::size_t>(vocab.num_reserved()); r < rows; ++r)
      if (pretrained->pretrained.empty() || pretrained->pretrained[r])
        std::copy(pretrained->row(r), pretrained->row(r) + d, emb.value.data.begin() + static_cast<std::ptrdiff_t>(r * d));
  }
}

std::vector<Sentence> TruncateSentences(const std::vector<Sentence>& sentences, const BatchLimits& limits) {
  std::vector<Sentence> out;
  for (std::size_t s = 0; s < std::min(sentences.size(), limits.max_sentences); ++s)
    out.emplace_back(sentences[s].begin(),
                     sentences[s].begin() + static_cast<std::ptrdiff_t>(std::min(sentences[s].size(), limits.max_words)));
  return out;
}

// ---------------------------------------------------------------------------

SentenceTrainer::SentenceTrainer(const RunConfig& config, Vocabulary vocab,
                                 std::vector<Document> corpus, const EmbeddingTable* pretrained)
    : config_(config), vocab_(std::move(vocab)), corpus_(std::move(corpus)), rng_(config.seed) {
  config_.validate();
  check_corpus();
  model_ = std::make_unique<SentenceExtractor<float>>(config_.dims, vocab_.size());
  InitializeParameters(model_->params(), config_, vocab_, rng_, pretrained);
  adam_ = MakeAdamState(model_->params(), config_.adam);
}

SentenceTrainer::SentenceTrainer(Checkpoint ckpt, std::vector<Document> corpus)
    : config_(ckpt.config), vocab_(std::move(ckpt.vocab)), corpus_(std::move(corpus)),
      rng_(ckpt.config.seed) {
  CheckKind(ckpt, kSentenceModelKind);
  check_corpus();
  model_ = std::make_unique<SentenceExtractor<float>>(config_.dims, vocab_.size());
  RestoreParameters(ckpt.params, model_->params());
  adam_ = std::move(ckpt.adam);
  Require(adam_.m.size() == model_->params().size(), "checkpoint-mismatch",
          "checkpoint lacks optimizer state");
  rng_.restore(ckpt.rng_state);
  epoch_ = ckpt.epoch;
  loss_history_ = std::move(ckpt.loss_history);
}

void SentenceTrainer::check_corpus() const {
  Require(!corpus_.empty(), "no-training-data", "training corpus is empty");
  for (const auto& d : corpus_)
    Require(d.labels.has_value() && d.labels->size() == d.sentences.size(), "missing-labels",
            "document " + d.id + " has no sentence labels");
}

EpochLog SentenceTrainer::run_epoch() {
  const CurriculumSchedule schedule{config_.epochs, config_.curriculum_fraction, config_.teacher_forcing};
  EpochLog log;
  log.gold_rate = schedule(epoch_);
  auto& params = model_->params();
  const auto order = ShuffledOrder(corpus_.size(), rng_);
  double total = 0.0;
  for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
    const std::size_t end = std::min(order.size(), start + config_.batch_size);
    const float scale = 1.0f / static_cast<float>(end - start);
    params.zero_grad();
    for (std::size_t i = start; i < end; ++i) {
      const Document& raw = corpus_[order[i]];
      const Document doc = config_.permute_entities ? PermuteEntityIndices(raw, rng_) : raw;
      const EncodedDocument enc = TruncateDocument(EncodeDocument(doc, vocab_), config_.limits);
      Tape<float> tape;
      const DocumentEncoding reading = model_->reader().read(tape, enc, true, rng_);
      const auto run = model_->run(tape, reading, &enc.labels, log.gold_rate, true, rng_);
      const Var loss = model_->loss(tape, run, enc.labels);
      total += static_cast<double>(tape.value(loss)[0]);
      tape.backward(ops::scale(tape, loss, scale));
    }
    Step(params, adam_, config_.clip_norm);
  }
  ++epoch_;
  log.epoch = epoch_;
  log.loss = total / static_cast<double>(corpus_.size());
  loss_history_.push_back(log.loss);
  if (evaluate_each_epoch_) log.accuracy = ModelLabelAccuracy(*model_, vocab_, corpus_, config_.limits);
  return log;
}

Checkpoint SentenceTrainer::checkpoint() const {
  Checkpoint c;
  c.kind = kSentenceModelKind;
  c.config = config_;
  c.vocab = vocab_;
  c.epoch = epoch_;
  c.rng_state = rng_.serialize();
  c.loss_history = loss_history_;
  c.params = CloneParameters(model_->params());
  c.adam = adam_;
  return c;
}

// ---------------------------------------------------------------------------

WordTrainer::WordTrainer(const RunConfig& config, Vocabulary vocab,
                         std::vector<WordExtractionExample> examples, const EmbeddingTable* pretrained)
    : config_(config), vocab_(std::move(vocab)), examples_(std::move(examples)), rng_(config.seed) {
  config_.validate();
  filter_examples();
  model_ = std::make_unique<WordExtractor<float>>(config_.dims, vocab_.size(), config_.feed_attention);
  InitializeParameters(model_->params(), config_, vocab_, rng_, pretrained);
  adam_ = MakeAdamState(model_->params(), config_.adam);
}

WordTrainer::WordTrainer(Checkpoint ckpt, std::vector<WordExtractionExample> examples)
    : config_(ckpt.config), vocab_(std::move(ckpt.vocab)), examples_(std::move(examples)),
      rng_(ckpt.config.seed) {
  CheckKind(ckpt, kWordModelKind);
  filter_examples();
  model_ = std::make_unique<WordExtractor<float>>(config_.dims, vocab_.size(), config_.feed_attention);
  RestoreParameters(ckpt.params, model_->params());
  adam_ = std::move(ckpt.adam);
  Require(adam_.m.size() == model_->params().size(), "checkpoint-mismatch",
          "checkpoint lacks optimizer state");
  rng_.restore(ckpt.rng_state);
  epoch_ = ckpt.epoch;
  loss_history_ = std::move(ckpt.loss_history);
}

void WordTrainer::filter_examples() {
  std::vector<WordExtractionExample> kept;
  for (auto& ex : examples_) {
    const WordSupport support = BuildWordSupport(TruncateSentences(ex.sentences, config_.limits), vocab_);
    const bool ok = !ex.sentences.empty() && std::all_of(ex.target.begin(), ex.target.end(), [&](const auto& t) {
      auto p = support.find(t);
      return p.has_value() && *p != support.end_index;
    });
    if (ok)
      kept.push_back(std::move(ex));
    else
      ++skipped_;
  }
  examples_ = std::move(kept);
  Require(!examples_.empty(), "no-training-data", "no usable word-extraction examples");
}

EpochLog WordTrainer::run_epoch() {
  EpochLog log;
  auto& params = model_->params();
  const auto order = ShuffledOrder(examples_.size(), rng_);
  double total = 0.0;
  for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
    const std::size_t end = std::min(order.size(), start + config_.batch_size);
    const float scale = 1.0f / static_cast<float>(end - start);
    params.zero_grad();
    for (std::size_t i = start; i < end; ++i) {
      const WordExtractionExample& ex = examples_[order[i]];
      Document doc;
      doc.id = ex.id;
      doc.sentences = TruncateSentences(ex.sentences, config_.limits);
      doc.highlights = std::vector<Sentence>{ex.target};
      if (config_.permute_entities) doc = PermuteEntityIndices(doc, rng_);
      const WordSupport support = BuildWordSupport(doc.sentences, vocab_);
      const auto targets = TargetIndices(support, doc.highlights->front());
      const auto noise = NoiseWeights(support, vocab_);
      Tape<float> tape;
      const auto ctx = model_->prepare(tape, EncodeDocument(doc, vocab_), support, true, rng_);
      const auto loss = model_->loss(tape, ctx, support, targets, noise, config_.noise_samples, rng_);
      log.fallbacks += loss.fallbacks;
      total += static_cast<double>(tape.value(loss.value)[0]);
      tape.backward(ops::scale(tape, loss.value, scale));
    }
    Step(params, adam_, config_.clip_norm);
  }
  ++epoch_;
  log.epoch = epoch_;
  log.loss = total / static_cast<double>(examples_.size());
  loss_history_.push_back(log.loss);
  return log;
}

Checkpoint WordTrainer::checkpoint() const {
  Checkpoint c;
  c.kind = kWordModelKind;
  c.config = config_;
  c.vocab = vocab_;
  c.epoch = epoch_;
  c.rng_state = rng_.serialize();
  c.loss_history = loss_history_;
  c.params = CloneParameters(model_->params());
  c.adam = adam_;
  return c;
}

// ---------------------------------------------------------------------------

std::vector<double> SentenceScores(const SentenceExtractor<float>& model, const Vocabulary& vocab,
                                   const Document& doc, const BatchLimits& limits) {
  std::vector<double> probs(doc.sentences.size(), 0.0);
  if (doc.sentences.empty()) return probs;
  const auto enc = TruncateDocument(EncodeDocument(doc, vocab), limits);
  std::vector<double> scored = model.predict(enc);
  std::copy(scored.begin(), scored.end(), probs.begin());
  return probs;
}

double ModelLabelAccuracy(const SentenceExtractor<float>& model, const Vocabulary& vocab,
                          const std::vector<Document>& docs, const BatchLimits& limits) {
  std::size_t correct = 0, total = 0;
  for (const auto& d : docs) {
    Require(d.labels.has_value(), "missing-labels", "document " + d.id + " has no labels");
    const auto probs = SentenceScores(model, vocab, d, limits);
    for (std::size_t i = 0; i < probs.size(); ++i) {
      correct += ((probs[i] >= 0.5 ? 1 : 0) == (*d.labels)[i]) ? 1 : 0;
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

WordDecodeResult DecodeWords(const WordExtractor<float>& model, const Vocabulary& vocab,
                             const std::vector<Sentence>& sentences, const BeamOptions& beam,
                             const BatchLimits& limits) {
  WordDecodeResult out;
  const auto doc = TruncateSentences(sentences, limits);
  if (doc.empty()) return out;
  Document d;
  d.sentences = doc;
  const WordSupport support = BuildWordSupport(doc, vocab);
  const EncodedDocument enc = EncodeDocument(d, vocab);
  {
    WordDecoder<float> decoder(model, enc, support);
    out.greedy = SupportTokens(support, GreedyDecode(decoder, support.end_index, beam.max_len).tokens);
  }
  WordDecoder<float> decoder(model, enc, support);
  for (const auto& cand : BeamDecode(decoder, support.end_index, beam)) {
    NBestCandidate c;
    c.tokens = SupportTokens(support, cand.tokens);
    c.logprob = cand.normalized();
    c.features = RerankFeatures(c.tokens, doc);
    out.candidates.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> GreedyWords(const WordExtractor<float>& model, const Vocabulary& vocab,
                                     const std::vector<Sentence>& sentences, std::size_t max_len,
                                     const BatchLimits& limits) {
  const auto doc = TruncateSentences(sentences, limits);
  if (doc.empty()) return {};
  Document d;
  d.sentences = doc;
  const WordSupport support = BuildWordSupport(doc, vocab);
  WordDecoder<float> decoder(model, EncodeDocument(d, vocab), support);
  return SupportTokens(support, GreedyDecode(decoder, support.end_index, max_len).tokens);
}

std::unique_ptr<SentenceExtractor<float>> LoadSentenceModel(const Checkpoint& ckpt) {
  CheckKind(ckpt, kSentenceModelKind);
  Require(ckpt.epoch > 0, "checkpoint-mismatch", "checkpoint holds an untrained model");
  auto model = std::make_unique<SentenceExtractor<float>>(ckpt.config.dims, ckpt.vocab.size());
  RestoreParameters(ckpt.params, model->params());
  return model;
}

std::unique_ptr<WordExtractor<float>> LoadWordModel(const Checkpoint& ckpt) {
  CheckKind(ckpt, kWordModelKind);
  Require(ckpt.epoch > 0, "checkpoint-mismatch", "checkpoint holds an untrained model");
  auto model = std::make_unique<WordExtractor<float>>(ckpt.config.dims, ckpt.vocab.size(),
                                                      ckpt.config.feed_attention);
  RestoreParameters(ckpt.params, model->params());
  return model;
}

}  // namespace nsum
