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

#include "nsum/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "nsum/error.hpp"
#include "nsum/stem.hpp"

namespace nsum {

std::vector<std::string> NgramSet(const Sentence& tokens, std::size_t n) {
  std::set<std::string> grams;
  if (n == 0 || tokens.size() < n) return {};
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string g = tokens[i];
    for (std::size_t k = 1; k < n; ++k) g += " " + tokens[i + k];
    grams.insert(std::move(g));
  }
  return {grams.begin(), grams.end()};
}

namespace {

double Overlap(const std::vector<std::string>& sentence_grams,
               const std::vector<std::string>& highlight_grams) {
  if (highlight_grams.empty()) return 0.0;
  std::vector<std::string> common;
  std::set_intersection(sentence_grams.begin(), sentence_grams.end(), highlight_grams.begin(),
                        highlight_grams.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(highlight_grams.size());
}

}  // namespace

SentenceFeatures ScoreSentence(const Sentence& sentence, const std::vector<Sentence>& highlights,
                               std::size_t position) {
  SentenceFeatures f;
  f.position = position;
  f.sentence_length = sentence.size();
  const auto uni = NgramSet(sentence, 1);
  const auto bi = NgramSet(sentence, 2);
  std::set<std::string> highlight_entities;
  for (const auto& h : highlights) {
    const double u = Overlap(uni, NgramSet(h, 1));
    const double b = Overlap(bi, NgramSet(h, 2));
    if (u > f.unigram_overlap || (u == f.unigram_overlap && b > f.bigram_overlap)) {
      f.unigram_overlap = u;
      f.bigram_overlap = b;
    }
    for (const auto& t : h)
      if (IsEntityMarker(t)) highlight_entities.insert(t);
  }
  std::set<std::string> shared;
  for (const auto& t : sentence)
    if (highlight_entities.count(t)) shared.insert(t);
  f.entity_overlap_count = shared.size();
  return f;
}

LabelingResult LabelDocument(const Document& doc, const std::vector<Sentence>& highlights,
                             const LabelRuleWeights& weights) {
  LabelingResult result;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const auto f = ScoreSentence(doc.sentences[i], highlights, i);
    const int label = weights.score(f) >= weights.threshold ? 1 : 0;
    positives += static_cast<std::size_t>(label);
    result.labels.push_back(label);
  }
  result.positive_rate =
      doc.sentences.empty() ? 0.0 : static_cast<double>(positives) / static_cast<double>(doc.sentences.size());
  return result;
}

namespace {

struct LabeledFeature {
  SentenceFeatures features;
  int label;
};

std::vector<LabeledFeature> CollectFeatures(const std::vector<Document>& labeled) {
  std::vector<LabeledFeature> out;
  for (const auto& doc : labeled) {
    Require(doc.labels.has_value(), "missing-labels", "document " + doc.id + " has no gold labels");
    const std::vector<Sentence> none;
    const auto& highlights = doc.highlights ? *doc.highlights : none;
    for (std::size_t i = 0; i < doc.sentences.size(); ++i)
      out.push_back({ScoreSentence(doc.sentences[i], highlights, i), (*doc.labels)[i]});
  }
  return out;
}

}  // namespace

double LabelAccuracy(const std::vector<Document>& labeled, const LabelRuleWeights& weights) {
  const auto items = CollectFeatures(labeled);
  if (items.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& it : items)
    correct += static_cast<std::size_t>((weights.score(it.features) >= weights.threshold ? 1 : 0) == it.label);
  return static_cast<double>(correct) / static_cast<double>(items.size());
}

RuleTuningResult TuneRuleWeights(const std::vector<Document>& labeled, const RuleGrid& grid) {
  const auto items = CollectFeatures(labeled);
  std::size_t positives = 0;
  for (const auto& it : items) positives += static_cast<std::size_t>(it.label == 1);
  if (items.empty() || positives == 0 || positives == items.size())
    Fail("degenerate-labels", "rule tuning needs both positive and negative gold labels");

  RuleTuningResult best;
  best.sentences = items.size();
  double best_l1 = std::numeric_limits<double>::infinity();
  std::size_t best_correct = 0;
  bool have_best = false;
  std::vector<std::pair<double, int>> scored(items.size());

  for (double wp : grid.position)
    for (double wu : grid.unigram)
      for (double wb : grid.bigram)
        for (double we : grid.entity)
          for (double wl : grid.length) {
            LabelRuleWeights w;
            w.position = wp;
            w.unigram = wu;
            w.bigram = wb;
            w.entity = we;
            w.length = wl;
            w.bias = 0.0;
            for (std::size_t i = 0; i < items.size(); ++i)
              scored[i] = {w.score(items[i].features), items[i].label};
            std::sort(scored.begin(), scored.end());

            // Threshold at each distinct score s: predict 1 iff score >= s.
            std::size_t neg_below = 0;
            std::size_t pos_below = 0;
            std::size_t local_correct = 0;
            double local_threshold = 0.0;
            bool local_set = false;
            for (std::size_t i = 0; i <= scored.size(); ++i) {
              if (i == scored.size() || i == 0 || scored[i].first != scored[i - 1].first) {
                const std::size_t correct = neg_below + (positives - pos_below);
                const double threshold =
                    i == scored.size() ? scored.back().first + 1.0 : scored[i].first;
                if (!local_set || correct > local_correct) {
                  local_correct = correct;
                  local_threshold = threshold;
                  local_set = true;
                }
              }
              if (i == scored.size()) break;
              if (scored[i].second == 1) {
                ++pos_below;
              } else {
                ++neg_below;
              }
            }
            const double l1 = std::abs(wp) + std::abs(wu) + std::abs(wb) + std::abs(we) + std::abs(wl);
            if (!have_best || local_correct > best_correct ||
                (local_correct == best_correct && l1 < best_l1 - 1e-12)) {
              have_best = true;
              best_correct = local_correct;
              best_l1 = l1;
              w.threshold = local_threshold;
              best.weights = w;
            }
          }
  best.accuracy = static_cast<double>(best_correct) / static_cast<double>(items.size());
  return best;
}

// ---------------------------------------------------------------------------

double Cosine(const float* a, const float* b, std::size_t dim) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

WordExampleOutcome BuildWordExtractionExample(const Document& doc,
                                              const std::vector<Sentence>& highlights,
                                              const EmbeddingTable& embeddings,
                                              const Vocabulary& vocab, std::size_t k, double tau) {
  WordExtractionExample ex;
  ex.id = doc.id;
  ex.sentences = doc.sentences;
  std::unordered_set<std::string> doc_tokens;
  std::unordered_map<std::string, std::string> stem_to_surface;
  for (const auto& s : doc.sentences)
    for (const auto& t : s) {
      ex.document_tokens.push_back(t);
      doc_tokens.insert(t);
      stem_to_surface.emplace(Stem(t), t);
    }

  for (const auto& h : highlights)
    for (const auto& t : h) {
      if (doc_tokens.count(t) || IsStopWord(t)) {
        ex.target.push_back(t);
        continue;
      }
      if (auto it = stem_to_surface.find(Stem(t)); it != stem_to_surface.end()) {
        ex.target.push_back(it->second);
        ex.substitutions.push_back({t, it->second, 1.0, "stem"});
        continue;
      }
      bool substituted = false;
      if (vocab.contains(t) && !vocab.is_reserved(vocab.id(t)) &&
          static_cast<std::size_t>(vocab.id(t)) < embeddings.rows()) {
        const auto self = static_cast<std::size_t>(vocab.id(t));
        std::vector<std::pair<double, std::size_t>> neighbours;
        for (std::size_t r = static_cast<std::size_t>(vocab.num_reserved()); r < embeddings.rows(); ++r) {
          if (r == self) continue;
          neighbours.emplace_back(Cosine(embeddings.row(self), embeddings.row(r), embeddings.dim), r);
        }
        const std::size_t top = std::min(k, neighbours.size());
        std::partial_sort(neighbours.begin(), neighbours.begin() + static_cast<std::ptrdiff_t>(top),
                          neighbours.end(), [](const auto& a, const auto& b) {
                            return a.first != b.first ? a.first > b.first : a.second < b.second;
                          });
        for (std::size_t i = 0; i < top; ++i) {
          const auto& [cos, row] = neighbours[i];
          if (cos < tau) break;
          const std::string& candidate = vocab.token(static_cast<int>(row));
          if (doc_tokens.count(candidate)) {
            ex.target.push_back(candidate);
            ex.substitutions.push_back({t, candidate, cos, "neighbor"});
            substituted = true;
            break;
          }
        }
      }
      if (!substituted) return WordExampleOutcome{std::nullopt, t};
    }
  return WordExampleOutcome{std::move(ex), {}};
}

}  // namespace nsum
