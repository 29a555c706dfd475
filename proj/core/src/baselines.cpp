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

#include "nsum/baselines.hpp"

#include <algorithm>
#include <cmath>


namespace nsum {
namespace {

std::vector<double> MeanEmbedding(const Sentence& tokens, const EmbeddingTable& emb,
                                  const Vocabulary& vocab) {
  std::vector<double> mean(emb.dim, 0.0);
  std::size_t n = 0;
  for (const auto& t : tokens) {
    if (!vocab.contains(t)) continue;
    const auto id = static_cast<std::size_t>(vocab.id(t));
    if (id >= emb.rows()) continue;
    const float* row = emb.row(id);
    for (std::size_t k = 0; k < emb.dim; ++k) mean[k] += row[k];
    ++n;
  }
  if (n > 0)
    for (double& v : mean) v /= static_cast<double>(n);
  return mean;
}

double CosineD(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  return na == 0.0 || nb == 0.0 ? 0.0 : dot / std::sqrt(na * nb);
}

void NormalizeByMax(std::vector<LregFeatureVector>& rows, std::size_t col) {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r[col]));
  if (m > 0.0)
    for (auto& r : rows) r[col] /= m;
}

double Sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

Sentence Lead3(const std::vector<Sentence>& sentences, const LimitSpec& limit) {
  Sentence out;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, sentences.size()); ++i)
    out.insert(out.end(), sentences[i].begin(), sentences[i].end());
  return Truncate(out, limit);
}

std::vector<LregFeatureVector> LregFeatures(const std::vector<Sentence>& sentences,
                                            const EmbeddingTable& embeddings,
                                            const Vocabulary& vocab) {
  std::vector<std::vector<double>> vecs;
  Sentence all;
  for (const auto& s : sentences) {
    vecs.push_back(MeanEmbedding(s, embeddings, vocab));
    all.insert(all.end(), s.begin(), s.end());
  }
  const auto doc_vec = MeanEmbedding(all, embeddings, vocab);
  std::vector<LregFeatureVector> rows;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    LregFeatureVector f{};
    f[0] = static_cast<double>(sentences[i].size());
    f[1] = static_cast<double>(i);
    for (const auto& t : sentences[i]) f[2] += IsEntityMarker(t) ? 1.0 : 0.0;
    for (std::size_t j = 0; j < sentences.size(); ++j)
      if (j != i) f[3] += CosineD(vecs[i], vecs[j]);
    f[4] = CosineD(vecs[i], doc_vec);
    rows.push_back(f);
  }
  NormalizeByMax(rows, 3);
  NormalizeByMax(rows, 4);
  return rows;
}

double LregModel::probability(const LregFeatureVector& x) const {
  double z = bias;
  for (std::size_t k = 0; k < kLregFeatures; ++k) z += weights[k] * (x[k] - mean[k]) / stddev[k];
  return Sigmoid(z);
}

std::vector<double> LregModel::predict_proba(const std::vector<LregFeatureVector>& doc) const {
  std::vector<double> p;
  for (const auto& x : doc) p.push_back(probability(x));
  return p;
}

std::vector<int> LregModel::predict(const std::vector<LregFeatureVector>& doc) const {
  std::vector<int> y;
  for (const auto& x : doc) y.push_back(probability(x) >= threshold ? 1 : 0);
  return y;
}

LregModel TrainLreg(const std::vector<LabeledFeatures>& data, const LregOptions& options) {
  std::vector<LregFeatureVector> xs;
  std::vector<double> ys;
  for (const auto& d : data) {
    Require(d.sentences.size() == d.labels.size(), "shape-error", "feature and label counts differ");
    for (std::size_t i = 0; i < d.sentences.size(); ++i) {
      xs.push_back(d.sentences[i]);
      ys.push_back(static_cast<double>(d.labels[i]));
    }
  }
  Require(!xs.empty(), "missing-labels", "no labeled sentences to train on");
  const bool all_same = std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys[0]; });
  Require(!all_same, "degenerate-labels", "training labels contain a single class");

  LregModel model;
  const double n = static_cast<double>(xs.size());
  for (std::size_t k = 0; k < kLregFeatures; ++k) {
    double mu = 0.0, var = 0.0;
    for (const auto& x : xs) mu += x[k];
    mu /= n;
    for (const auto& x : xs) var += (x[k] - mu) * (x[k] - mu);
    const double sd = std::sqrt(var / n);
    model.mean[k] = mu;
    model.stddev[k] = sd > 1e-12 ? sd : 1.0;
  }
  std::vector<LregFeatureVector> z(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < kLregFeatures; ++k) z[i][k] = (xs[i][k] - model.mean[k]) / model.stddev[k];

  double prev_loss = INFINITY;
  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    LregFeatureVector gw{};
    double gb = 0.0, loss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      double s = model.bias;
      for (std::size_t k = 0; k < kLregFeatures; ++k) s += model.weights[k] * z[i][k];
      const double p = Sigmoid(s);
      // Stable log-loss: log(1 + e^s) - y s.
      loss += (s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s))) - ys[i] * s;
      const double r = p - ys[i];
      for (std::size_t k = 0; k < kLregFeatures; ++k) gw[k] += r * z[i][k];
      gb += r;
    }
    loss /= n;
    for (std::size_t k = 0; k < kLregFeatures; ++k) {
      loss += 0.5 * options.l2 * model.weights[k] * model.weights[k];
      model.weights[k] -= options.learning_rate * (gw[k] / n + options.l2 * model.weights[k]);
    }
    model.bias -= options.learning_rate * gb / n;
    if (std::abs(prev_loss - loss) < options.tolerance) break;
    prev_loss = loss;
  }
  return model;
}

double TuneLregThreshold(const LregModel& model, const std::vector<LabeledFeatures>& validation) {
  std::vector<std::pair<double, int>> scored;
  for (const auto& d : validation)
    for (std::size_t i = 0; i < d.sentences.size(); ++i)
      scored.emplace_back(model.probability(d.sentences[i]), d.labels.at(i));
  Require(!scored.empty(), "no-validation-data", "threshold tuning needs validation sentences");
  std::vector<double> candidates = {0.5};
  for (const auto& [p, y] : scored) candidates.push_back(p);
  double best = 0.5;
  std::size_t best_correct = 0;
  bool first = true;
  for (double t : candidates) {
    std::size_t correct = 0;
    for (const auto& [p, y] : scored) correct += ((p >= t ? 1 : 0) == y) ? 1 : 0;
    if (first || correct > best_correct ||
        (correct == best_correct && std::abs(t - 0.5) < std::abs(best - 0.5))) {
      best = t;
      best_correct = correct;
      first = false;
    }
  }
  return best;
}

}  // namespace nsum
