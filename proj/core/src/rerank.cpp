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

#include "nsum/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"
#include "nsum/rouge.hpp"

namespace nsum {
namespace {

double Dot(const RerankFeatureVector& a, const RerankFeatureVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < kRerankFeatures; ++i) s += a[i] * b[i];
  return s;
}

double Objective(const std::vector<RerankExample>& validation, const RerankerWeights& w) {
  double total = 0.0;
  for (const auto& ex : validation) {
    if (ex.candidates.empty()) continue;
    total += RougeN(ex.candidates[Rerank(ex.candidates, w)].tokens, ex.references, 2).f1;
  }
  return total / static_cast<double>(validation.size());
}

}  // namespace

RerankFeatureVector RerankFeatures(const Sentence& candidate, const std::vector<Sentence>& document) {
  RerankFeatureVector f{};
  for (std::size_t n = 1; n <= 3; ++n) {
    std::set<std::vector<std::string>> grams;
    for (const auto& s : document)
      for (std::size_t i = 0; i + n <= s.size(); ++i)
        grams.emplace(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(i + n));
    for (std::size_t i = 0; i + n <= candidate.size(); ++i)
      if (grams.count({candidate.begin() + static_cast<std::ptrdiff_t>(i),
                       candidate.begin() + static_cast<std::ptrdiff_t>(i + n)}))
        f[n - 1] += 1.0;
  }
  f[3] = static_cast<double>(candidate.size());
  return f;
}

std::size_t Rerank(const std::vector<NBestCandidate>& candidates, const RerankerWeights& weights) {
  Require(!candidates.empty(), "empty-nbest", "reranking needs at least one candidate");
  std::size_t best = 0;
  double best_score = candidates[0].logprob + Dot(weights.lambda, candidates[0].features);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double s = candidates[i].logprob + Dot(weights.lambda, candidates[i].features);
    if (s > best_score || (s == best_score && candidates[i].logprob > candidates[best].logprob)) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

RerankTuning TuneRerankWeights(const std::vector<RerankExample>& validation,
                               const std::vector<double>& grid, std::size_t max_passes) {
  Require(!validation.empty(), "no-validation-data", "reranker tuning needs validation documents");
  // Visiting values by magnitude makes ties keep the smaller weight.
  std::vector<double> ordered = grid;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  RerankTuning out;
  out.baseline = Objective(validation, out.weights);
  out.objective = out.baseline;
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    ++out.passes;
    bool improved = false;
    for (std::size_t f = 0; f < kRerankFeatures; ++f) {
      RerankerWeights best = out.weights;
      double best_obj = out.objective;
      for (double value : ordered) {
        RerankerWeights trial = out.weights;
        trial.lambda[f] = value;
        const double obj = Objective(validation, trial);
        if (obj > best_obj) {
          best = trial;
          best_obj = obj;
        }
      }
      if (best_obj > out.objective) {
        out.weights = best;
        out.objective = best_obj;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return out;
}

std::string NBestToJsonl(const std::string& doc_id, const std::vector<NBestCandidate>& candidates) {
  std::string out;
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    const auto& c = candidates[r];
    nlohmann::json line{{"doc_id", doc_id},
                        {"rank", r},
                        {"tokens", c.tokens},
                        {"logprob", c.logprob},
                        {"features", c.features}};
    out += line.dump() + "\n";
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<NBestCandidate>>> ParseNBestJsonl(
    const std::vector<std::string>& lines) {
  std::vector<std::pair<std::string, std::vector<std::pair<std::size_t, NBestCandidate>>>> groups;
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(lines[i]);
      NBestCandidate c;
      c.tokens = j.at("tokens").get<Sentence>();
      c.logprob = j.at("logprob").get<double>();
      if (j.contains("features")) {
        const auto f = j.at("features").get<std::vector<double>>();
        Require(f.size() == kRerankFeatures, "parse-error", "wrong feature count");
        std::copy(f.begin(), f.end(), c.features.begin());
      }
      const std::string id = j.at("doc_id").get<std::string>();
      auto [it, fresh] = where.emplace(id, groups.size());
      if (fresh) groups.push_back({id, {}});
      groups[it->second].second.emplace_back(j.at("rank").get<std::size_t>(), std::move(c));
    } catch (const nlohmann::json::exception& e) {
      Fail("parse-error", "n-best line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  std::vector<std::pair<std::string, std::vector<NBestCandidate>>> out;
  for (auto& [id, ranked] : groups) {
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<NBestCandidate> cands;
    for (auto& rc : ranked) cands.push_back(std::move(rc.second));
    out.emplace_back(id, std::move(cands));
  }
  return out;
}

std::string WeightsToJson(const RerankerWeights& weights) {
  return nlohmann::json{{"unigram_overlap", weights.lambda[0]},
                        {"bigram_overlap", weights.lambda[1]},
                        {"trigram_overlap", weights.lambda[2]},
                        {"length", weights.lambda[3]}}
             .dump(2) +
         "\n";
}

RerankerWeights WeightsFromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RerankerWeights w;
    w.lambda = {j.at("unigram_overlap").get<double>(), j.at("bigram_overlap").get<double>(),
                j.at("trigram_overlap").get<double>(), j.at("length").get<double>()};
    for (double v : w.lambda) Require(std::isfinite(v), "parse-error", "non-finite reranker weight");
    return w;
  } catch (const nlohmann::json::exception& e) {
    Fail("parse-error", std::string("reranker weights: ") + e.what());
  }
}

}  // namespace nsum
