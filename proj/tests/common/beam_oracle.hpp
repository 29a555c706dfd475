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

// Toy decoder with history-dependent random distributions, and a
// brute-force search over every sequence it can emit.

#ifndef NSUM_TESTS_BEAM_ORACLE_HPP_
#define NSUM_TESTS_BEAM_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "nsum/beam.hpp"
#include "nsum/rng.hpp"

namespace nsum::testing {

class ToyMarkovModel {
 public:
  using State = std::vector<std::size_t>;  // the prefix so far

  ToyMarkovModel(std::size_t support, std::uint64_t seed) : support_(support), seed_(seed) {}

  std::size_t end_token() const { return support_ - 1; }
  State initial() const { return {}; }
  State advance(const State& s, std::size_t token) const {
    State next = s;
    next.push_back(token);
    return next;
  }

  std::vector<double> log_probs(const State& s) const {
    std::uint64_t h = seed_;
    for (std::size_t t : s) h = h * 1000003u + t + 1;
    RngStream rng(h);
    std::vector<double> logits(support_);
    for (auto& u : logits) u = rng.uniform(-3.0, 3.0);
    const double m = *std::max_element(logits.begin(), logits.end());
    double z = 0;
    for (double u : logits) z += std::exp(u - m);
    for (auto& u : logits) u -= m + std::log(z);
    return logits;
  }

  double score(const std::vector<std::size_t>& tokens) const {
    double total = 0;
    State s;
    for (std::size_t t : tokens) {
      total += log_probs(s)[t];
      s.push_back(t);
    }
    return total;
  }

 private:
  std::size_t support_;
  std::uint64_t seed_;
};

// Every sequence that ends with the end token or reaches max_len, ranked
// like the beam's final candidates.
template <typename Model>
BeamCandidate EnumerateBest(Model& model, std::size_t max_len) {
  BeamCandidate best;
  bool have = false;
  auto better = [](const BeamCandidate& x, const BeamCandidate& y) {
    if (x.normalized() != y.normalized()) return x.normalized() > y.normalized();
    if (x.logprob != y.logprob) return x.logprob > y.logprob;
    return x.tokens < y.tokens;
  };
  std::vector<BeamCandidate> stack = {BeamCandidate{}};
  while (!stack.empty()) {
    BeamCandidate prefix = std::move(stack.back());
    stack.pop_back();
    const auto lp = model.log_probs(prefix.tokens);
    for (std::size_t j = 0; j < lp.size(); ++j) {
      BeamCandidate next = prefix;
      next.tokens.push_back(j);
      next.logprob = prefix.logprob + lp[j];
      if (j == model.end_token() || next.tokens.size() == max_len) {
        next.finished = j == model.end_token();
        if (!have || better(next, best)) best = next, have = true;
      } else {
        stack.push_back(std::move(next));
      }
    }
  }
  return best;
}

}  // namespace nsum::testing

#endif  // NSUM_TESTS_BEAM_ORACLE_HPP_
