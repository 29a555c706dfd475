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

#ifndef NSUM_BEAM_HPP_
#define NSUM_BEAM_HPP_

#include <algorithm>
#include <cstddef>
#include <vector>

#include "nsum/error.hpp"

namespace nsum {

struct BeamOptions {
  std::size_t width = 5;
  std::size_t max_len = 30;
};

struct BeamCandidate {
  std::vector<std::size_t> tokens;  // includes the end token when finished
  double logprob = 0.0;
  bool finished = false;

  double normalized() const {
    return tokens.empty() ? logprob : logprob / static_cast<double>(tokens.size());
  }
};

// Model concept:
//   using State = ...;
//   State initial();
//   std::vector<double> log_probs(const State&);   // over the support
//   State advance(const State&, std::size_t token);
template <typename Model>
BeamCandidate GreedyDecode(Model& model, std::size_t end_token, std::size_t max_len) {
  BeamCandidate out;
  auto state = model.initial();
  for (std::size_t step = 0; step < max_len; ++step) {
    const std::vector<double> lp = model.log_probs(state);
    Require(!lp.empty(), "empty-support", "decoder support is empty");
    const std::size_t best =
        static_cast<std::size_t>(std::max_element(lp.begin(), lp.end()) - lp.begin());
    out.tokens.push_back(best);
    out.logprob += lp[best];
    if (best == end_token) {
      out.finished = true;
      break;
    }
    if (step + 1 < max_len) state = model.advance(state, best);
  }
  return out;
}

// Length-bounded beam search. Hypotheses are pruned by cumulative
// log-probability; the returned candidates are sorted by length-normalized
// log-probability (then raw log-probability, then token order). Width 1
// follows exactly the greedy path.
template <typename Model>
std::vector<BeamCandidate> BeamDecode(Model& model, std::size_t end_token, const BeamOptions& opts) {
  Require(opts.width >= 1, "invalid-argument", "beam width must be at least 1");
  using State = decltype(model.initial());
  struct Hyp {
    BeamCandidate cand;
    State state;
  };
  struct Expansion {
    std::size_t parent;
    std::size_t token;
    double logprob;
    double step_logprob;
  };
  std::vector<Hyp> alive;
  alive.push_back({BeamCandidate{}, model.initial()});
  std::vector<BeamCandidate> done;
  for (std::size_t step = 0; step < opts.max_len && !alive.empty(); ++step) {
    std::vector<Expansion> expansions;
    for (std::size_t a = 0; a < alive.size(); ++a) {
      const std::vector<double> lp = model.log_probs(alive[a].state);
      Require(!lp.empty(), "empty-support", "decoder support is empty");
      for (std::size_t j = 0; j < lp.size(); ++j)
        expansions.push_back({a, j, alive[a].cand.logprob + lp[j], lp[j]});
    }
    const std::size_t keep = std::min(opts.width, expansions.size());
    std::partial_sort(expansions.begin(), expansions.begin() + static_cast<std::ptrdiff_t>(keep),
                      expansions.end(), [](const Expansion& x, const Expansion& y) {
                        if (x.logprob != y.logprob) return x.logprob > y.logprob;
                        if (x.parent != y.parent) return x.parent < y.parent;
                        if (x.step_logprob != y.step_logprob) return x.step_logprob > y.step_logprob;
                        return x.token < y.token;
                      });
    std::vector<Hyp> next;
    for (std::size_t e = 0; e < keep; ++e) {
      const Expansion& x = expansions[e];
      BeamCandidate cand = alive[x.parent].cand;
      cand.tokens.push_back(x.token);
      cand.logprob = x.logprob;
      if (x.token == end_token || step + 1 == opts.max_len) {
        cand.finished = x.token == end_token;
        done.push_back(std::move(cand));
      } else {
        next.push_back({std::move(cand), model.advance(alive[x.parent].state, x.token)});
      }
    }
    alive = std::move(next);
  }
  std::stable_sort(done.begin(), done.end(), [](const BeamCandidate& x, const BeamCandidate& y) {
    if (x.normalized() != y.normalized()) return x.normalized() > y.normalized();
    if (x.logprob != y.logprob) return x.logprob > y.logprob;
    return x.tokens < y.tokens;
  });
  return done;
}

}  // namespace nsum

#endif  // NSUM_BEAM_HPP_
