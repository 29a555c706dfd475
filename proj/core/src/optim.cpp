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

#include "nsum/optim.hpp"

#include <cmath>

namespace nsum {

template <typename T>
AdamState<T> MakeAdamState(const ParameterSet<T>& params, const AdamConfig& config) {
  AdamState<T> state;
  state.config = config;
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m.emplace_back(params[i].value.shape);
    state.v.emplace_back(params[i].value.shape);
  }
  return state;
}

template <typename T>
void AdamStep(ParameterSet<T>& params, AdamState<T>& state) {
  Require(state.m.size() == params.size() && state.v.size() == params.size(), "shape-error",
          "optimizer state does not match parameter set");
  for (std::size_t i = 0; i < params.size(); ++i) {
    Require(state.m[i].shape == params[i].value.shape, "shape-error",
            "optimizer moment shape mismatch for " + params[i].name);
    if (!params[i].grad.all_finite())
      Fail("non-finite-gradient", "gradient of " + params[i].name + " contains NaN or Inf");
  }
  state.t += 1;
  const auto& c = state.config;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
  const T b1 = static_cast<T>(c.beta1);
  const T b2 = static_cast<T>(c.beta2);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& value = params[i].value.data;
    const auto& grad = params[i].grad.data;
    auto& m = state.m[i].data;
    auto& v = state.v[i].data;
    for (std::size_t j = 0; j < value.size(); ++j) {
      const T g = grad[j];
      m[j] = b1 * m[j] + (T(1) - b1) * g;
      v[j] = b2 * v[j] + (T(1) - b2) * g * g;
      const double mhat = static_cast<double>(m[j]) / bc1;
      const double vhat = static_cast<double>(v[j]) / bc2;
      value[j] -= static_cast<T>(c.lr * mhat / (std::sqrt(vhat) + c.epsilon));
    }
  }
}

template AdamState<float> MakeAdamState(const ParameterSet<float>&, const AdamConfig&);
template AdamState<double> MakeAdamState(const ParameterSet<double>&, const AdamConfig&);
template void AdamStep(ParameterSet<float>&, AdamState<float>&);
template void AdamStep(ParameterSet<double>&, AdamState<double>&);

}  // namespace nsum
