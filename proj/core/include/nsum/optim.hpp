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

#ifndef NSUM_OPTIM_HPP_
#define NSUM_OPTIM_HPP_

#include <cstdint>
#include <vector>

#include "nsum/tape.hpp"

namespace nsum {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.99;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second moment per parameter plus the shared step counter.
template <typename T>
struct AdamState {
  AdamConfig config;
  std::vector<Tensor<T>> m;
  std::vector<Tensor<T>> v;
  std::uint64_t t = 0;
};

template <typename T>
AdamState<T> MakeAdamState(const ParameterSet<T>& params, const AdamConfig& config = {});

// One bias-corrected Adam update. Every gradient is checked first; a
// non-finite entry signals "non-finite-gradient" and leaves params and
// state untouched.
template <typename T>
void AdamStep(ParameterSet<T>& params, AdamState<T>& state);

}  // namespace nsum

#endif  // NSUM_OPTIM_HPP_
