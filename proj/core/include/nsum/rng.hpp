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

#ifndef NSUM_RNG_HPP_
#define NSUM_RNG_HPP_

#include <cstdint>
#include <random>
#include <string>

namespace nsum {

// Portable random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; all derived draws are computed here
// from raw 64-bit words instead of std:: distributions, which differ
// between standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }
  static constexpr const char* kAlgorithm = "mt19937_64";

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n); unbiased.
  std::uint64_t uniform_int(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  // Engine state + draw counter as text; restore() resumes the exact stream.
  std::string serialize() const;
  void restore(const std::string& state);

  // Derives an independent child stream (used to split init/data/dropout).
  RngStream fork();

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace nsum

#endif  // NSUM_RNG_HPP_
