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

#include "nsum/rng.hpp"

#include <sstream>

#include "nsum/error.hpp"

namespace nsum {

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RngStream::next_u64() {
  ++draws_;
  return engine_();
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  Require(n > 0, "invalid-argument", "uniform_int needs n > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % n;
}

std::string RngStream::serialize() const {
  std::ostringstream out;
  out << seed_ << ' ' << draws_ << ' ' << engine_;
  return out.str();
}

void RngStream::restore(const std::string& state) {
  std::istringstream in(state);
  in >> seed_ >> draws_ >> engine_;
  Require(!in.fail(), "parse-error", "malformed rng state");
}

RngStream RngStream::fork() {
  // splitmix64 finalizer over a fresh draw keeps children decorrelated.
  std::uint64_t z = next_u64() + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return RngStream(z ^ (z >> 31));
}

}  // namespace nsum
