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

#ifndef NSUM_CONFIG_HPP_
#define NSUM_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "nsum/encoder.hpp"
#include "nsum/optim.hpp"
#include "nsum/text.hpp"

namespace nsum {

struct RunConfig {
  ModelDims dims;
  AdamConfig adam;
  std::size_t batch_size = 20;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  double clip_norm = 5.0;
  std::size_t noise_samples = 20;
  std::size_t top_k = 3;
  std::size_t beam_width = 5;
  std::size_t max_len = 30;
  std::size_t min_count = 1;
  int num_entities = 200;
  BatchLimits limits;
  double curriculum_fraction = 0.5;
  bool teacher_forcing = false;
  bool permute_entities = true;
  bool feed_attention = false;

  // Signals "invalid-config" naming the offending key.
  void validate() const;

  // Sets one key from its text form; unknown keys and malformed values
  // signal "invalid-config".
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_map() const;

  // "key = value" lines; blank lines and '#' comments are ignored.
  static RunConfig FromText(const std::string& text);
  static RunConfig FromFile(const std::string& path);
  std::string to_text() const;
};

}  // namespace nsum

#endif  // NSUM_CONFIG_HPP_
