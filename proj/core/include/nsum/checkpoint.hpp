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

#ifndef NSUM_CHECKPOINT_HPP_
#define NSUM_CHECKPOINT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "nsum/config.hpp"
#include "nsum/optim.hpp"
#include "nsum/tape.hpp"
#include "nsum/text.hpp"

namespace nsum {

inline constexpr char kCheckpointMagic[8] = {'N', 'S', 'U', 'M', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout: 8 magic bytes, u32 version, u32 header length, a JSON header
// (kind, config, vocabulary, epoch, RNG state, loss history, tensor
// manifest), then every parameter, Adam first moment and Adam second
// moment as little-endian float32 in manifest order.
struct Checkpoint {
  std::string kind;  // "sentence-extractor" or "word-extractor"
  RunConfig config;
  Vocabulary vocab;
  std::size_t epoch = 0;  // completed epochs
  std::string rng_state;
  std::vector<double> loss_history;
  ParameterSet<float> params;
  AdamState<float> adam;
};

std::string SerializeCheckpoint(const Checkpoint& ckpt);
Checkpoint DeserializeCheckpoint(const std::string& bytes);
void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);

// Copies tensors into a model's parameter set; names and shapes must match
// exactly or "checkpoint-mismatch" is signaled.
void RestoreParameters(const ParameterSet<float>& saved, ParameterSet<float>& target);

}  // namespace nsum

#endif  // NSUM_CHECKPOINT_HPP_
