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

#include "nsum/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nsum {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

void PutU32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

std::uint32_t GetU32(const std::string& in, std::size_t& pos) {
  Require(pos + 4 <= in.size(), "checkpoint-mismatch", "truncated checkpoint");
  std::uint32_t v;
  std::memcpy(&v, in.data() + pos, 4);
  pos += 4;
  return v;
}

void PutFloats(std::string& out, const std::vector<float>& v) {
  out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(float));
}

void GetFloats(const std::string& in, std::size_t& pos, std::vector<float>& v) {
  const std::size_t bytes = v.size() * sizeof(float);
  Require(pos + bytes <= in.size(), "checkpoint-mismatch", "truncated checkpoint payload");
  std::memcpy(v.data(), in.data() + pos, bytes);
  pos += bytes;
}

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  nlohmann::json manifest = nlohmann::json::array();
  for (std::size_t i = 0; i < ckpt.params.size(); ++i)
    manifest.push_back({{"name", ckpt.params[i].name}, {"shape", ckpt.params[i].value.shape}});
  std::vector<std::size_t> reserved_counts;
  for (int i = 0; i < ckpt.vocab.num_reserved(); ++i) reserved_counts.push_back(ckpt.vocab.count(i));
  std::vector<std::string> tokens(ckpt.vocab.tokens().begin() + ckpt.vocab.num_reserved(),
                                  ckpt.vocab.tokens().end());
  std::vector<std::size_t> counts(ckpt.vocab.counts().begin() + ckpt.vocab.num_reserved(),
                                  ckpt.vocab.counts().end());
  const bool has_adam = ckpt.adam.m.size() == ckpt.params.size() && ckpt.params.size() > 0;
  nlohmann::json header{{"kind", ckpt.kind},
                        {"config", ckpt.config.to_map()},
                        {"vocab",
                         {{"num_entities", ckpt.vocab.num_entities()},
                          {"reserved_counts", reserved_counts},
                          {"tokens", tokens},
                          {"counts", counts}}},
                        {"epoch", ckpt.epoch},
                        {"rng", ckpt.rng_state},
                        {"loss_history", ckpt.loss_history},
                        {"adam_t", ckpt.adam.t},
                        {"has_adam", has_adam},
                        {"tensors", manifest}};
  const std::string text = header.dump();
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  PutU32(out, kCheckpointVersion);
  PutU32(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  for (std::size_t i = 0; i < ckpt.params.size(); ++i) PutFloats(out, ckpt.params[i].value.data);
  if (has_adam) {
    for (const auto& m : ckpt.adam.m) PutFloats(out, m.data);
    for (const auto& v : ckpt.adam.v) PutFloats(out, v.data);
  }
  return out;
}

Checkpoint DeserializeCheckpoint(const std::string& bytes) {
  Require(bytes.size() >= sizeof(kCheckpointMagic) + 8 &&
              std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) == 0,
          "checkpoint-mismatch", "not a checkpoint file (bad magic)");
  std::size_t pos = sizeof(kCheckpointMagic);
  const std::uint32_t version = GetU32(bytes, pos);
  Require(version == kCheckpointVersion, "checkpoint-mismatch",
          "unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t header_len = GetU32(bytes, pos);
  Require(pos + header_len <= bytes.size(), "checkpoint-mismatch", "truncated checkpoint header");
  Checkpoint ckpt;
  try {
    const auto header = nlohmann::json::parse(bytes.substr(pos, header_len));
    pos += header_len;
    ckpt.kind = header.at("kind").get<std::string>();
    RunConfig cfg;
    for (const auto& [k, v] : header.at("config").get<std::map<std::string, std::string>>()) cfg.set(k, v);
    cfg.validate();
    ckpt.config = cfg;
    const auto& vj = header.at("vocab");
    Vocabulary vocab(vj.at("num_entities").get<int>());
    const auto reserved = vj.at("reserved_counts").get<std::vector<std::size_t>>();
    Require(reserved.size() == static_cast<std::size_t>(vocab.num_reserved()), "checkpoint-mismatch",
            "reserved vocabulary size differs");
    for (std::size_t i = 0; i < reserved.size(); ++i) vocab.set_count(static_cast<int>(i), reserved[i]);
    const auto tokens = vj.at("tokens").get<std::vector<std::string>>();
    const auto counts = vj.at("counts").get<std::vector<std::size_t>>();
    Require(tokens.size() == counts.size(), "checkpoint-mismatch", "vocabulary counts differ");
    for (std::size_t i = 0; i < tokens.size(); ++i) vocab.add(tokens[i], counts[i]);
    ckpt.vocab = std::move(vocab);
    ckpt.epoch = header.at("epoch").get<std::size_t>();
    ckpt.rng_state = header.at("rng").get<std::string>();
    ckpt.loss_history = header.at("loss_history").get<std::vector<double>>();
    for (const auto& t : header.at("tensors"))
      ckpt.params.add(t.at("name").get<std::string>(), t.at("shape").get<Shape>());
    for (std::size_t i = 0; i < ckpt.params.size(); ++i) GetFloats(bytes, pos, ckpt.params[i].value.data);
    ckpt.adam = MakeAdamState(ckpt.params);
    ckpt.adam.config = cfg.adam;
    ckpt.adam.t = header.at("adam_t").get<std::uint64_t>();
    if (header.at("has_adam").get<bool>()) {
      for (auto& m : ckpt.adam.m) GetFloats(bytes, pos, m.data);
      for (auto& v : ckpt.adam.v) GetFloats(bytes, pos, v.data);
    }
  } catch (const nlohmann::json::exception& e) {
    Fail("checkpoint-mismatch", std::string("malformed checkpoint header: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == "checkpoint-mismatch") throw;
    Fail("checkpoint-mismatch", e.what());
  }
  Require(pos == bytes.size(), "checkpoint-mismatch", "trailing bytes after checkpoint payload");
  return ckpt;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  const std::string bytes = SerializeCheckpoint(ckpt);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    Require(out.good(), "io-error", "cannot write " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    Require(out.good(), "io-error", "short write to " + tmp);
  }
  Require(std::rename(tmp.c_str(), path.c_str()) == 0, "io-error", "cannot move checkpoint to " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), "io-error", "cannot read checkpoint " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return DeserializeCheckpoint(ss.str());
}

void RestoreParameters(const ParameterSet<float>& saved, ParameterSet<float>& target) {
  Require(saved.size() == target.size(), "checkpoint-mismatch",
          "checkpoint holds " + std::to_string(saved.size()) + " tensors, model expects " +
              std::to_string(target.size()));
  for (std::size_t i = 0; i < saved.size(); ++i) {
    Require(saved[i].name == target[i].name && saved[i].value.shape == target[i].value.shape,
            "checkpoint-mismatch",
            "tensor " + target[i].name + " " + ShapeString(target[i].value.shape) +
                " does not match checkpoint " + saved[i].name + " " + ShapeString(saved[i].value.shape));
    target[i].value.data = saved[i].value.data;
  }
}

}  // namespace nsum
