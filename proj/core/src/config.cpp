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

#include "nsum/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nsum {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename Int>
Int ParseInt(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  Require(ec == std::errc() && ptr == v.data() + v.size(), "invalid-config",
          key + ": expected an integer, got '" + v + "'");
  return out;
}

double ParseReal(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  Require(used == v.size() && !v.empty(), "invalid-config", key + ": expected a number, got '" + v + "'");
  return out;
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  Fail("invalid-config", key + ": expected a boolean, got '" + v + "'");
}

std::string Real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Check(bool ok, const std::string& key, const std::string& what) {
  Require(ok, "invalid-config", key + " " + what);
}

}  // namespace

void RunConfig::validate() const {
  dims.validate();
  Check(adam.lr > 0.0 && adam.lr < 1.0, "lr", "must lie in (0, 1)");
  Check(adam.beta1 >= 0.0 && adam.beta1 < 1.0, "beta1", "must lie in [0, 1)");
  Check(adam.beta2 >= 0.0 && adam.beta2 < 1.0, "beta2", "must lie in [0, 1)");
  Check(adam.epsilon > 0.0, "epsilon", "must be positive");
  Check(batch_size >= 1, "batch_size", "must be at least 1");
  Check(epochs >= 1 && epochs <= 100000, "epochs", "must lie in [1, 100000]");
  Check(clip_norm > 0.0, "clip_norm", "must be positive");
  Check(noise_samples >= 1, "noise_samples", "must be at least 1");
  Check(top_k >= 1, "top_k", "must be at least 1");
  Check(beam_width >= 1, "beam_width", "must be at least 1");
  Check(max_len >= 1, "max_len", "must be at least 1");
  Check(min_count >= 1, "min_count", "must be at least 1");
  Check(num_entities >= 1, "num_entities", "must be at least 1");
  Check(limits.max_sentences >= 1, "max_sentences", "must be at least 1");
  Check(limits.max_words >= 1, "max_words", "must be at least 1");
  Check(curriculum_fraction >= 0.0 && curriculum_fraction <= 1.0, "curriculum_fraction",
        "must lie in [0, 1]");
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = Trim(raw);
  if (key == "word_dim") dims.word_dim = ParseInt<std::size_t>(key, v);
  else if (key == "sentence_dim") dims.sentence_dim = ParseInt<std::size_t>(key, v);
  else if (key == "hidden_dim") dims.hidden_dim = ParseInt<std::size_t>(key, v);
  else if (key == "mlp_dim") dims.mlp_dim = ParseInt<std::size_t>(key, v);
  else if (key == "attention_dim") dims.attention_dim = ParseInt<std::size_t>(key, v);
  else if (key == "kernel_widths") {
    std::vector<std::size_t> widths;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) widths.push_back(ParseInt<std::size_t>(key, Trim(item)));
    dims.kernel_widths = widths;
  } else if (key == "dropout") dims.dropout = ParseReal(key, v);
  else if (key == "init_range") dims.init_range = ParseReal(key, v);
  else if (key == "lr") adam.lr = ParseReal(key, v);
  else if (key == "beta1") adam.beta1 = ParseReal(key, v);
  else if (key == "beta2") adam.beta2 = ParseReal(key, v);
  else if (key == "epsilon") adam.epsilon = ParseReal(key, v);
  else if (key == "batch_size") batch_size = ParseInt<std::size_t>(key, v);
  else if (key == "epochs") epochs = ParseInt<std::size_t>(key, v);
  else if (key == "seed") seed = ParseInt<std::uint64_t>(key, v);
  else if (key == "clip_norm") clip_norm = ParseReal(key, v);
  else if (key == "noise_samples") noise_samples = ParseInt<std::size_t>(key, v);
  else if (key == "top_k") top_k = ParseInt<std::size_t>(key, v);
  else if (key == "beam_width") beam_width = ParseInt<std::size_t>(key, v);
  else if (key == "max_len") max_len = ParseInt<std::size_t>(key, v);
  else if (key == "min_count") min_count = ParseInt<std::size_t>(key, v);
  else if (key == "num_entities") num_entities = ParseInt<int>(key, v);
  else if (key == "max_sentences") limits.max_sentences = ParseInt<std::size_t>(key, v);
  else if (key == "max_words") limits.max_words = ParseInt<std::size_t>(key, v);
  else if (key == "curriculum_fraction") curriculum_fraction = ParseReal(key, v);
  else if (key == "teacher_forcing") teacher_forcing = ParseBool(key, v);
  else if (key == "permute_entities") permute_entities = ParseBool(key, v);
  else if (key == "feed_attention") feed_attention = ParseBool(key, v);
  else Fail("invalid-config", "unknown key: " + key);
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::string widths;
  for (std::size_t c : dims.kernel_widths) widths += (widths.empty() ? "" : ",") + std::to_string(c);
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  return {{"word_dim", std::to_string(dims.word_dim)},
          {"sentence_dim", std::to_string(dims.sentence_dim)},
          {"hidden_dim", std::to_string(dims.hidden_dim)},
          {"mlp_dim", std::to_string(dims.mlp_dim)},
          {"attention_dim", std::to_string(dims.attention_dim)},
          {"kernel_widths", widths},
          {"dropout", Real(dims.dropout)},
          {"init_range", Real(dims.init_range)},
          {"lr", Real(adam.lr)},
          {"beta1", Real(adam.beta1)},
          {"beta2", Real(adam.beta2)},
          {"epsilon", Real(adam.epsilon)},
          {"batch_size", std::to_string(batch_size)},
          {"epochs", std::to_string(epochs)},
          {"seed", std::to_string(seed)},
          {"clip_norm", Real(clip_norm)},
          {"noise_samples", std::to_string(noise_samples)},
          {"top_k", std::to_string(top_k)},
          {"beam_width", std::to_string(beam_width)},
          {"max_len", std::to_string(max_len)},
          {"min_count", std::to_string(min_count)},
          {"num_entities", std::to_string(num_entities)},
          {"max_sentences", std::to_string(limits.max_sentences)},
          {"max_words", std::to_string(limits.max_words)},
          {"curriculum_fraction", Real(curriculum_fraction)},
          {"teacher_forcing", b(teacher_forcing)},
          {"permute_entities", b(permute_entities)},
          {"feed_attention", b(feed_attention)}};
}

RunConfig RunConfig::FromText(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    Require(eq != std::string::npos, "invalid-config",
            "line " + std::to_string(number) + ": expected key = value");
    cfg.set(Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), "io-error", "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return FromText(ss.str());
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : to_map()) out += k + " = " + v + "\n";
  return out;
}

}  // namespace nsum
