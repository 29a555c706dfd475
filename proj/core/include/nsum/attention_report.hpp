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

#ifndef NSUM_ATTENTION_REPORT_HPP_
#define NSUM_ATTENTION_REPORT_HPP_

#include <string>
#include <vector>

#include "nsum/error.hpp"
#include "nsum/text.hpp"

namespace nsum {

struct SentenceHeat {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::vector<double> scores;  // one probability per sentence
};

// Shade intensity in [0, 255] for a probability; the scale is absolute so
// equal scores always get equal shading.
int ShadeLevel(double score);

std::string RenderHeatHtml(const std::vector<SentenceHeat>& docs);
std::string RenderHeatText(const std::vector<SentenceHeat>& docs);

}  // namespace nsum

#endif  // NSUM_ATTENTION_REPORT_HPP_
