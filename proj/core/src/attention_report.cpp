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

#include "nsum/attention_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nsum {
namespace {

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Join(const Sentence& s) {
  std::string out;
  for (const auto& t : s) out += (out.empty() ? "" : " ") + t;
  return out;
}

void CheckAligned(const SentenceHeat& d) {
  Require(d.sentences.size() == d.scores.size(), "shape-error",
          "score count differs from sentence count in " + d.doc_id);
}

}  // namespace

int ShadeLevel(double score) {
  return static_cast<int>(std::lround(std::clamp(score, 0.0, 1.0) * 255.0));
}

std::string RenderHeatHtml(const std::vector<SentenceHeat>& docs) {
  std::string out =
      "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Sentence scores</title>\n"
      "<style>body{font-family:serif;max-width:50em;margin:2em auto}"
      "p{margin:.2em 0;padding:.15em .4em}.s{font-family:monospace;color:#555}</style>\n"
      "</head><body>\n";
  for (const auto& d : docs) {
    CheckAligned(d);
    out += "<h2>" + Escape(d.doc_id) + "</h2>\n";
    for (std::size_t i = 0; i < d.sentences.size(); ++i) {
      char style[96];
      const int level = ShadeLevel(d.scores[i]);
      std::snprintf(style, sizeof(style), "background:rgb(255,%d,%d)", 255 - level, 255 - level);
      char score[32];
      std::snprintf(score, sizeof(score), "%.4f", d.scores[i]);
      out += "<p style=\"" + std::string(style) + "\" data-score=\"" + score + "\"><span class=\"s\">" +
             score + "</span> " + Escape(Join(d.sentences[i])) + "</p>\n";
    }
  }
  out += "</body></html>\n";
  return out;
}

std::string RenderHeatText(const std::vector<SentenceHeat>& docs) {
  std::string out;
  for (const auto& d : docs) {
    CheckAligned(d);
    out += "== " + d.doc_id + "\n";
    for (std::size_t i = 0; i < d.sentences.size(); ++i) {
      const int bars = static_cast<int>(std::lround(std::clamp(d.scores[i], 0.0, 1.0) * 10.0));
      char head[48];
      std::snprintf(head, sizeof(head), "%3zu %.4f %-10s ", i, d.scores[i], std::string(static_cast<std::size_t>(bars), '#').c_str());
      out += head + Join(d.sentences[i]) + "\n";
    }
  }
  return out;
}

}  // namespace nsum
