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

#include "nsum/corpus_io.hpp"

#include <fstream>

#include "json.hpp"
#include "nsum/error.hpp"

namespace nsum {
namespace {

using nlohmann::json;

std::vector<Sentence> ParseSentences(const json& value) {
  std::vector<Sentence> out;
  for (const auto& item : value) {
    if (item.is_string()) {
      out.push_back(TokenizeSentence(item.get<std::string>(), {.lowercase = false}));
    } else {
      out.push_back(item.get<Sentence>());
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), "io-error", "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  return lines;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(out.good(), "io-error", "cannot write " + path);
  out << text;
}

Document ParseDocumentJson(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    Fail("parse-error", e.what());
  }
  try {
    Document doc;
    doc.id = j.value("id", std::string());
    if (j.contains("sentences")) {
      doc.sentences = ParseSentences(j["sentences"]);
    } else if (j.contains("text")) {
      doc.sentences = Tokenize(j["text"].get<std::string>(), {.lowercase = false});
    }
    if (j.contains("highlights")) doc.highlights = ParseSentences(j["highlights"]);
    if (j.contains("labels")) doc.labels = j["labels"].get<std::vector<int>>();
    if (j.contains("entities"))
      doc.entity_map = j["entities"].get<std::map<std::string, std::string>>();
    if (j.contains("mentions"))
      doc.mention_surfaces = j["mentions"].get<std::vector<std::vector<std::string>>>();
    ValidateDocument(doc);
    return doc;
  } catch (const json::exception& e) {
    Fail("parse-error", e.what());
  }
}

std::string DocumentToJson(const Document& doc) {
  json j;
  j["id"] = doc.id;
  j["sentences"] = doc.sentences;
  if (doc.highlights) j["highlights"] = *doc.highlights;
  if (doc.labels) j["labels"] = *doc.labels;
  if (!doc.entity_map.empty()) j["entities"] = doc.entity_map;
  if (!doc.mention_surfaces.empty()) j["mentions"] = doc.mention_surfaces;
  return j.dump();
}

std::vector<Document> ReadCorpus(const std::string& path) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  for (const auto& line : ReadLines(path)) {
    ++line_no;
    try {
      docs.push_back(ParseDocumentJson(line));
    } catch (const Error& e) {
      Fail(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

void WriteCorpus(const std::string& path, const std::vector<Document>& docs) {
  std::string text;
  for (const auto& d : docs) text += DocumentToJson(d) + "\n";
  WriteText(path, text);
}

std::vector<Summary> ReadSummaries(const std::string& path) {
  std::vector<Summary> out;
  for (const auto& line : ReadLines(path)) {
    try {
      const json j = json::parse(line);
      out.push_back({j.at("id").get<std::string>(), j.at("tokens").get<std::vector<std::string>>()});
    } catch (const json::exception& e) {
      Fail("parse-error", path + ": " + e.what());
    }
  }
  return out;
}

void WriteSummaries(const std::string& path, const std::vector<Summary>& summaries) {
  std::string text;
  for (const auto& s : summaries) text += json{{"id", s.id}, {"tokens", s.tokens}}.dump() + "\n";
  WriteText(path, text);
}

std::vector<ReferenceSet> ReadReferences(const std::string& path) {
  std::vector<ReferenceSet> out;
  for (const auto& line : ReadLines(path)) {
    try {
      const json j = json::parse(line);
      ReferenceSet set;
      set.id = j.at("id").get<std::string>();
      if (j.contains("references")) {
        for (const auto& ref : j["references"]) {
          std::vector<std::string> tokens;
          if (ref.is_string()) {
            for (auto& s : Tokenize(ref.get<std::string>())) tokens.insert(tokens.end(), s.begin(), s.end());
          } else {
            for (const auto& item : ref) {
              if (item.is_string()) {
                tokens.push_back(item.get<std::string>());
              } else {
                for (const auto& t : item) tokens.push_back(t.get<std::string>());
              }
            }
          }
          set.references.push_back(std::move(tokens));
        }
      } else {
        const Document doc = ParseDocumentJson(line);
        Require(doc.highlights.has_value(), "missing-references", "document " + doc.id + " has no highlights");
        std::vector<std::string> tokens;
        for (const auto& h : *doc.highlights) tokens.insert(tokens.end(), h.begin(), h.end());
        set.references.push_back(std::move(tokens));
      }
      out.push_back(std::move(set));
    } catch (const json::exception& e) {
      Fail("parse-error", path + ": " + e.what());
    }
  }
  return out;
}

std::vector<WordExtractionExample> ReadWordExamples(const std::string& path) {
  std::vector<WordExtractionExample> out;
  std::size_t line_no = 0;
  for (const auto& line : ReadLines(path)) {
    ++line_no;
    try {
      const json j = json::parse(line);
      WordExtractionExample ex;
      ex.id = j.at("id").get<std::string>();
      ex.sentences = j.at("sentences").get<std::vector<Sentence>>();
      for (const auto& s : ex.sentences) ex.document_tokens.insert(ex.document_tokens.end(), s.begin(), s.end());
      ex.target = j.at("target").get<std::vector<std::string>>();
      if (j.contains("substitutions"))
        for (const auto& sub : j["substitutions"])
          ex.substitutions.push_back({sub.at("original").get<std::string>(),
                                      sub.at("replacement").get<std::string>(),
                                      sub.at("cosine").get<double>(), sub.at("kind").get<std::string>()});
      out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      Fail("parse-error", path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void WriteWordExamples(const std::string& path, const std::vector<WordExtractionExample>& examples) {
  std::string text;
  for (const auto& ex : examples) {
    json subs = json::array();
    for (const auto& s : ex.substitutions)
      subs.push_back({{"original", s.original}, {"replacement", s.replacement}, {"cosine", s.cosine}, {"kind", s.kind}});
    text += json{{"id", ex.id}, {"sentences", ex.sentences}, {"target", ex.target}, {"substitutions", subs}}.dump() + "\n";
  }
  WriteText(path, text);
}

}  // namespace nsum
