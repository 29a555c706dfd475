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

#ifndef NSUM_CORPUS_IO_HPP_
#define NSUM_CORPUS_IO_HPP_

#include <string>
#include <vector>

#include "nsum/datagen.hpp"
#include "nsum/text.hpp"

namespace nsum {

// JSON Lines corpus: one object per line with fields
//   id, sentences, highlights?, labels?, entities?, mentions?
// Sentences and highlights are arrays of token arrays, or arrays of raw
// strings (tokenized case-preserving, one sentence per string). A "text"
// field holding a whole raw article is split into sentences instead.
std::vector<Document> ReadCorpus(const std::string& path);
void WriteCorpus(const std::string& path, const std::vector<Document>& docs);

Document ParseDocumentJson(const std::string& line);
std::string DocumentToJson(const Document& doc);

// Summaries file: {"id": ..., "tokens": [...]} per line.
struct Summary {
  std::string id;
  std::vector<std::string> tokens;
};
std::vector<Summary> ReadSummaries(const std::string& path);
void WriteSummaries(const std::string& path, const std::vector<Summary>& summaries);

// Reference sets, one JSON object per line. A "references" array holds
// one entry per reference summary (a token array, or a raw string that is
// tokenized and lowercased). Without it, the concatenated "highlights" of
// a corpus-format line form the single reference.
struct ReferenceSet {
  std::string id;
  std::vector<std::vector<std::string>> references;
};
std::vector<ReferenceSet> ReadReferences(const std::string& path);

// Word-extraction examples: {id, sentences, target, substitutions} per line.
std::vector<WordExtractionExample> ReadWordExamples(const std::string& path);
void WriteWordExamples(const std::string& path, const std::vector<WordExtractionExample>& examples);

std::vector<std::string> ReadLines(const std::string& path);
void WriteText(const std::string& path, const std::string& text);

}  // namespace nsum

#endif  // NSUM_CORPUS_IO_HPP_
