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

#ifndef NSUM_TEXT_HPP_
#define NSUM_TEXT_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nsum/rng.hpp"

namespace nsum {

using Sentence = std::vector<std::string>;

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::optional<std::vector<Sentence>> highlights;
  std::optional<std::vector<int>> labels;
  // entityK -> canonical surface (first mention).
  std::map<std::string, std::string> entity_map;
  // Original surface of every anonymized token, aligned with sentences
  // (empty string where the token was not replaced). Empty when the
  // document was never anonymized here.
  std::vector<std::vector<std::string>> mention_surfaces;
  std::vector<std::vector<std::string>> highlight_mention_surfaces;
};

// Checks label length and entity-marker coverage; signals "invalid-document".
void ValidateDocument(const Document& doc);

// ---------------------------------------------------------------------------
// Tokenization

struct TokenizeOptions {
  bool lowercase = true;
};

inline constexpr std::string_view kNumToken = "<num>";

// Splits raw text into sentences of tokens. Newlines always end a
// sentence; '.', '!' and '?' end one when followed by an upper-case
// letter, digit, quote, or the end of the line. Known abbreviations and
// single-letter initials keep their period. Numbers become <num>; currency
// and percent signs are separate tokens.
std::vector<Sentence> Tokenize(std::string_view text, const TokenizeOptions& options = {});

// Tokenizes a single sentence without splitting.
Sentence TokenizeSentence(std::string_view text, const TokenizeOptions& options = {});

std::string Lowercase(std::string_view s);
bool IsEntityMarker(std::string_view token);
int EntityIndex(std::string_view marker);  // -1 if not a marker
std::string EntityMarker(int index);

// Frequent function words. Doubles as the word extractor's stop-word list
// and as the "never an entity at sentence start" list.
const std::vector<std::string>& StopWords();
bool IsStopWord(std::string_view lower_token);

// ---------------------------------------------------------------------------
// Entities

// Replaces maximal runs of capitalized tokens with entityK markers, K in
// order of first mention. A run equal to, or a contiguous part of, an
// earlier entity reuses that entity's marker. Highlights share the
// document's markers. Expects case-preserving tokens.
Document AnonymizeEntities(const Document& doc);

// Restores the original tokens from mention_surfaces (or entity_map when
// no per-mention record exists).
std::vector<Sentence> DeanonymizeSentences(const Document& doc);

// Applies a uniformly random bijection over the markers that occur in the
// document (sentences and highlights); entity_map is renamed to match.
Document PermuteEntityIndices(const Document& doc, RngStream& rng);

// Lowercases every token except entity markers.
Document LowercaseDocument(const Document& doc);

// ---------------------------------------------------------------------------
// Vocabulary

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kStart = 2;
  static constexpr int kEnd = 3;
  static constexpr int kFirstEntity = 4;

  explicit Vocabulary(int num_entities = 200);

  int num_entities() const { return num_entities_; }
  int num_reserved() const { return kFirstEntity + num_entities_; }
  std::size_t size() const { return tokens_.size(); }

  // Returns the existing id or appends the token.
  int add(const std::string& token, std::size_t count = 0);
  int id(std::string_view token) const;  // kUnk when absent
  bool contains(std::string_view token) const;
  const std::string& token(int id) const;
  std::size_t count(int id) const { return counts_.at(static_cast<std::size_t>(id)); }
  void set_count(int id, std::size_t count) { counts_.at(static_cast<std::size_t>(id)) = count; }
  bool is_reserved(int id) const { return id < num_reserved(); }
  bool is_entity(int id) const { return id >= kFirstEntity && id < num_reserved(); }

  std::vector<int> encode(const Sentence& tokens) const;
  Sentence decode(const std::vector<int>& ids) const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::size_t>& counts() const { return counts_; }

 private:
  int num_entities_;
  std::vector<std::string> tokens_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, int> index_;
};

// Tokens of the corpus (sentences and highlights) with frequency >=
// min_count, ordered by descending frequency then token. Reserved symbols
// come first; entity markers are always reserved. Counts of reserved
// symbols record their corpus frequency as well.
Vocabulary BuildVocab(const std::vector<Document>& corpus, std::size_t min_count,
                      int num_entities = 200);

// Token -> raw frequency over sentences and highlights.
std::map<std::string, std::size_t> CountTokens(const std::vector<Document>& corpus);

// ---------------------------------------------------------------------------
// Embeddings

struct EmbeddingTable {
  std::size_t dim = 0;
  std::vector<float> values;      // vocab.size() x dim, row-major
  std::vector<bool> pretrained;   // per row
  double coverage = 0.0;          // pretrained fraction of non-reserved rows

  std::size_t rows() const { return dim ? values.size() / dim : 0; }
  const float* row(std::size_t r) const { return values.data() + r * dim; }
  float* row(std::size_t r) { return values.data() + r * dim; }
};

// Rows uniform in [-0.05, 0.05]; the PAD row is zero.
EmbeddingTable RandomEmbeddings(const Vocabulary& vocab, std::size_t dim, RngStream& rng);

// Reads "token v1 ... vd" lines (an optional "count dim" header is
// skipped). Vocabulary rows found in the file are copied; the rest stay
// random. Signals "parse-error" (with line number) and "dim-mismatch".
EmbeddingTable LoadEmbeddings(const std::string& path, const Vocabulary& vocab,
                              std::size_t dim, RngStream& rng);

// ---------------------------------------------------------------------------
// Batching

struct EncodedDocument {
  std::string id;
  std::vector<std::vector<int>> sentences;
  std::vector<int> labels;  // empty when unlabeled
};

EncodedDocument EncodeDocument(const Document& doc, const Vocabulary& vocab);

struct BatchLimits {
  std::size_t max_sentences = 30;
  std::size_t max_words = 50;
};

struct Batch {
  std::size_t docs = 0;
  std::size_t max_sentences = 0;
  std::size_t max_words = 0;
  std::vector<int> word_ids;              // docs x max_sentences x max_words
  std::vector<bool> sentence_mask;        // docs x max_sentences
  std::vector<bool> word_mask;            // docs x max_sentences x max_words
  std::vector<std::size_t> sentence_counts;  // per doc
  std::vector<std::size_t> word_counts;      // docs x max_sentences

  std::size_t word_index(std::size_t d, std::size_t s, std::size_t w) const {
    return (d * max_sentences + s) * max_words + w;
  }
  std::size_t sentence_index(std::size_t d, std::size_t s) const { return d * max_sentences + s; }
};

Batch PadBatch(const std::vector<EncodedDocument>& docs, const BatchLimits& limits = {});

// Truncates a document to the batch limits (same policy as PadBatch).
EncodedDocument TruncateDocument(const EncodedDocument& doc, const BatchLimits& limits);

}  // namespace nsum

#endif  // NSUM_TEXT_HPP_
