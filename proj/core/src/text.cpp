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

#include "nsum/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "nsum/error.hpp"

namespace nsum {
namespace {

const std::unordered_set<std::string>& Abbreviations() {
  static const std::unordered_set<std::string> kAbbrev = {
      "mr.",   "mrs.", "ms.",  "dr.",  "prof.", "sr.",  "jr.",   "st.",  "mt.",   "vs.",
      "etc.",  "inc.", "ltd.", "co.",  "corp.", "jan.", "feb.",  "mar.", "apr.",  "jun.",
      "jul.",  "aug.", "sep.", "sept.", "oct.", "nov.", "dec.",  "gen.", "col.",  "lt.",
      "sgt.",  "rep.", "sen.", "gov.", "no.",  "fig.", "approx.", "dept.", "est.", "ave."};
  return kAbbrev;
}

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsLower(char c) { return c >= 'a' && c <= 'z'; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsAlpha(char c) { return IsUpper(c) || IsLower(c); }

// "U.S.", "a.m.", "J." and listed abbreviations keep their final period.
bool KeepsPeriod(std::string_view chunk) {
  if (chunk.size() < 2 || chunk.back() != '.') return false;
  if (Abbreviations().count(Lowercase(chunk))) return true;
  bool dotted = chunk.size() % 2 == 0;
  for (std::size_t i = 0; dotted && i < chunk.size(); i += 2)
    dotted = IsAlpha(chunk[i]) && chunk[i + 1] == '.';
  return dotted;
}

bool IsNumber(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i >= s.size() || !IsDigit(s[i])) return false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (IsDigit(c) || c == ',' || c == '.' || c == ':' || c == '/') continue;
    return false;
  }
  return true;
}

// Replaces UTF-8 curly quotes and dashes with ASCII equivalents.
std::string NormalizeQuotes(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80) {
      const unsigned char c = static_cast<unsigned char>(text[i + 2]);
      if (c == 0x9C || c == 0x9D) { out += '"'; i += 2; continue; }
      if (c == 0x98 || c == 0x99) { out += '\''; i += 2; continue; }
      if (c == 0x93 || c == 0x94) { out += " -- "; i += 2; continue; }
    }
    out += text[i];
  }
  return out;
}

const std::string kOpeners = "\"'([{`$";
const std::string kTrailers = ".,;:!?\"')]}%";

void SplitChunk(std::string_view chunk, std::vector<std::string>& out) {
  while (!chunk.empty() && kOpeners.find(chunk.front()) != std::string::npos) {
    out.emplace_back(1, chunk.front());
    chunk.remove_prefix(1);
  }
  std::vector<std::string> trailing;
  while (!chunk.empty()) {
    if (chunk.size() >= 3 && chunk.substr(chunk.size() - 3) == "...") {
      trailing.emplace_back("...");
      chunk.remove_suffix(3);
      continue;
    }
    const char c = chunk.back();
    if (kTrailers.find(c) == std::string::npos) break;
    if (c == '.' && KeepsPeriod(chunk)) break;
    trailing.emplace_back(1, c);
    chunk.remove_suffix(1);
  }
  if (!chunk.empty()) {
    std::string core(chunk);
    const std::string lower = Lowercase(core);
    static const char* kClitics[] = {"'s", "'re", "'ve", "'ll", "'d", "'m"};
    bool split = false;
    if (lower.size() > 3 && lower.compare(lower.size() - 3, 3, "n't") == 0) {
      out.push_back(core.substr(0, core.size() - 3));
      out.push_back(core.substr(core.size() - 3));
      split = true;
    } else {
      for (const char* clitic : kClitics) {
        const std::size_t n = std::string_view(clitic).size();
        if (lower.size() > n && lower.compare(lower.size() - n, n, clitic) == 0) {
          out.push_back(core.substr(0, core.size() - n));
          out.push_back(core.substr(core.size() - n));
          split = true;
          break;
        }
      }
    }
    if (!split) out.push_back(core);
  }
  for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) out.push_back(*it);
}

struct RawTokens {
  std::vector<std::string> tokens;
  std::vector<bool> after_space;  // token begins a whitespace-delimited chunk
};

RawTokens SplitTokens(std::string_view line) {
  RawTokens raw;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) {
      const std::size_t before = raw.tokens.size();
      SplitChunk(line.substr(i, j - i), raw.tokens);
      raw.after_space.resize(raw.tokens.size(), false);
      if (raw.tokens.size() > before) raw.after_space[before] = true;
    }
    i = j;
  }
  return raw;
}

bool IsTerminal(const std::string& t) { return t == "." || t == "!" || t == "?"; }
bool IsCloser(const std::string& t) { return t == "\"" || t == "'" || t == ")" || t == "]"; }
bool StartsSentence(const std::string& t) {
  return !t.empty() && (IsUpper(t[0]) || IsDigit(t[0]) || t[0] == '"' || t[0] == '(' ||
                        t[0] == '\'' || t[0] == '[' || t[0] == '`');
}

std::string Finish(const std::string& token, const TokenizeOptions& options) {
  if (IsNumber(token)) return std::string(kNumToken);
  return options.lowercase ? Lowercase(token) : token;
}

}  // namespace

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsEntityMarker(std::string_view token) { return EntityIndex(token) >= 0; }

int EntityIndex(std::string_view marker) {
  constexpr std::string_view kPrefix = "entity";
  if (marker.size() <= kPrefix.size() || marker.substr(0, kPrefix.size()) != kPrefix) return -1;
  int value = 0;
  const auto digits = marker.substr(kPrefix.size());
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return -1;
  if (digits.size() > 1 && digits[0] == '0') return -1;
  return value;
}

std::string EntityMarker(int index) { return "entity" + std::to_string(index); }

const std::vector<std::string>& StopWords() {
  static const std::vector<std::string> kWords = {
      "a",     "about", "after", "again", "all",   "also",  "an",    "and",   "any",   "are",
      "as",    "at",    "be",    "been",  "before", "being", "but",   "by",    "can",   "could",
      "did",   "do",    "does",  "down",  "during", "each",  "for",   "from",  "had",   "has",
      "have",  "he",    "her",   "here",  "him",   "his",   "how",   "i",     "if",    "in",
      "into",  "is",    "it",    "its",   "just",  "last",  "many",  "more",  "most",  "much",
      "my",    "new",   "no",    "not",   "now",   "of",    "off",   "on",    "one",   "only",
      "or",    "other", "our",   "out",   "over",  "said",  "says",  "she",   "so",    "some",
      "than",  "that",  "the",   "their", "them",  "then",  "there", "these", "they",  "this",
      "those", "to",    "two",   "under", "up",    "us",    "very",  "was",   "we",    "were",
      "what",  "when",  "where", "which", "while", "who",   "will",  "with",  "would", "you",
      ",",     ".",     "'s",    "n't",   "<num>", "\"",    "--",    ":",     "'",     "?"};
  return kWords;
}

bool IsStopWord(std::string_view lower_token) {
  static const std::unordered_set<std::string_view> kSet = [] {
    std::unordered_set<std::string_view> s;
    for (const auto& w : StopWords()) s.insert(w);
    return s;
  }();
  return kSet.count(lower_token) > 0;
}

void ValidateDocument(const Document& doc) {
  if (doc.labels && doc.labels->size() != doc.sentences.size())
    Fail("invalid-document", doc.id + ": " + std::to_string(doc.labels->size()) +
                                 " labels for " + std::to_string(doc.sentences.size()) +
                                 " sentences");
  if (doc.entity_map.empty()) return;
  for (const auto& s : doc.sentences)
    for (const auto& t : s)
      if (IsEntityMarker(t) && !doc.entity_map.count(t))
        Fail("invalid-document", doc.id + ": marker " + t + " missing from entity map");
}

std::vector<Sentence> Tokenize(std::string_view text, const TokenizeOptions& options) {
  std::vector<Sentence> sentences;
  const std::string normalized = NormalizeQuotes(text);
  std::istringstream lines(normalized);
  std::string line;
  while (std::getline(lines, line)) {
    const RawTokens split = SplitTokens(line);
    const auto& raw = split.tokens;
    Sentence current;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      current.push_back(Finish(raw[i], options));
      if (!IsTerminal(raw[i])) continue;
      // Absorb a closing quote/bracket attached to the terminal.
      while (i + 1 < raw.size() && IsCloser(raw[i + 1]) && !split.after_space[i + 1] &&
             (i + 2 == raw.size() || StartsSentence(raw[i + 2]) || IsCloser(raw[i + 2]))) {
        current.push_back(Finish(raw[++i], options));
      }
      if (i + 1 == raw.size() || StartsSentence(raw[i + 1])) {
        sentences.push_back(std::move(current));
        current.clear();
      }
    }
    if (!current.empty()) sentences.push_back(std::move(current));
  }
  return sentences;
}

Sentence TokenizeSentence(std::string_view text, const TokenizeOptions& options) {
  Sentence out;
  for (const auto& t : SplitTokens(NormalizeQuotes(text)).tokens) out.push_back(Finish(t, options));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct EntityRecord {
  std::string marker;
  std::vector<std::string> tokens;
};

bool ContainsRun(const std::vector<std::string>& haystack, const std::vector<std::string>& run) {
  if (run.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), run.begin(), run.end()) != haystack.end();
}

bool Capitalized(const std::string& t) {
  return !t.empty() && IsUpper(t[0]) && t != "I" && !IsEntityMarker(t);
}

void AnonymizeSentences(std::vector<Sentence>& sentences,
                        std::vector<std::vector<std::string>>& surfaces,
                        std::vector<EntityRecord>& entities,
                        const std::unordered_set<std::string>& lowercase_seen) {
  surfaces.clear();
  for (auto& sentence : sentences) {
    std::size_t first_word = 0;
    while (first_word < sentence.size() && kOpeners.find(sentence[first_word][0]) != std::string::npos &&
           sentence[first_word].size() == 1)
      ++first_word;
    std::vector<bool> candidate(sentence.size(), false);
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (!Capitalized(sentence[i])) continue;
      if (i == first_word) {
        const std::string lower = Lowercase(sentence[i]);
        const bool run_follows = i + 1 < sentence.size() && Capitalized(sentence[i + 1]);
        if (IsStopWord(lower)) continue;
        if (!run_follows && lowercase_seen.count(lower)) continue;
      }
      candidate[i] = true;
    }
    Sentence rewritten;
    std::vector<std::string> surface;
    for (std::size_t i = 0; i < sentence.size();) {
      if (!candidate[i]) {
        rewritten.push_back(sentence[i]);
        surface.emplace_back();
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < sentence.size() && candidate[j]) ++j;
      std::vector<std::string> run(sentence.begin() + static_cast<std::ptrdiff_t>(i),
                                   sentence.begin() + static_cast<std::ptrdiff_t>(j));
      std::string marker;
      for (const auto& e : entities)
        if (ContainsRun(e.tokens, run)) {
          marker = e.marker;
          break;
        }
      if (marker.empty()) {
        marker = EntityMarker(static_cast<int>(entities.size()));
        entities.push_back({marker, run});
      }
      std::string joined;
      for (std::size_t k = 0; k < run.size(); ++k) joined += (k ? " " : "") + run[k];
      rewritten.push_back(marker);
      surface.push_back(joined);
      i = j;
    }
    sentence = std::move(rewritten);
    surfaces.push_back(std::move(surface));
  }
}

std::vector<Sentence> Restore(const std::vector<Sentence>& sentences,
                              const std::vector<std::vector<std::string>>& surfaces,
                              const std::map<std::string, std::string>& entity_map) {
  std::vector<Sentence> out;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    Sentence restored;
    for (std::size_t i = 0; i < sentences[s].size(); ++i) {
      const std::string& t = sentences[s][i];
      std::string surface;
      if (s < surfaces.size() && i < surfaces[s].size()) surface = surfaces[s][i];
      if (surface.empty() && IsEntityMarker(t)) {
        auto it = entity_map.find(t);
        if (it != entity_map.end()) surface = it->second;
      }
      if (surface.empty()) {
        restored.push_back(t);
        continue;
      }
      std::istringstream words(surface);
      std::string w;
      while (words >> w) restored.push_back(w);
    }
    out.push_back(std::move(restored));
  }
  return out;
}

std::vector<Sentence> RenameMarkers(const std::vector<Sentence>& sentences,
                                    const std::map<std::string, std::string>& rename) {
  std::vector<Sentence> out = sentences;
  for (auto& s : out)
    for (auto& t : s) {
      auto it = rename.find(t);
      if (it != rename.end()) t = it->second;
    }
  return out;
}

}  // namespace

Document AnonymizeEntities(const Document& doc) {
  Document out = doc;
  std::unordered_set<std::string> lowercase_seen;
  auto collect = [&](const std::vector<Sentence>& sentences) {
    for (const auto& s : sentences)
      for (const auto& t : s)
        if (!t.empty() && IsLower(t[0])) lowercase_seen.insert(t);
  };
  collect(doc.sentences);
  if (doc.highlights) collect(*doc.highlights);

  std::vector<EntityRecord> entities;
  AnonymizeSentences(out.sentences, out.mention_surfaces, entities, lowercase_seen);
  if (out.highlights)
    AnonymizeSentences(*out.highlights, out.highlight_mention_surfaces, entities, lowercase_seen);
  out.entity_map.clear();
  for (const auto& e : entities) {
    std::string joined;
    for (std::size_t k = 0; k < e.tokens.size(); ++k) joined += (k ? " " : "") + e.tokens[k];
    out.entity_map[e.marker] = joined;
  }
  return out;
}

std::vector<Sentence> DeanonymizeSentences(const Document& doc) {
  return Restore(doc.sentences, doc.mention_surfaces, doc.entity_map);
}

Document PermuteEntityIndices(const Document& doc, RngStream& rng) {
  std::set<int> present;
  auto collect = [&](const std::vector<Sentence>& sentences) {
    for (const auto& s : sentences)
      for (const auto& t : s)
        if (const int k = EntityIndex(t); k >= 0) present.insert(k);
  };
  collect(doc.sentences);
  if (doc.highlights) collect(*doc.highlights);
  std::vector<int> from(present.begin(), present.end());
  std::vector<int> to = from;
  for (std::size_t i = to.size(); i > 1; --i)
    std::swap(to[i - 1], to[rng.uniform_int(i)]);

  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < from.size(); ++i) rename[EntityMarker(from[i])] = EntityMarker(to[i]);

  Document out = doc;
  out.sentences = RenameMarkers(doc.sentences, rename);
  if (doc.highlights) out.highlights = RenameMarkers(*doc.highlights, rename);
  out.entity_map.clear();
  for (const auto& [marker, surface] : doc.entity_map) {
    auto it = rename.find(marker);
    out.entity_map[it == rename.end() ? marker : it->second] = surface;
  }
  return out;
}

Document LowercaseDocument(const Document& doc) {
  Document out = doc;
  auto lower = [](std::vector<Sentence>& sentences) {
    for (auto& s : sentences)
      for (auto& t : s)
        if (!IsEntityMarker(t)) t = Lowercase(t);
  };
  lower(out.sentences);
  if (out.highlights) lower(*out.highlights);
  return out;
}

// ---------------------------------------------------------------------------

Vocabulary::Vocabulary(int num_entities) : num_entities_(num_entities) {
  Require(num_entities >= 0, "invalid-argument", "negative entity count");
  for (const char* t : {"<pad>", "<unk>", "<s>", "</s>"}) add(t);
  for (int k = 0; k < num_entities; ++k) add(EntityMarker(k));
}

int Vocabulary::add(const std::string& token, std::size_t count) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  tokens_.push_back(token);
  counts_.push_back(count);
  index_.emplace(token, id);
  return id;
}

int Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  if (const int k = EntityIndex(token); k >= 0 && num_entities_ > 0)
    return kFirstEntity + k % num_entities_;
  return kUnk;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

const std::string& Vocabulary::token(int id) const {
  Require(id >= 0 && static_cast<std::size_t>(id) < tokens_.size(), "index-error",
          "vocabulary id out of range: " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const Sentence& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

Sentence Vocabulary::decode(const std::vector<int>& ids) const {
  Sentence out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(token(i));
  return out;
}

std::map<std::string, std::size_t> CountTokens(const std::vector<Document>& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : corpus) {
    for (const auto& s : doc.sentences)
      for (const auto& t : s) ++counts[t];
    if (doc.highlights)
      for (const auto& s : *doc.highlights)
        for (const auto& t : s) ++counts[t];
  }
  return counts;
}

Vocabulary BuildVocab(const std::vector<Document>& corpus, std::size_t min_count,
                      int num_entities) {
  Vocabulary vocab(num_entities);
  const auto counts = CountTokens(corpus);
  std::vector<std::pair<std::string, std::size_t>> kept;
  std::size_t highlight_count = 0;
  for (const auto& doc : corpus)
    if (doc.highlights) highlight_count += doc.highlights->size();
  for (const auto& [token, count] : counts) {
    if (vocab.contains(token) || IsEntityMarker(token)) {
      const int id = vocab.id(token);
      vocab.set_count(id, vocab.count(id) + count);
      continue;
    }
    if (count >= min_count) kept.emplace_back(token, count);
  }
  vocab.set_count(Vocabulary::kEnd, highlight_count);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  for (const auto& [token, count] : kept) vocab.add(token, count);
  return vocab;
}

// ---------------------------------------------------------------------------

EmbeddingTable RandomEmbeddings(const Vocabulary& vocab, std::size_t dim, RngStream& rng) {
  EmbeddingTable table;
  table.dim = dim;
  table.values.resize(vocab.size() * dim);
  table.pretrained.assign(vocab.size(), false);
  for (std::size_t r = 0; r < vocab.size(); ++r)
    for (std::size_t j = 0; j < dim; ++j)
      table.values[r * dim + j] =
          r == Vocabulary::kPad ? 0.0f : static_cast<float>(rng.uniform(-0.05, 0.05));
  return table;
}

EmbeddingTable LoadEmbeddings(const std::string& path, const Vocabulary& vocab, std::size_t dim,
                              RngStream& rng) {
  std::ifstream in(path);
  Require(in.good(), "io-error", "cannot open embeddings file " + path);
  EmbeddingTable table = RandomEmbeddings(vocab, dim, rng);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> parts;
    std::string f;
    while (fields >> f) parts.push_back(f);
    if (parts.empty()) continue;
    if (line_no == 1 && parts.size() == 2 &&
        std::all_of(parts[0].begin(), parts[0].end(), IsDigit) &&
        std::all_of(parts[1].begin(), parts[1].end(), IsDigit))
      continue;
    if (parts.size() - 1 != dim)
      Fail("dim-mismatch", path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(dim) + " values, found " +
                               std::to_string(parts.size() - 1));
    std::vector<float> row(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const std::string& s = parts[j + 1];
      char* end = nullptr;
      row[j] = std::strtof(s.c_str(), &end);
      if (end != s.c_str() + s.size())
        Fail("parse-error", path + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    if (!vocab.contains(parts[0])) continue;
    const int id = vocab.id(parts[0]);
    if (vocab.is_reserved(id)) continue;
    std::copy(row.begin(), row.end(), table.row(static_cast<std::size_t>(id)));
    table.pretrained[static_cast<std::size_t>(id)] = true;
  }
  const std::size_t regular = vocab.size() - static_cast<std::size_t>(vocab.num_reserved());
  const auto hits = static_cast<std::size_t>(std::count(table.pretrained.begin(), table.pretrained.end(), true));
  table.coverage = regular ? static_cast<double>(hits) / static_cast<double>(regular) : 0.0;
  return table;
}

// ---------------------------------------------------------------------------

EncodedDocument EncodeDocument(const Document& doc, const Vocabulary& vocab) {
  EncodedDocument out;
  out.id = doc.id;
  for (const auto& s : doc.sentences) out.sentences.push_back(vocab.encode(s));
  if (doc.labels) out.labels = *doc.labels;
  return out;
}

EncodedDocument TruncateDocument(const EncodedDocument& doc, const BatchLimits& limits) {
  EncodedDocument out;
  out.id = doc.id;
  const std::size_t m = std::min(doc.sentences.size(), limits.max_sentences);
  for (std::size_t s = 0; s < m; ++s) {
    const auto& words = doc.sentences[s];
    out.sentences.emplace_back(words.begin(),
                               words.begin() + static_cast<std::ptrdiff_t>(std::min(words.size(), limits.max_words)));
  }
  if (!doc.labels.empty())
    out.labels.assign(doc.labels.begin(), doc.labels.begin() + static_cast<std::ptrdiff_t>(m));
  return out;
}

Batch PadBatch(const std::vector<EncodedDocument>& docs, const BatchLimits& limits) {
  Require(!docs.empty(), "invalid-argument", "cannot batch an empty document list");
  Batch batch;
  batch.docs = docs.size();
  for (const auto& d : docs) {
    batch.max_sentences = std::max(batch.max_sentences, std::min(d.sentences.size(), limits.max_sentences));
    for (const auto& s : d.sentences)
      batch.max_words = std::max(batch.max_words, std::min(s.size(), limits.max_words));
  }
  batch.word_ids.assign(batch.docs * batch.max_sentences * batch.max_words, Vocabulary::kPad);
  batch.word_mask.assign(batch.word_ids.size(), false);
  batch.sentence_mask.assign(batch.docs * batch.max_sentences, false);
  batch.word_counts.assign(batch.docs * batch.max_sentences, 0);
  batch.sentence_counts.assign(batch.docs, 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto doc = TruncateDocument(docs[d], limits);
    batch.sentence_counts[d] = doc.sentences.size();
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      batch.sentence_mask[batch.sentence_index(d, s)] = true;
      batch.word_counts[batch.sentence_index(d, s)] = doc.sentences[s].size();
      for (std::size_t w = 0; w < doc.sentences[s].size(); ++w) {
        batch.word_ids[batch.word_index(d, s, w)] = doc.sentences[s][w];
        batch.word_mask[batch.word_index(d, s, w)] = true;
      }
    }
  }
  return batch;
}

}  // namespace nsum
