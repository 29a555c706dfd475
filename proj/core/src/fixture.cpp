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

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "nsum/datagen.hpp"

namespace nsum {
namespace {

using Words = std::vector<std::string>;

const Words kFirstNames = {"Daniel", "Maria", "Oliver", "Priya", "Samuel", "Elena", "Tomas",
                           "Grace",  "Hiro",  "Amara",  "Lucas", "Nadia",  "Felix", "Ines"};
const Words kLastNames = {"Talia",  "Okafor", "Brennan", "Lindqvist", "Moreau", "Castillo", "Novak",
                          "Haddad", "Whitlow", "Kessler", "Ferreira", "Quinn",  "Sato",     "Adeyemi"};
const Words kPlaces = {"Leeds", "Ohio",   "Lisbon", "Kent",   "Denver", "Perth",
                       "Oslo",  "Quebec", "Bristol", "Nairobi", "Sevilla", "Dublin"};
const Words kDays = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};
const Words kRoles = {"minister", "spokesman", "director", "judge", "mayor", "surgeon", "coach", "lawyer"};

const Words kEventVerbs = {"announced", "launched", "arrested", "rescued", "signed",
                           "banned",    "approved", "discovered", "won",   "unveiled",
                           "charged",   "closed",   "sued",     "blocked", "recalled"};
const Words kEventNouns = {"deal",     "investigation", "treaty",  "vaccine", "plan",
                           "merger",   "strike",        "scheme",  "reform",  "inquiry",
                           "lawsuit",  "contract",      "embargo", "budget",  "settlement"};
const std::map<std::string, std::string> kSynonyms = {
    {"announced", "revealed"}, {"launched", "started"},  {"arrested", "detained"},
    {"rescued", "saved"},      {"signed", "agreed"},     {"banned", "outlawed"},
    {"approved", "backed"},    {"discovered", "found"},  {"won", "secured"},
    {"unveiled", "showed"},    {"charged", "accused"},   {"closed", "shut"},
    {"sued", "challenged"},    {"blocked", "halted"},    {"recalled", "withdrew"},
    {"deal", "agreement"},     {"plan", "proposal"},     {"inquiry", "probe"},
    {"investigation", "probe"}, {"budget", "spending"},  {"strike", "walkout"}};

const Words kFillerNouns = {"weather", "garden",  "coffee",   "afternoon", "breeze",
                            "crowd",   "traffic", "market",   "library",   "river",
                            "bakery",  "bicycle", "umbrella", "music",     "painting"};
const Words kFillerVerbs = {"strolled", "chatted", "rested",  "waited",  "smiled",
                            "wandered", "lingered", "relaxed", "browsed", "paused"};
const Words kFillerAdj = {"quiet", "sunny", "pleasant", "busy",     "calm",
                          "crowded", "mild", "colourful", "cosy",   "familiar"};
const Words kFillerAdv = {"slowly", "happily", "briefly", "quietly", "calmly", "casually"};

struct Person {
  std::string first;
  std::string last;
  bool mentioned = false;
};

class DocumentWriter {
 public:
  DocumentWriter(RngStream& rng, const FixtureParams& params) : rng_(rng), params_(params) {
    std::vector<std::size_t> first(kFirstNames.size()), last(kLastNames.size());
    for (std::size_t i = 0; i < first.size(); ++i) first[i] = i;
    for (std::size_t i = 0; i < last.size(); ++i) last[i] = i;
    Shuffle(first);
    Shuffle(last);
    for (std::size_t i = 0; i < 3; ++i) cast_.push_back({kFirstNames[first[i]], kLastNames[last[i]]});
    std::vector<std::size_t> places(kPlaces.size());
    for (std::size_t i = 0; i < places.size(); ++i) places[i] = i;
    Shuffle(places);
    places_ = {kPlaces[places[0]], kPlaces[places[1]]};
  }

  // Returns the sentence and the compressed highlight (empty for filler).
  std::pair<Sentence, Sentence> Salient() {
    const std::size_t who = rng_.uniform_int(cast_.size());
    last_salient_person_ = who;
    const Words person = Mention(who);
    const std::string verb = Pick(kEventVerbs);
    const std::string noun = Pick(kEventNouns);
    const std::string place = Pick(places_);
    Sentence s, h;
    switch (rng_.uniform_int(3)) {
      case 0:
        s = Join({person, {verb, "the", noun, "in", place, "on", Pick(kDays), "."}});
        h = Join({{cast_[who].last}, {verb, noun, "in", place}});
        break;
      case 1: {
        const std::string other = Pick(kEventNouns);
        s = Join({{"The", Pick(kRoles), ","}, person, {",", verb, "a", noun, "after", "the", other, "."}});
        h = Join({{cast_[who].last}, {verb, noun, "after", other}});
        break;
      }
      default:
        s = Join({person, {verb, "a", "new", noun, "with", place, "officials", "on", Pick(kDays), "."}});
        h = Join({{cast_[who].last}, {verb, "new", noun, "with", place, "officials"}});
        break;
    }
    for (auto& t : h) {
      auto it = kSynonyms.find(t);
      if (it != kSynonyms.end() && rng_.bernoulli(params_.paraphrase_rate)) t = it->second;
    }
    return {s, h};
  }

  Sentence Filler() {
    const bool distract = last_salient_person_ < cast_.size() && rng_.bernoulli(params_.distractor_rate);
    const std::size_t who = distract ? last_salient_person_ : rng_.uniform_int(cast_.size());
    switch (rng_.uniform_int(4)) {
      case 0:
        return Join({Mention(who), {Pick(kFillerVerbs), "near", "the", Pick(kFillerAdj), Pick(kFillerNouns),
                                    "in", Pick(places_), "on", Pick(kDays), "."}});
      case 1:
        return {"The", Pick(kFillerNouns), "was", Pick(kFillerAdj), "and", "the", Pick(kFillerNouns),
                Pick(kFillerVerbs), Pick(kFillerAdv), "."};
      case 2:
        return Join({{"It", "was", "a", Pick(kFillerAdj), "day", "and"}, Mention(who),
                     {Pick(kFillerVerbs), "by", "the", Pick(kFillerNouns), "."}});
      default:
        return {"The", Pick(kRoles), Pick(kFillerVerbs), Pick(kFillerAdv), "at", "the",
                Pick(kFillerNouns), "in", Pick(places_), "."};
    }
  }

 private:
  Words Mention(std::size_t who) {
    Person& p = cast_[who];
    if (!p.mentioned || rng_.bernoulli(0.5)) {
      p.mentioned = true;
      return {p.first, p.last};
    }
    return {p.last};
  }

  const std::string& Pick(const Words& words) { return words[rng_.uniform_int(words.size())]; }

  template <typename V>
  void Shuffle(V& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_.uniform_int(i)]);
  }

  static Sentence Join(std::initializer_list<Words> parts) {
    Sentence out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  }

  RngStream& rng_;
  const FixtureParams& params_;
  std::vector<Person> cast_;
  Words places_;
  std::size_t last_salient_person_ = static_cast<std::size_t>(-1);
};

}  // namespace

std::vector<Document> GenerateFixtureCorpus(RngStream& rng, const FixtureParams& params) {
  std::vector<Document> corpus;
  for (std::size_t d = 0; d < params.n_docs; ++d) {
    const std::size_t span = params.max_sentences - params.min_sentences + 1;
    const std::size_t n = params.min_sentences + rng.uniform_int(span);
    std::vector<int> labels(n, 0);
    std::size_t positives = 0;
    for (auto& l : labels) {
      l = rng.bernoulli(params.positive_rate) ? 1 : 0;
      positives += static_cast<std::size_t>(l);
    }
    if (positives == 0) labels[rng.uniform_int(n)] = 1;

    DocumentWriter writer(rng, params);
    Document doc;
    doc.id = params.id_prefix + std::to_string(d);
    doc.highlights.emplace();
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i]) {
        auto [sentence, highlight] = writer.Salient();
        doc.sentences.push_back(std::move(sentence));
        doc.highlights->push_back(std::move(highlight));
      } else {
        doc.sentences.push_back(writer.Filler());
      }
    }
    doc.labels = std::move(labels);
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace nsum
