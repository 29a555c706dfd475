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

#include "nsum/rouge.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nsum {
namespace {

std::map<std::vector<std::string>, std::size_t> NgramCounts(const Sentence& tokens, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  if (n == 0 || tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

template <typename PerReference>
RougeScore Aggregate(const std::vector<Sentence>& references, ReferenceAggregation agg,
                     PerReference score) {
  Require(!references.empty(), "no-references", "ROUGE needs at least one reference");
  RougeScore best, sum;
  bool first = true;
  for (const auto& ref : references) {
    const RougeScore s = score(ref);
    if (first || s.f1 > best.f1) best = s;
    first = false;
    sum.precision += s.precision;
    sum.recall += s.recall;
    sum.f1 += s.f1;
  }
  if (agg == ReferenceAggregation::kMax) return best;
  const double k = static_cast<double>(references.size());
  return {sum.precision / k, sum.recall / k, sum.f1 / k};
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

RougeScore ScoreFromCounts(std::size_t overlap, std::size_t candidate_total,
                           std::size_t reference_total) {
  RougeScore s;
  if (candidate_total > 0) s.precision = static_cast<double>(overlap) / static_cast<double>(candidate_total);
  if (reference_total > 0) s.recall = static_cast<double>(overlap) / static_cast<double>(reference_total);
  if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

LimitSpec LimitSpec::Parse(const std::string& text) {
  if (text == "none" || text == "full" || text.empty()) return None();
  const auto colon = text.find(':');
  Require(colon != std::string::npos, "invalid-limit", "limit must be none, words:N or bytes:N: " + text);
  const std::string kind = text.substr(0, colon);
  const std::string amount = text.substr(colon + 1);
  Require(!amount.empty() && amount.find_first_not_of("0123456789") == std::string::npos,
          "invalid-limit", "limit amount must be a positive integer: " + text);
  const std::size_t n = std::stoul(amount);
  Require(n > 0, "invalid-limit", "limit amount must be positive: " + text);
  if (kind == "words") return Words(n);
  if (kind == "bytes") return Bytes(n);
  Fail("invalid-limit", "unknown limit kind in " + text);
}

std::string LimitSpec::str() const {
  switch (kind) {
    case LimitKind::kWords: return "words:" + std::to_string(amount);
    case LimitKind::kBytes: return "bytes:" + std::to_string(amount);
    default: return "none";
  }
}

bool LimitSpec::fits(const Sentence& tokens) const {
  switch (kind) {
    case LimitKind::kWords: return tokens.size() <= amount;
    case LimitKind::kBytes: return DetokenizedBytes(tokens) <= amount;
    default: return true;
  }
}

std::size_t DetokenizedBytes(const Sentence& tokens) {
  std::size_t n = 0;
  for (const auto& t : tokens) n += t.size();
  return tokens.empty() ? 0 : n + tokens.size() - 1;
}

Sentence Truncate(const Sentence& tokens, const LimitSpec& limit) {
  switch (limit.kind) {
    case LimitKind::kWords:
      return Sentence(tokens.begin(),
                      tokens.begin() + static_cast<std::ptrdiff_t>(std::min(tokens.size(), limit.amount)));
    case LimitKind::kBytes: {
      std::size_t bytes = 0, keep = 0;
      for (; keep < tokens.size(); ++keep) {
        const std::size_t next = bytes + tokens[keep].size() + (keep > 0 ? 1 : 0);
        if (next > limit.amount) break;
        bytes = next;
      }
      return Sentence(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(keep));
    }
    default:
      return tokens;
  }
}

RougeScore RougeN(const Sentence& candidate, const std::vector<Sentence>& references,
                  std::size_t n, ReferenceAggregation agg) {
  Require(n >= 1, "invalid-argument", "ROUGE-N needs n >= 1");
  const auto cand = NgramCounts(candidate, n);
  std::size_t cand_total = 0;
  for (const auto& [g, c] : cand) cand_total += c;
  return Aggregate(references, agg, [&](const Sentence& ref) {
    const auto counts = NgramCounts(ref, n);
    std::size_t ref_total = 0, overlap = 0;
    for (const auto& [g, c] : counts) {
      ref_total += c;
      auto it = cand.find(g);
      if (it != cand.end()) overlap += std::min(c, it->second);
    }
    return ScoreFromCounts(overlap, cand_total, ref_total);
  });
}

std::size_t LcsLength(const Sentence& a, const Sentence& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore RougeL(const Sentence& candidate, const std::vector<Sentence>& references,
                  ReferenceAggregation agg) {
  return Aggregate(references, agg, [&](const Sentence& ref) {
    return ScoreFromCounts(LcsLength(candidate, ref), candidate.size(), ref.size());
  });
}

std::string CorpusReport::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  auto score = [](const RougeScore& s) {
    return nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  };
  for (const auto& row : rows)
    out.push_back({{"limit", row.limit.str()},
                   {"documents", row.documents},
                   {"rouge1", score(row.rouge1)},
                   {"rouge2", score(row.rouge2)},
                   {"rougeL", score(row.rougeL)}});
  return out.dump(2) + "\n";
}

std::string CorpusReport::to_table(const std::string& metric) const {
  Require(metric == "recall" || metric == "precision" || metric == "f1", "invalid-argument",
          "unknown ROUGE metric: " + metric);
  auto pick = [&](const RougeScore& s) {
    return metric == "recall" ? s.recall : metric == "precision" ? s.precision : s.f1;
  };
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %8s %8s %8s   (%s)\n", "limit", "ROUGE-1", "ROUGE-2",
                "ROUGE-L", metric.c_str());
  os << line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%-12s %8s %8s %8s\n", row.limit.str().c_str(),
                  Fixed(pick(row.rouge1), 2).c_str(), Fixed(pick(row.rouge2), 2).c_str(),
                  Fixed(pick(row.rougeL), 2).c_str());
    os << line;
  }
  return os.str();
}

CorpusReport EvaluateCorpus(const std::vector<Summary>& system,
                            const std::vector<ReferenceSet>& references,
                            const std::vector<LimitSpec>& limits, ReferenceAggregation agg) {
  std::map<std::string, const ReferenceSet*> by_id;
  for (const auto& r : references) by_id[r.id] = &r;
  std::set<std::string> seen;
  std::vector<std::string> offenders;
  for (const auto& s : system) {
    if (!by_id.count(s.id) || !seen.insert(s.id).second) offenders.push_back(s.id);
  }
  for (const auto& [id, r] : by_id)
    if (!seen.count(id)) offenders.push_back(id);
  if (!offenders.empty()) {
    std::string msg = "summaries and references do not align:";
    for (const auto& id : offenders) msg += " " + id;
    Fail("alignment-error", msg);
  }

  CorpusReport report;
  for (const auto& limit : limits) {
    RougeRow row;
    row.limit = limit;
    row.documents = system.size();
    for (const auto& s : system) {
      const Sentence cand = Truncate(s.tokens, limit);
      const auto& refs = by_id.at(s.id)->references;
      const RougeScore r1 = RougeN(cand, refs, 1, agg);
      const RougeScore r2 = RougeN(cand, refs, 2, agg);
      const RougeScore rl = RougeL(cand, refs, agg);
      for (auto [acc, val] : {std::pair{&row.rouge1, r1}, {&row.rouge2, r2}, {&row.rougeL, rl}}) {
        acc->precision += val.precision;
        acc->recall += val.recall;
        acc->f1 += val.f1;
      }
    }
    if (!system.empty()) {
      const double k = 100.0 / static_cast<double>(system.size());
      for (RougeScore* acc : {&row.rouge1, &row.rouge2, &row.rougeL}) {
        acc->precision *= k;
        acc->recall *= k;
        acc->f1 *= k;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace nsum
