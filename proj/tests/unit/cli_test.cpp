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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "json.hpp"
#include "nsum/checkpoint.hpp"
#include "nsum/corpus_io.hpp"
#include "nsum/training.hpp"
#include "small_corpus.hpp"
#include "test_util.hpp"

namespace nsum {
namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out, err;
};

Result Nsum(std::vector<std::string> args) {
  args.insert(args.begin(), "nsum");
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliPipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(Nsum({"gen-fixture", "--out", dir.file("fx.jsonl"), "--docs", "6", "--seed", "3"}).code, 0);
    const auto made = Nsum({"make-dataset", "--input", dir.file("fx.jsonl"), "--out-dir", dir.file("ds"),
                            "--embedding-dim", "8"});
    ASSERT_EQ(made.code, 0) << made.err;
    RunConfig cfg = testing::TinyConfig();
    cfg.epochs = 2;
    WriteText(dir.file("tiny.cfg"), cfg.to_text());
  }

  std::string Data(const std::string& name) const { return dir.file("ds/" + name); }

  void TrainSentence(const std::string& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {"train-se", "--train", Data("sentences.jsonl"), "--out", out,
                                     "--config", dir.file("tiny.cfg"), "--quiet"};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = Nsum(args);
    ASSERT_EQ(r.code, 0) << r.err;
  }

  testing::TempDir dir{"cli"};
};

TEST_F(CliPipeline, MakeDatasetWritesLabelsExamplesAndStats) {
  const auto docs = ReadCorpus(Data("sentences.jsonl"));
  ASSERT_EQ(docs.size(), 6u);
  for (const auto& d : docs) {
    ASSERT_TRUE(d.labels.has_value());
    EXPECT_EQ(d.labels->size(), d.sentences.size());
    for (const auto& s : d.sentences)
      for (const auto& t : s) EXPECT_EQ(t, Lowercase(t));
  }
  const auto stats = json::parse(Slurp(Data("stats.json")));
  EXPECT_EQ(stats["documents"], 6);
  EXPECT_EQ(stats["word_examples"].get<std::size_t>(), ReadWordExamples(Data("words.jsonl")).size());
  EXPECT_GT(stats["positive_rate"].get<double>(), 0.0);
}

TEST_F(CliPipeline, TrainWritesLogAndCheckpoint) {
  TrainSentence(dir.file("se.ckpt"), {"--log", dir.file("log.jsonl")});
  const Checkpoint c = LoadCheckpoint(dir.file("se.ckpt"));
  EXPECT_EQ(c.kind, kSentenceModelKind);
  EXPECT_EQ(c.epoch, 2u);
  EXPECT_EQ(c.config.dims.hidden_dim, 8u);
  std::istringstream log(Slurp(dir.file("log.jsonl")));
  std::vector<json> lines;
  for (std::string line; std::getline(log, line);) lines.push_back(json::parse(line));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1]["epoch"], 2);
  EXPECT_DOUBLE_EQ(lines[1]["loss"].get<double>(), c.loss_history[1]);
}

TEST_F(CliPipeline, StopAndResumeMatchesOneRun) {
  TrainSentence(dir.file("straight.ckpt"));
  TrainSentence(dir.file("part.ckpt"), {"--stop-after", "1"});
  EXPECT_EQ(LoadCheckpoint(dir.file("part.ckpt")).epoch, 1u);
  TrainSentence(dir.file("resumed.ckpt"), {"--resume", dir.file("part.ckpt")});
  EXPECT_EQ(Slurp(dir.file("resumed.ckpt")), Slurp(dir.file("straight.ckpt")));
}

TEST_F(CliPipeline, SummarizeHonoursLimitAndDumpsScores) {
  TrainSentence(dir.file("se.ckpt"));
  const auto r = Nsum({"summarize", "--model", dir.file("se.ckpt"), "--input", Data("sentences.jsonl"), "--out",
                       dir.file("sys.jsonl"), "--limit", "words:20", "--dump-scores", dir.file("scores.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summaries = ReadSummaries(dir.file("sys.jsonl"));
  const auto docs = ReadCorpus(Data("sentences.jsonl"));
  ASSERT_EQ(summaries.size(), docs.size());
  for (const auto& s : summaries) {
    EXPECT_FALSE(s.tokens.empty());
    EXPECT_LE(s.tokens.size(), 20u);
  }
  const Checkpoint c = LoadCheckpoint(dir.file("se.ckpt"));
  const auto model = LoadSentenceModel(c);
  const auto lines = ReadLines(dir.file("scores.jsonl"));
  ASSERT_EQ(lines.size(), docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto j = json::parse(lines[i]);
    EXPECT_EQ(j["id"], docs[i].id);
    EXPECT_EQ(j["scores"].get<std::vector<double>>(), SentenceScores(*model, c.vocab, docs[i], c.config.limits));
  }
}

TEST_F(CliPipeline, RougeOfSummariesAgainstThemselvesIsHundred) {
  TrainSentence(dir.file("se.ckpt"));
  ASSERT_EQ(Nsum({"summarize", "--model", dir.file("se.ckpt"), "--input", Data("sentences.jsonl"), "--out",
                  dir.file("sys.jsonl")})
                .code,
            0);
  std::string refs;
  for (const auto& s : ReadSummaries(dir.file("sys.jsonl")))
    refs += json{{"id", s.id}, {"references", {s.tokens}}}.dump() + "\n";
  WriteText(dir.file("refs.jsonl"), refs);
  const auto r = Nsum({"rouge", "--sys", dir.file("sys.jsonl"), "--ref", dir.file("refs.jsonl"), "--limit",
                       "none,bytes:75", "--json", dir.file("rouge.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = json::parse(Slurp(dir.file("rouge.json")));
  ASSERT_EQ(report.size(), 2u);
  EXPECT_DOUBLE_EQ(report[0]["rouge1"]["recall"].get<double>(), 100.0);
  EXPECT_DOUBLE_EQ(report[0]["rougeL"]["f1"].get<double>(), 100.0);
}

TEST_F(CliPipeline, EvaluateReportsEverySystem) {
  TrainSentence(dir.file("se.ckpt"));
  const auto r = Nsum({"evaluate", "--input", Data("sentences.jsonl"), "--model", dir.file("se.ckpt"),
                       "--baselines", "--lreg-train", Data("sentences.jsonl"), "--limits", "words:100,bytes:75",
                       "--json", dir.file("eval.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = json::parse(Slurp(dir.file("eval.json")));
  for (const char* system : {"nn-se", "lead", "lreg"}) {
    ASSERT_TRUE(report.contains(system)) << system;
    EXPECT_EQ(report[system].size(), 2u);
    EXPECT_EQ(report[system][0]["documents"], 6);
  }
  EXPECT_NE(r.out.find("[lead]"), std::string::npos);
}

TEST_F(CliPipeline, ReportAttentionMatchesDumpedScores) {
  TrainSentence(dir.file("se.ckpt"));
  const auto r = Nsum({"report-attention", "--model", dir.file("se.ckpt"), "--input", Data("sentences.jsonl"),
                       "--out", dir.file("heat.html"), "--text", dir.file("heat.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(Slurp(dir.file("heat.html")).find("<html"), std::string::npos);
  EXPECT_FALSE(Slurp(dir.file("heat.txt")).empty());
}

TEST_F(CliPipeline, WordModelDecodesAndTunesReranker) {
  const auto r = Nsum({"train-we", "--train", Data("words.jsonl"), "--out", dir.file("we.ckpt"), "--config",
                       dir.file("tiny.cfg"), "--set", "noise_samples=5", "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(LoadCheckpoint(dir.file("we.ckpt")).kind, kWordModelKind);
  const auto s = Nsum({"summarize", "--model", dir.file("we.ckpt"), "--input", Data("sentences.jsonl"), "--out",
                       dir.file("we_sys.jsonl"), "--beam-width", "3", "--max-len", "8", "--nbest",
                       dir.file("nbest.jsonl")});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto summaries = ReadSummaries(dir.file("we_sys.jsonl"));
  ASSERT_EQ(summaries.size(), 6u);
  for (const auto& sum : summaries) EXPECT_LE(sum.tokens.size(), 8u);
  const auto groups = ParseNBestJsonl(ReadLines(dir.file("nbest.jsonl")));
  ASSERT_EQ(groups.size(), 6u);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& cands = groups[i].second;
    ASSERT_FALSE(cands.empty());
    EXPECT_EQ(groups[i].first, summaries[i].id);
    EXPECT_EQ(summaries[i].tokens, cands[0].tokens);  // zero reranker weights keep the beam's best
  }
  const auto t = Nsum({"tune-reranker", "--nbest", dir.file("nbest.jsonl"), "--ref", Data("sentences.jsonl"),
                       "--out", dir.file("weights.json")});
  ASSERT_EQ(t.code, 0) << t.err;
  const auto line = json::parse(t.out);
  EXPECT_GE(line["rouge2_f_tuned"].get<double>(), line["rouge2_f_baseline"].get<double>());
  const auto again = Nsum({"summarize", "--model", dir.file("we.ckpt"), "--input", Data("sentences.jsonl"),
                           "--beam-width", "3", "--max-len", "8", "--reranker", dir.file("weights.json")});
  EXPECT_EQ(again.code, 0) << again.err;
}

TEST(Cli, UsageErrorsAndHelp) {
  EXPECT_EQ(Nsum({}).code, 2);
  EXPECT_EQ(Nsum({"frobnicate"}).code, 2);
  EXPECT_EQ(Nsum({"rouge", "--sys", "x"}).code, 2);
  const auto help = Nsum({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("train-se"), std::string::npos);
}

TEST(Cli, DomainErrorsExitOneWithMessage) {
  testing::TempDir dir("cli_errors");
  const auto missing = Nsum({"rouge", "--sys", dir.file("none.jsonl"), "--ref", dir.file("none.jsonl")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(missing.err.rfind("nsum: ", 0), 0u);
  ASSERT_EQ(Nsum({"gen-fixture", "--out", dir.file("fx.jsonl"), "--docs", "2"}).code, 0);
  const auto bad_limit = Nsum({"rouge", "--sys", dir.file("fx.jsonl"), "--ref", dir.file("fx.jsonl"), "--limit",
                               "lines:3"});
  EXPECT_EQ(bad_limit.code, 1);
  EXPECT_NE(bad_limit.err.find("lines:3"), std::string::npos);
  const auto bad_key = Nsum({"train-se", "--train", dir.file("fx.jsonl"), "--out", dir.file("m.ckpt"), "--set",
                             "colour=red"});
  EXPECT_EQ(bad_key.code, 1);
  EXPECT_NE(bad_key.err.find("colour"), std::string::npos);
  const auto not_ckpt = Nsum({"summarize", "--model", dir.file("fx.jsonl"), "--input", dir.file("fx.jsonl")});
  EXPECT_EQ(not_ckpt.code, 1);
  EXPECT_NE(not_ckpt.err.find("checkpoint"), std::string::npos);
}

}  // namespace
}  // namespace nsum
