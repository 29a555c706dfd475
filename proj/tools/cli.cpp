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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nsum/attention_report.hpp"
#include "nsum/baselines.hpp"
#include "nsum/checkpoint.hpp"
#include "nsum/config.hpp"
#include "nsum/corpus_io.hpp"
#include "nsum/datagen.hpp"
#include "nsum/rerank.hpp"
#include "nsum/rouge.hpp"
#include "nsum/training.hpp"

namespace nsum::cli {
namespace {

using json = nlohmann::json;

Document Prepare(const Document& doc) { return LowercaseDocument(AnonymizeEntities(doc)); }

std::vector<Document> LoadDocuments(const std::string& path, bool raw) {
  std::vector<Document> docs = ReadCorpus(path);
  if (raw)
    for (auto& d : docs) d = Prepare(d);
  return docs;
}

std::vector<LimitSpec> ParseLimits(const std::vector<std::string>& items) {
  std::vector<LimitSpec> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(LimitSpec::Parse(part));
  }
  return out;
}

// Training options shared by train-se and train-we. The config file is
// applied first, then --set pairs, then dedicated flags.
struct TrainFlags {
  std::string train, valid, out, config, resume, embeddings, log;
  std::vector<std::string> sets;
  std::optional<std::size_t> epochs, batch_size, stop_after;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr, dropout;
  bool quiet = false;

  void attach(CLI::App* app) {
    app->add_option("--train", train, "Training data (JSONL)")->required();
    app->add_option("--out", out, "Checkpoint path, rewritten after every epoch")->required();
    app->add_option("--valid", valid, "Validation data (JSONL)");
    app->add_option("--config", config, "Key = value configuration file");
    app->add_option("--set", sets, "Configuration override key=value (repeatable)");
    app->add_option("--resume", resume, "Continue from a checkpoint");
    app->add_option("--embeddings", embeddings, "Pretrained word vectors (text format)");
    app->add_option("--log", log, "Append per-epoch JSON lines to this file");
    app->add_option("--epochs", epochs, "Total epochs");
    app->add_option("--batch-size", batch_size, "Documents per update");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--lr", lr, "Adam learning rate");
    app->add_option("--dropout", dropout, "Dropout probability");
    app->add_option("--stop-after", stop_after, "Stop once this many epochs are complete");
    app->add_flag("--quiet", quiet, "Suppress per-epoch output");
  }

  RunConfig config_with_overrides(RunConfig cfg) const {
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      Require(eq != std::string::npos, "invalid-config", "--set expects key=value, got " + kv);
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (epochs) cfg.epochs = *epochs;
    if (batch_size) cfg.batch_size = *batch_size;
    if (seed) cfg.seed = *seed;
    if (lr) cfg.adam.lr = *lr;
    if (dropout) cfg.dims.dropout = *dropout;
    cfg.validate();
    return cfg;
  }

  RunConfig resolve() const {
    return config_with_overrides(config.empty() ? RunConfig{} : RunConfig::FromFile(config));
  }
};

void AppendLog(const std::string& path, const json& line) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app);
  Require(out.good(), "io-error", "cannot append to " + path);
  out << line.dump() << "\n";
}

template <typename Trainer>
void TrainLoop(Trainer& trainer, const TrainFlags& flags, std::ostream& out,
               const std::function<json()>& validate) {
  const std::size_t total = trainer.config().epochs;
  while (trainer.epoch() < total) {
    if (flags.stop_after && trainer.epoch() >= *flags.stop_after) break;
    const EpochLog log = trainer.run_epoch();
    SaveCheckpoint(flags.out, trainer.checkpoint());
    json line{{"epoch", log.epoch}, {"loss", log.loss}, {"gold_rate", log.gold_rate}};
    if (log.accuracy >= 0) line["accuracy"] = log.accuracy;
    if (log.fallbacks > 0) line["softmax_fallback_steps"] = log.fallbacks;
    if (validate) line["valid"] = validate();
    AppendLog(flags.log, line);
    if (!flags.quiet) out << line.dump() << "\n";
  }
}

std::optional<EmbeddingTable> MaybeEmbeddings(const std::string& path, const Vocabulary& vocab,
                                              std::size_t dim, RngStream& rng) {
  if (path.empty()) return std::nullopt;
  return LoadEmbeddings(path, vocab, dim, rng);
}

int TrainSentence(const TrainFlags& flags, std::ostream& out) {
  std::vector<Document> corpus = ReadCorpus(flags.train);
  std::unique_ptr<SentenceTrainer> trainer;
  if (!flags.resume.empty()) {
    Checkpoint ckpt = LoadCheckpoint(flags.resume);
    ckpt.config = flags.config_with_overrides(ckpt.config);
    trainer = std::make_unique<SentenceTrainer>(std::move(ckpt), std::move(corpus));
  } else {
    const RunConfig cfg = flags.resolve();
    Vocabulary vocab = BuildVocab(corpus, cfg.min_count, cfg.num_entities);
    RngStream emb_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto emb = MaybeEmbeddings(flags.embeddings, vocab, cfg.dims.word_dim, emb_rng);
    trainer = std::make_unique<SentenceTrainer>(cfg, std::move(vocab), std::move(corpus),
                                                emb ? &*emb : nullptr);
  }
  std::vector<Document> valid;
  if (!flags.valid.empty()) valid = ReadCorpus(flags.valid);
  std::function<json()> validate;
  if (!valid.empty())
    validate = [&] {
      return json{{"accuracy", ModelLabelAccuracy(trainer->model(), trainer->vocab(), valid,
                                                  trainer->config().limits)}};
    };
  TrainLoop(*trainer, flags, out, validate);
  return 0;
}

int TrainWord(const TrainFlags& flags, std::ostream& out) {
  std::vector<WordExtractionExample> examples = ReadWordExamples(flags.train);
  std::unique_ptr<WordTrainer> trainer;
  if (!flags.resume.empty()) {
    Checkpoint ckpt = LoadCheckpoint(flags.resume);
    ckpt.config = flags.config_with_overrides(ckpt.config);
    trainer = std::make_unique<WordTrainer>(std::move(ckpt), std::move(examples));
  } else {
    const RunConfig cfg = flags.resolve();
    std::vector<Document> as_docs;
    for (const auto& ex : examples) {
      Document d;
      d.id = ex.id;
      d.sentences = ex.sentences;
      d.highlights = std::vector<Sentence>{ex.target};
      as_docs.push_back(std::move(d));
    }
    Vocabulary vocab = BuildVocab(as_docs, cfg.min_count, cfg.num_entities);
    RngStream emb_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto emb = MaybeEmbeddings(flags.embeddings, vocab, cfg.dims.word_dim, emb_rng);
    trainer = std::make_unique<WordTrainer>(cfg, std::move(vocab), std::move(examples),
                                            emb ? &*emb : nullptr);
  }
  if (trainer->skipped() > 0 && !flags.quiet)
    out << "skipped " << trainer->skipped() << " examples whose targets fall outside the truncated document\n";
  std::vector<WordExtractionExample> valid;
  if (!flags.valid.empty()) valid = ReadWordExamples(flags.valid);
  std::function<json()> validate;
  if (!valid.empty())
    validate = [&] {
      std::size_t exact = 0;
      for (const auto& ex : valid)
        exact += GreedyWords(trainer->model(), trainer->vocab(), ex.sentences,
                             trainer->config().max_len, trainer->config().limits) == ex.target;
      return json{{"exact_match", static_cast<double>(exact) / static_cast<double>(valid.size())}};
    };
  TrainLoop(*trainer, flags, out, validate);
  return 0;
}

Sentence SentenceModelSummary(const SentenceExtractor<float>& model, const Checkpoint& ckpt,
                              const Document& doc, std::size_t k, const LimitSpec& limit,
                              std::vector<double>* scores) {
  const auto probs = SentenceScores(model, ckpt.vocab, doc, ckpt.config.limits);
  if (scores) *scores = probs;
  const auto picked = SelectSummarySentences(probs, doc.sentences, k, limit);
  return Truncate(JoinSentences(doc.sentences, picked), limit);
}

struct SummarizeFlags {
  std::string model, input, out, dump_scores, reranker, nbest;
  std::string limit = "none";
  std::optional<std::size_t> k, beam_width, max_len;
  bool raw = false;
};

int Summarize(const SummarizeFlags& f, std::ostream& out) {
  const Checkpoint ckpt = LoadCheckpoint(f.model);
  const LimitSpec limit = LimitSpec::Parse(f.limit);
  const std::vector<Document> docs = LoadDocuments(f.input, f.raw);
  std::vector<Summary> summaries;
  if (ckpt.kind == kSentenceModelKind) {
    const auto model = LoadSentenceModel(ckpt);
    std::string scores_text;
    for (const auto& d : docs) {
      std::vector<double> scores;
      summaries.push_back({d.id, SentenceModelSummary(*model, ckpt, d, f.k.value_or(ckpt.config.top_k),
                                                      limit, &scores)});
      scores_text += json{{"id", d.id}, {"scores", scores}}.dump() + "\n";
    }
    if (!f.dump_scores.empty()) WriteText(f.dump_scores, scores_text);
  } else {
    const auto model = LoadWordModel(ckpt);
    RerankerWeights weights;
    if (!f.reranker.empty()) {
      std::ifstream in(f.reranker);
      Require(in.good(), "io-error", "cannot read " + f.reranker);
      std::stringstream ss;
      ss << in.rdbuf();
      weights = WeightsFromJson(ss.str());
    }
    const BeamOptions beam{f.beam_width.value_or(ckpt.config.beam_width),
                           f.max_len.value_or(ckpt.config.max_len)};
    std::string nbest_text;
    for (const auto& d : docs) {
      const auto decoded = DecodeWords(*model, ckpt.vocab, d.sentences, beam, ckpt.config.limits);
      nbest_text += NBestToJsonl(d.id, decoded.candidates);
      Sentence tokens;
      if (!decoded.candidates.empty()) tokens = decoded.candidates[Rerank(decoded.candidates, weights)].tokens;
      summaries.push_back({d.id, Truncate(tokens, limit)});
    }
    if (!f.nbest.empty()) WriteText(f.nbest, nbest_text);
  }
  if (f.out.empty()) {
    for (const auto& s : summaries) out << json{{"id", s.id}, {"tokens", s.tokens}}.dump() << "\n";
  } else {
    WriteSummaries(f.out, summaries);
  }
  return 0;
}

std::vector<ReferenceSet> HighlightReferences(const std::vector<Document>& docs) {
  std::vector<ReferenceSet> refs;
  for (const auto& d : docs) {
    Require(d.highlights.has_value(), "missing-references", "document " + d.id + " has no highlights");
    Sentence all;
    for (const auto& h : *d.highlights) all.insert(all.end(), h.begin(), h.end());
    refs.push_back({d.id, {all}});
  }
  return refs;
}

struct EvaluateFlags {
  std::string input, model, lreg_train, embeddings, json_out;
  std::vector<std::string> limits = {"words:100", "bytes:75", "bytes:275", "none"};
  std::string metric = "recall";
  bool baselines = false;
  bool raw = false;
  std::uint64_t seed = 1;
};

int Evaluate(const EvaluateFlags& f, std::ostream& out) {
  const std::vector<Document> docs = LoadDocuments(f.input, f.raw);
  const auto refs = HighlightReferences(docs);
  const auto limits = ParseLimits(f.limits);
  std::vector<std::pair<std::string, std::vector<Summary>>> systems;
  if (!f.model.empty()) {
    const Checkpoint ckpt = LoadCheckpoint(f.model);
    std::vector<Summary> s;
    if (ckpt.kind == kSentenceModelKind) {
      const auto model = LoadSentenceModel(ckpt);
      for (const auto& d : docs)
        s.push_back({d.id, SentenceModelSummary(*model, ckpt, d, ckpt.config.top_k, LimitSpec::None(), nullptr)});
      systems.emplace_back("nn-se", std::move(s));
    } else {
      const auto model = LoadWordModel(ckpt);
      const BeamOptions beam{ckpt.config.beam_width, ckpt.config.max_len};
      for (const auto& d : docs) {
        const auto decoded = DecodeWords(*model, ckpt.vocab, d.sentences, beam, ckpt.config.limits);
        s.push_back({d.id, decoded.candidates.empty() ? Sentence{} : decoded.candidates.front().tokens});
      }
      systems.emplace_back("nn-we", std::move(s));
    }
  }
  if (f.baselines) {
    std::vector<Summary> lead;
    for (const auto& d : docs) lead.push_back({d.id, Lead3(d.sentences)});
    systems.emplace_back("lead", std::move(lead));
  }
  if (!f.lreg_train.empty()) {
    const auto train = LoadDocuments(f.lreg_train, f.raw);
    const Vocabulary vocab = BuildVocab(train, 1);
    RngStream rng(f.seed);
    const EmbeddingTable emb = f.embeddings.empty() ? RandomEmbeddings(vocab, 150, rng)
                                                    : LoadEmbeddings(f.embeddings, vocab, 150, rng);
    std::vector<LabeledFeatures> data;
    for (const auto& d : train) {
      Require(d.labels.has_value(), "missing-labels", "LREG training document " + d.id + " has no labels");
      data.push_back({LregFeatures(d.sentences, emb, vocab), *d.labels});
    }
    const LregModel lreg = TrainLreg(data);
    std::vector<Summary> s;
    for (const auto& d : docs) {
      const auto probs = lreg.predict_proba(LregFeatures(d.sentences, emb, vocab));
      s.push_back({d.id, JoinSentences(d.sentences, SelectSummarySentences(probs, d.sentences, 3))});
    }
    systems.emplace_back("lreg", std::move(s));
  }
  Require(!systems.empty(), "invalid-argument", "nothing to evaluate: pass --model, --baselines or --lreg-train");
  json report = json::object();
  for (const auto& [name, summaries] : systems) {
    const CorpusReport r = EvaluateCorpus(summaries, refs, limits);
    out << "[" << name << "]\n" << r.to_table(f.metric);
    report[name] = json::parse(r.to_json());
  }
  if (!f.json_out.empty()) WriteText(f.json_out, report.dump(2) + "\n");
  return 0;
}

int ReportAttention(const std::string& model_path, const std::string& input, const std::string& html,
                    const std::string& text, bool raw, std::ostream& out) {
  const Checkpoint ckpt = LoadCheckpoint(model_path);
  const auto model = LoadSentenceModel(ckpt);
  std::vector<SentenceHeat> heat;
  for (const auto& d : LoadDocuments(input, raw))
    heat.push_back({d.id, d.sentences, SentenceScores(*model, ckpt.vocab, d, ckpt.config.limits)});
  WriteText(html, RenderHeatHtml(heat));
  if (!text.empty()) WriteText(text, RenderHeatText(heat));
  out << "wrote " << html << " (" << heat.size() << " documents)\n";
  return 0;
}

int TuneReranker(const std::string& nbest_path, const std::string& ref_path, const std::string& out_path,
                 std::ostream& out) {
  const auto groups = ParseNBestJsonl(ReadLines(nbest_path));
  std::map<std::string, std::vector<Sentence>> refs;
  for (auto& r : ReadReferences(ref_path)) refs[r.id] = r.references;
  std::vector<RerankExample> validation;
  for (const auto& [id, cands] : groups) {
    auto it = refs.find(id);
    Require(it != refs.end(), "alignment-error", "no reference for n-best document " + id);
    validation.push_back({id, cands, it->second});
  }
  const RerankTuning t = TuneRerankWeights(validation);
  WriteText(out_path, WeightsToJson(t.weights));
  out << json{{"rouge2_f_baseline", t.baseline}, {"rouge2_f_tuned", t.objective}, {"passes", t.passes}}.dump()
      << "\n";
  return 0;
}

struct MakeDatasetFlags {
  std::string input, out_dir, gold, embeddings;
  std::size_t embedding_dim = 150;
  std::size_t neighbors = 10;
  double tau = 0.6;
  std::uint64_t seed = 1;
  bool relabel = false;
};

int MakeDataset(const MakeDatasetFlags& f, std::ostream& out) {
  std::vector<Document> docs;
  for (const auto& d : ReadCorpus(f.input)) docs.push_back(Prepare(d));
  LabelRuleWeights weights;
  json stats;
  if (!f.gold.empty()) {
    std::vector<Document> gold;
    for (const auto& d : ReadCorpus(f.gold)) gold.push_back(Prepare(d));
    const RuleTuningResult tuned = TuneRuleWeights(gold);
    weights = tuned.weights;
    stats["rule_accuracy"] = tuned.accuracy;
  }
  std::size_t sentences = 0, positives = 0;
  for (auto& d : docs) {
    if (!d.labels || f.relabel) {
      Require(d.highlights.has_value(), "missing-references", "document " + d.id + " has no highlights to label from");
      d.labels = LabelDocument(d, *d.highlights, weights).labels;
    }
    sentences += d.labels->size();
    for (int l : *d.labels) positives += static_cast<std::size_t>(l);
  }
  const Vocabulary vocab = BuildVocab(docs, 1);
  RngStream rng(f.seed);
  const EmbeddingTable emb = f.embeddings.empty() ? RandomEmbeddings(vocab, f.embedding_dim, rng)
                                                  : LoadEmbeddings(f.embeddings, vocab, f.embedding_dim, rng);
  std::vector<WordExtractionExample> examples;
  std::size_t rejected = 0;
  for (const auto& d : docs) {
    if (!d.highlights) continue;
    for (const auto& h : *d.highlights) {
      auto outcome = BuildWordExtractionExample(d, {h}, emb, vocab, f.neighbors, f.tau);
      if (outcome.example) {
        outcome.example->id = d.id + "#" + std::to_string(examples.size());
        examples.push_back(std::move(*outcome.example));
      } else {
        ++rejected;
      }
    }
  }
  std::filesystem::create_directories(f.out_dir);
  WriteCorpus(f.out_dir + "/sentences.jsonl", docs);
  WriteWordExamples(f.out_dir + "/words.jsonl", examples);
  stats["documents"] = docs.size();
  stats["sentences"] = sentences;
  stats["positive_rate"] = sentences ? static_cast<double>(positives) / static_cast<double>(sentences) : 0.0;
  stats["word_examples"] = examples.size();
  stats["word_examples_rejected"] = rejected;
  stats["embedding_coverage"] = emb.coverage;
  stats["rule"] = {{"position", weights.position}, {"unigram", weights.unigram}, {"bigram", weights.bigram},
                   {"entity", weights.entity},     {"length", weights.length},   {"bias", weights.bias},
                   {"threshold", weights.threshold}};
  WriteText(f.out_dir + "/stats.json", stats.dump(2) + "\n");
  out << stats.dump() << "\n";
  return 0;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neural extractive summarization: dataset construction, training, decoding and ROUGE"};
  app.name("nsum");
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-fixture", "Write a synthetic labeled corpus");
  std::string gen_out;
  FixtureParams fp;
  std::uint64_t gen_seed = 7;
  gen->add_option("--out", gen_out, "Output JSONL")->required();
  gen->add_option("--docs", fp.n_docs, "Number of documents");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--min-sentences", fp.min_sentences);
  gen->add_option("--max-sentences", fp.max_sentences);
  gen->add_option("--positive-rate", fp.positive_rate);
  gen->add_option("--paraphrase-rate", fp.paraphrase_rate);
  gen->add_option("--distractor-rate", fp.distractor_rate);
  gen->add_option("--id-prefix", fp.id_prefix);

  auto* make = app.add_subcommand("make-dataset", "Anonymize, label and build word-extraction examples");
  MakeDatasetFlags mf;
  make->add_option("--input", mf.input, "Raw corpus JSONL")->required();
  make->add_option("--out-dir", mf.out_dir, "Output directory")->required();
  make->add_option("--gold", mf.gold, "Hand-labeled documents used to tune the labeling rule");
  make->add_option("--embeddings", mf.embeddings, "Pretrained word vectors");
  make->add_option("--embedding-dim", mf.embedding_dim);
  make->add_option("--neighbors", mf.neighbors, "Embedding neighbours tried per unmatched token");
  make->add_option("--tau", mf.tau, "Minimum cosine for a neighbour substitution");
  make->add_option("--seed", mf.seed);
  make->add_flag("--relabel", mf.relabel, "Replace labels already present in the input");

  auto* train_se = app.add_subcommand("train-se", "Train the sentence extractor");
  TrainFlags se_flags;
  se_flags.attach(train_se);
  auto* train_we = app.add_subcommand("train-we", "Train the word extractor");
  TrainFlags we_flags;
  we_flags.attach(train_we);

  auto* summarize = app.add_subcommand("summarize", "Summarize documents with a trained model");
  SummarizeFlags sf;
  summarize->add_option("--model", sf.model, "Checkpoint")->required();
  summarize->add_option("--input", sf.input, "Documents (JSONL)")->required();
  summarize->add_option("--out", sf.out, "Summaries JSONL (stdout when omitted)");
  summarize->add_option("--limit", sf.limit, "none, words:N or bytes:N");
  summarize->add_option("--k", sf.k, "Sentences per summary");
  summarize->add_option("--dump-scores", sf.dump_scores, "Write per-sentence probabilities");
  summarize->add_option("--beam-width", sf.beam_width);
  summarize->add_option("--max-len", sf.max_len);
  summarize->add_option("--reranker", sf.reranker, "Reranker weights JSON");
  summarize->add_option("--nbest", sf.nbest, "Write the n-best lists as JSONL");
  summarize->add_flag("--raw", sf.raw, "Input is not yet anonymized and lowercased");

  auto* evaluate = app.add_subcommand("evaluate", "ROUGE of models and baselines against highlights");
  EvaluateFlags ef;
  evaluate->add_option("--input", ef.input, "Test documents with highlights")->required();
  evaluate->add_option("--model", ef.model, "Checkpoint");
  evaluate->add_flag("--baselines", ef.baselines, "Include LEAD-3");
  evaluate->add_option("--lreg-train", ef.lreg_train, "Labeled corpus for the logistic-regression baseline");
  evaluate->add_option("--embeddings", ef.embeddings, "Word vectors for the LREG features");
  evaluate->add_option("--limits", ef.limits, "Comma-separated limits");
  evaluate->add_option("--metric", ef.metric, "recall, precision or f1")
      ->check(CLI::IsMember({"recall", "precision", "f1"}));
  evaluate->add_option("--json", ef.json_out, "Write the report as JSON");
  evaluate->add_option("--seed", ef.seed);
  evaluate->add_flag("--raw", ef.raw, "Inputs are not yet anonymized and lowercased");

  auto* rouge = app.add_subcommand("rouge", "Score system summaries against references");
  std::string sys_path, ref_path, rouge_json, metric = "recall", agg = "max";
  std::vector<std::string> rouge_limits;
  rouge->add_option("--sys", sys_path, "System summaries JSONL")->required();
  rouge->add_option("--ref", ref_path, "References JSONL")->required();
  rouge->add_option("--limit", rouge_limits, "Limit (repeatable or comma-separated)");
  rouge->add_option("--metric", metric)->check(CLI::IsMember({"recall", "precision", "f1"}));
  rouge->add_option("--aggregate", agg, "Multi-reference aggregation")->check(CLI::IsMember({"max", "average"}));
  rouge->add_option("--json", rouge_json, "Write the report as JSON");

  auto* report = app.add_subcommand("report-attention", "Render per-sentence scores as a heat report");
  std::string rep_model, rep_input, rep_html, rep_text;
  bool rep_raw = false;
  report->add_option("--model", rep_model, "Sentence-extractor checkpoint")->required();
  report->add_option("--input", rep_input, "Documents (JSONL)")->required();
  report->add_option("--out", rep_html, "HTML output")->required();
  report->add_option("--text", rep_text, "Plain-text output");
  report->add_flag("--raw", rep_raw);

  auto* tune = app.add_subcommand("tune-reranker", "Fit reranker weights on validation n-best lists");
  std::string nbest_path, tune_ref, tune_out;
  tune->add_option("--nbest", nbest_path, "n-best JSONL from summarize --nbest")->required();
  tune->add_option("--ref", tune_ref, "References JSONL")->required();
  tune->add_option("--out", tune_out, "Weights JSON")->required();

  std::vector<std::string> argv;
  for (std::size_t i = args.size(); i > 1; --i) argv.push_back(args[i - 1]);
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "nsum: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*gen) {
      RngStream rng(gen_seed);
      WriteCorpus(gen_out, GenerateFixtureCorpus(rng, fp));
      return 0;
    }
    if (*make) return MakeDataset(mf, out);
    if (*train_se) return TrainSentence(se_flags, out);
    if (*train_we) return TrainWord(we_flags, out);
    if (*summarize) return Summarize(sf, out);
    if (*evaluate) return Evaluate(ef, out);
    if (*rouge) {
      const auto limits = rouge_limits.empty() ? std::vector<LimitSpec>{LimitSpec::None()} : ParseLimits(rouge_limits);
      const auto r = EvaluateCorpus(ReadSummaries(sys_path), ReadReferences(ref_path), limits,
                                    agg == "max" ? ReferenceAggregation::kMax : ReferenceAggregation::kAverage);
      out << r.to_table(metric);
      if (!rouge_json.empty()) WriteText(rouge_json, r.to_json());
      return 0;
    }
    if (*report) return ReportAttention(rep_model, rep_input, rep_html, rep_text, rep_raw, out);
    if (*tune) return TuneReranker(nbest_path, tune_ref, tune_out, out);
  } catch (const Error& e) {
    err << "nsum: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "nsum: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace nsum::cli
