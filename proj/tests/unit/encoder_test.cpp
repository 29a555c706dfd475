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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "nsum/encoder.hpp"
#include "nsum/gradcheck.hpp"
#include "test_util.hpp"

namespace nsum {
namespace {

using testing::ExpectErrorCode;

ModelDims SmallDims() {
  ModelDims dims;
  dims.word_dim = 5;
  dims.sentence_dim = 4;
  dims.hidden_dim = 3;
  dims.mlp_dim = 3;
  dims.attention_dim = 3;
  dims.kernel_widths = {1, 2, 3};
  dims.dropout = 0.0;
  return dims;
}

constexpr std::size_t kVocab = 12;

// Plain-loop reference for the sentence encoder: per width, tanh of the
// narrow convolution of each kernel, max over positions, summed across widths.
std::vector<double> ReferenceSentence(const ParameterSet<double>& params, const ModelDims& dims,
                                      std::vector<int> ids) {
  const auto& emb = params.get("embedding").value;
  const std::size_t d = dims.word_dim, f = dims.sentence_dim;
  std::vector<double> out(f, 0.0);
  for (std::size_t c : dims.kernel_widths) {
    std::vector<int> padded = ids;
    while (padded.size() < c) padded.push_back(Vocabulary::kPad);
    const auto& k = params.get("conv.w" + std::to_string(c)).value;
    const auto& b = params.get("conv.b" + std::to_string(c)).value;
    for (std::size_t j = 0; j < f; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t start = 0; start + c <= padded.size(); ++start) {
        double acc = b.data[j];
        for (std::size_t o = 0; o < c; ++o)
          for (std::size_t e = 0; e < d; ++e) {
            const double x = padded[start + o] == Vocabulary::kPad
                                 ? 0.0
                                 : emb.data[static_cast<std::size_t>(padded[start + o]) * d + e];
            acc += k.data[(j * c + o) * d + e] * x;
          }
        best = std::max(best, std::tanh(acc));
      }
      out[j] += best;
    }
  }
  return out;
}

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Reference LSTM over a sequence from a zero state; gate rows ordered
// input, forget, output, candidate acting on [h; x].
std::vector<std::vector<double>> ReferenceLstm(const ParameterSet<double>& params, const ModelDims& dims,
                                               const std::vector<std::vector<double>>& inputs) {
  const auto& w = params.get("doc_lstm.w").value;
  const auto& b = params.get("doc_lstm.b").value;
  const std::size_t hd = dims.hidden_dim, xd = inputs.empty() ? 0 : inputs[0].size();
  std::vector<double> h(hd, 0.0), c(hd, 0.0);
  std::vector<std::vector<double>> states;
  for (const auto& x : inputs) {
    std::vector<double> z(4 * hd);
    for (std::size_t r = 0; r < 4 * hd; ++r) {
      double acc = b.data[r];
      for (std::size_t k = 0; k < hd; ++k) acc += w.data[r * (hd + xd) + k] * h[k];
      for (std::size_t k = 0; k < xd; ++k) acc += w.data[r * (hd + xd) + hd + k] * x[k];
      z[r] = acc;
    }
    for (std::size_t k = 0; k < hd; ++k) {
      const double i = Sigmoid(z[k]), fg = Sigmoid(z[hd + k]), o = Sigmoid(z[2 * hd + k]);
      const double g = std::tanh(z[3 * hd + k]);
      c[k] = fg * c[k] + i * g;
      h[k] = o * std::tanh(c[k]);
    }
    states.push_back(h);
  }
  return states;
}

template <typename T>
struct Fixture {
  ParameterSet<T> params;
  DocumentReader<T> reader;
  explicit Fixture(const ModelDims& dims = SmallDims()) : reader(params, dims, kVocab) {
    RngStream rng(4);
    params.init_uniform(rng, 0.5);
    auto& emb = params.get("embedding").value;
    for (std::size_t e = 0; e < dims.word_dim; ++e) emb.data[e] = 0;
  }
};

TEST(EncodeSentence, ZeroKernelsGiveZeroVector) {
  Fixture<double> fx;
  for (std::size_t c : {1, 2, 3}) {
    for (auto& v : fx.params.get("conv.w" + std::to_string(c)).value.data) v = 0;
    for (auto& v : fx.params.get("conv.b" + std::to_string(c)).value.data) v = 0;
  }
  Tape<double> tape;
  const std::vector<int> ids = {4, 5, 6};
  for (double v : tape.value(fx.reader.encode_sentence(tape, ids)).data) EXPECT_EQ(v, 0.0);
}

TEST(EncodeSentence, OneTokenSeesOnlyTheWidthOneBank) {
  Fixture<double> fx;
  for (std::size_t c : {2, 3}) {
    for (auto& v : fx.params.get("conv.w" + std::to_string(c)).value.data) v = 0;
    for (auto& v : fx.params.get("conv.b" + std::to_string(c)).value.data) v = 0;
  }
  Tape<double> tape;
  const std::vector<int> ids = {7};
  const auto out = tape.value(fx.reader.encode_sentence(tape, ids));
  const auto& k = fx.params.get("conv.w1").value;
  const auto& b = fx.params.get("conv.b1").value;
  const auto& emb = fx.params.get("embedding").value;
  for (std::size_t j = 0; j < 4; ++j) {
    double expect = b.data[j];
    for (std::size_t e = 0; e < 5; ++e) expect += k.data[j * 5 + e] * emb.data[7 * 5 + e];
    EXPECT_NEAR(out.data[j], std::tanh(expect), 1e-12);
  }
}

TEST(EncodeSentence, MatchesReferenceLoop) {
  Fixture<double> fx;
  RngStream rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> ids(1 + rng.uniform_int(6));
    for (auto& id : ids) id = static_cast<int>(4 + rng.uniform_int(kVocab - 4));
    Tape<double> tape;
    const auto out = tape.value(fx.reader.encode_sentence(tape, ids));
    const auto ref = ReferenceSentence(fx.params, SmallDims(), ids);
    for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(out.data[j], ref[j], 1e-12);
  }
}

TEST(EncodeSentence, FloatAgreesWithDoubleReference) {
  Fixture<double> ref_fx;
  Fixture<float> fx;
  for (std::size_t i = 0; i < fx.params.size(); ++i)
    for (std::size_t k = 0; k < fx.params[i].value.data.size(); ++k)
      fx.params[i].value.data[k] = static_cast<float>(ref_fx.params[i].value.data[k]);
  const std::vector<int> ids = {4, 9, 5, 11, 6};
  Tape<float> tape;
  const auto out = tape.value(fx.reader.encode_sentence(tape, ids));
  const auto ref = ReferenceSentence(ref_fx.params, SmallDims(), ids);
  for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(out.data[j], ref[j], 1e-5);
}

TEST(EncodeSentence, UnigramOnlyEncoderIgnoresOrder) {
  ModelDims dims = SmallDims();
  dims.kernel_widths = {1};
  Fixture<double> fx(dims);
  const std::vector<int> a = {4, 8, 10, 5}, b = {10, 5, 4, 8};
  Tape<double> tape;
  const auto narrow_a = tape.value(fx.reader.encode_sentence(tape, a)).data;
  const auto narrow_b = tape.value(fx.reader.encode_sentence(tape, b)).data;
  EXPECT_EQ(narrow_a, narrow_b);
  Fixture<double> wide;
  const auto wide_a = tape.value(wide.reader.encode_sentence(tape, a)).data;
  const auto wide_b = tape.value(wide.reader.encode_sentence(tape, b)).data;
  EXPECT_NE(wide_a, wide_b);
}

TEST(EncodeSentence, EmptySentenceSignals) {
  Fixture<double> fx;
  Tape<double> tape;
  ExpectErrorCode("empty-sentence", [&] { fx.reader.encode_sentence(tape, std::vector<int>{}); });
}

std::vector<Var> SentenceVectors(Tape<double>& tape, RngStream& rng, std::size_t m, std::size_t dim) {
  std::vector<Var> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(tape.constant(testing::RandomTensor<double>(rng, {dim}, 1.0)));
  return out;
}

TEST(EncodeDocument, ZeroWeightsGiveZeroStates) {
  Fixture<double> fx;
  for (auto& v : fx.params.get("doc_lstm.w").value.data) v = 0;
  for (auto& v : fx.params.get("doc_lstm.b").value.data) v = 0;
  Tape<double> tape;
  RngStream rng(1);
  const auto enc = fx.reader.encode_document(tape, SentenceVectors(tape, rng, 4, 4));
  ASSERT_EQ(enc.length(), 4u);
  for (const Var& h : enc.states)
    for (double v : tape.value(h).data) EXPECT_EQ(v, 0.0);
}

TEST(EncodeDocument, MatchesReferenceLstm) {
  Fixture<double> fx;
  Tape<double> tape;
  RngStream rng(2);
  const auto vectors = SentenceVectors(tape, rng, 5, 4);
  const auto enc = fx.reader.encode_document(tape, vectors);
  std::vector<std::vector<double>> inputs;
  for (const Var& v : vectors) inputs.push_back(tape.value(v).data);
  const auto ref = ReferenceLstm(fx.params, SmallDims(), inputs);
  for (std::size_t t = 0; t < ref.size(); ++t)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(tape.value(enc.states[t]).data[k], ref[t][k], 1e-12);
  EXPECT_EQ(tape.value(enc.last_state).data, tape.value(enc.states.back()).data);
}

TEST(EncodeDocument, PrefixReproducesEarlierStates) {
  Fixture<double> fx;
  Tape<double> tape;
  RngStream rng(3);
  const auto vectors = SentenceVectors(tape, rng, 6, 4);
  const auto full = fx.reader.encode_document(tape, vectors);
  for (std::size_t t = 1; t <= 6; ++t) {
    const auto prefix = fx.reader.encode_document(tape, std::span<const Var>(vectors.data(), t));
    for (std::size_t i = 0; i < t; ++i) EXPECT_EQ(tape.value(prefix.states[i]).data, tape.value(full.states[i]).data);
  }
}

TEST(EncodeDocument, MaskedPaddingLeavesRealStatesUnchanged) {
  Fixture<double> fx;
  Tape<double> tape;
  RngStream rng(4);
  auto vectors = SentenceVectors(tape, rng, 3, 4);
  const auto plain = fx.reader.encode_document(tape, vectors);
  const auto pads = SentenceVectors(tape, rng, 2, 4);
  vectors.insert(vectors.end(), pads.begin(), pads.end());
  const auto masked = fx.reader.encode_document(tape, vectors, {true, true, true, false, false});
  ASSERT_EQ(masked.length(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(tape.value(masked.states[i]).data, tape.value(plain.states[i]).data);
}

EncodedDocument RandomDocument(RngStream& rng, std::size_t sentences) {
  EncodedDocument d;
  for (std::size_t s = 0; s < sentences; ++s) {
    std::vector<int> ids(1 + rng.uniform_int(7));
    for (auto& id : ids) id = static_cast<int>(4 + rng.uniform_int(kVocab - 4));
    d.sentences.push_back(ids);
  }
  return d;
}

TEST(Reader, BatchedReadMatchesPerDocumentRead) {
  Fixture<float> fx;
  RngStream rng(5);
  std::vector<EncodedDocument> docs = {RandomDocument(rng, 2), RandomDocument(rng, 5), RandomDocument(rng, 1)};
  const Batch batch = PadBatch(docs);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    Tape<float> tape;
    RngStream r1(0), r2(0);
    const auto single = fx.reader.read(tape, docs[d], false, r1);
    const auto batched = fx.reader.read(tape, batch, d, false, r2);
    ASSERT_EQ(batched.length(), docs[d].sentences.size());
    for (std::size_t t = 0; t < single.length(); ++t) {
      const auto& a = tape.value(single.states[t]).data;
      const auto& b = tape.value(batched.states[t]).data;
      for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-5);
    }
  }
}

TEST(Reader, StatesAreFiniteAndSized) {
  Fixture<float> fx;
  RngStream rng(6);
  Tape<float> tape;
  const auto enc = fx.reader.read(tape, RandomDocument(rng, 4), true, rng);
  ASSERT_EQ(enc.sentence_vectors.size(), 4u);
  for (const Var& h : enc.states) {
    ASSERT_EQ(tape.value(h).data.size(), 3u);
    for (float v : tape.value(h).data) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(Reader, PadEmbeddingRowStaysZeroAfterBackward) {
  Fixture<double> fx;
  EncodedDocument doc;
  doc.sentences = {{4, 5}};
  Tape<double> tape;
  RngStream rng(7);
  const auto enc = fx.reader.read(tape, doc, false, rng);
  tape.backward(ops::sum(tape, enc.last_state));
  const auto& g = fx.params.get("embedding").grad;
  for (std::size_t e = 0; e < 5; ++e) EXPECT_EQ(g.data[e], 0.0);
}

TEST(Reader, TwoSentenceGradientCheck) {
  Fixture<double> fx;
  EncodedDocument doc;
  doc.sentences = {{4, 7, 9}, {5}};
  const auto r = GradCheck(fx.params, [&](Tape<double>& tape) {
    RngStream rng(1);
    const auto enc = fx.reader.read(tape, doc, false, rng);
    Var total = ops::sum(tape, enc.states[0]);
    return ops::add(tape, total, ops::sum(tape, ops::mul(tape, enc.last_state, enc.last_state)));
  });
  EXPECT_GT(r.checked, 50u);
  EXPECT_LT(r.max_relative_error, 1e-4);
}

TEST(ModelDims, InvalidDimsSignal) {
  ModelDims dims = SmallDims();
  dims.kernel_widths.clear();
  ExpectErrorCode("invalid-config", [&] { dims.validate(); });
  dims = SmallDims();
  dims.dropout = 1.0;
  ExpectErrorCode("invalid-config", [&] { dims.validate(); });
}

}  // namespace
}  // namespace nsum
