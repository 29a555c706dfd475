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

#ifndef NSUM_OPS_HPP_
#define NSUM_OPS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "nsum/rng.hpp"
#include "nsum/tape.hpp"

// Differentiable operations over Tape variables. Every op validates
// shapes and signals "shape-error" on mismatch.
namespace nsum::ops {

// Elementwise; operands must have identical shapes.
template <typename T> Var add(Tape<T>& tape, Var a, Var b);
template <typename T> Var mul(Tape<T>& tape, Var a, Var b);
template <typename T> Var scale(Tape<T>& tape, Var a, T factor);
// Multiplies every element of v by the scalar variable s (shape {1}).
template <typename T> Var scale_by(Tape<T>& tape, Var s, Var v);
template <typename T> Var tanh(Tape<T>& tape, Var a);
template <typename T> Var sigmoid(Tape<T>& tape, Var a);
template <typename T> Var sum(Tape<T>& tape, Var a);

// 1-D helpers. concat flattens its operands.
template <typename T> Var concat(Tape<T>& tape, std::span<const Var> parts);
template <typename T> Var slice(Tape<T>& tape, Var a, std::size_t offset, std::size_t length);
// Stacks equal-length vectors into a [k x n] matrix.
template <typename T> Var stack_rows(Tape<T>& tape, std::span<const Var> rows);
// Appends zero rows to a [n x d] matrix so it has at least `rows` rows.
template <typename T> Var pad_rows(Tape<T>& tape, Var x, std::size_t rows);

// Dense algebra.
template <typename T> Var matvec(Tape<T>& tape, Var m, Var x);     // [r x c]·[c] -> [r]
template <typename T> Var vecmat(Tape<T>& tape, Var x, Var m);     // [r]·[r x c] -> [c]
template <typename T> Var matmul(Tape<T>& tape, Var a, Var b);     // [m x k]·[k x n]
template <typename T> Var matmul_nt(Tape<T>& tape, Var a, Var b);  // [m x k]·[n x k]^T
template <typename T> Var add_rowwise(Tape<T>& tape, Var m, Var v);  // m[i,:] + v

// Gathers rows of an embedding matrix [V x d] -> [n x d]. Rows equal to
// frozen_id receive no gradient (used to pin the PAD vector at zero).
template <typename T>
Var embedding_lookup(Tape<T>& tape, Var table, std::span<const int> ids, int frozen_id = -1);

// Narrow temporal convolution followed by tanh.
//   x: [n x d] word matrix.
//   kernels: [F x c x d] bank (or a single [c x d] kernel).
//   bias: [F] (or {1} for a single kernel).
// Returns the [(n-c+1) x F] feature maps, or a length n-c+1 vector for a
// single kernel. Signals "kernel-exceeds-length" when n < c.
template <typename T> Var conv1d_narrow(Tape<T>& tape, Var x, Var kernels, Var bias);

struct MaxResult {
  double value;
  std::size_t argmax;
};
// Ties resolve to the lowest index. Signals "empty-pool" on empty input.
template <typename T> MaxResult max_over_time(std::span<const T> f);
// Column-wise max over time: [L x F] -> [F]; a vector reduces to {1}.
// The gradient routes only to the argmax of each column.
template <typename T> Var max_over_time(Tape<T>& tape, Var feature_map);

// One LSTM step. weights: [4H x (H + X)] acting on [h_prev; x], gate rows
// ordered (input, forget, output, candidate); bias: [4H].
// Returns the packed state [h; c] of length 2H.
template <typename T>
Var lstm_step(Tape<T>& tape, Var x, Var h_prev, Var c_prev, Var weights, Var bias);

struct LstmState {
  Var h;
  Var c;
};
template <typename T>
LstmState lstm_cell(Tape<T>& tape, Var x, const LstmState& prev, Var weights, Var bias);

// Softmax restricted to positions where mask is true; masked entries are
// exactly zero. Signals "empty-support" if every position is masked.
template <typename T>
std::vector<T> masked_softmax(std::span<const T> scores, const std::vector<bool>& mask);
template <typename T>
Var masked_softmax(Tape<T>& tape, Var scores, const std::vector<bool>& mask);

// Inverted dropout: training zeroes entries with probability p and scales
// survivors by 1/(1-p); evaluation is the identity.
template <typename T>
Var dropout(Tape<T>& tape, Var x, double p, bool train, RngStream& rng);

// -[y log sigmoid(z) + (1-y) log(1 - sigmoid(z))] for a scalar logit.
template <typename T> Var bce_with_logits(Tape<T>& tape, Var logit, T label);

// -log sigmoid(u_target) - sum_k log sigmoid(-u_noise_k).
template <typename T>
Var negative_sampling_loss(Tape<T>& tape, Var logits, std::size_t target,
                           std::span<const std::size_t> noise);

// -log softmax(logits)[target] over unmasked positions.
template <typename T>
Var softmax_cross_entropy(Tape<T>& tape, Var logits, const std::vector<bool>& mask,
                          std::size_t target);

}  // namespace nsum::ops

#endif  // NSUM_OPS_HPP_
