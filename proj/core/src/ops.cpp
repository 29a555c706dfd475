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

#include "nsum/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace nsum::ops {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;
template <typename T>
using VecMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>;
template <typename T>
using ConstVecMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

void CheckShape(bool ok, const std::string& what) {
  if (!ok) Fail("shape-error", what);
}

template <typename T>
ConstMatMap<T> AsMatrix(const Tensor<T>& t) {
  return ConstMatMap<T>(t.data.data(), static_cast<Eigen::Index>(t.rows()),
                        static_cast<Eigen::Index>(t.cols()));
}

template <typename T>
ConstVecMap<T> AsVector(const Tensor<T>& t) {
  return ConstVecMap<T>(t.data.data(), static_cast<Eigen::Index>(t.size()));
}

template <typename T>
ConstVecMap<T> AsVector(std::span<const T> s) {
  return ConstVecMap<T>(s.data(), static_cast<Eigen::Index>(s.size()));
}

template <typename T>
VecMap<T> AsVector(std::span<T> s) {
  return VecMap<T>(s.data(), static_cast<Eigen::Index>(s.size()));
}

template <typename T>
MatMap<T> AsMatrix(std::span<T> s, std::size_t rows, std::size_t cols) {
  return MatMap<T>(s.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

template <typename T>
ConstMatMap<T> AsMatrix(std::span<const T> s, std::size_t rows, std::size_t cols) {
  return ConstMatMap<T>(s.data(), static_cast<Eigen::Index>(rows),
                        static_cast<Eigen::Index>(cols));
}

template <typename T>
T StableSigmoid(T x) {
  if (x >= 0) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

// log(1 + exp(x)) without overflow.
template <typename T>
T Softplus(T x) {
  return std::max(x, T(0)) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

template <typename T>
Var add(Tape<T>& tape, Var a, Var b) {
  const auto& va = tape.value(a);
  const auto& vb = tape.value(b);
  CheckShape(va.shape == vb.shape, "add: " + ShapeString(va.shape) + " vs " + ShapeString(vb.shape));
  Tensor<T> out(va.shape);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] + vb[i];
  const Var in[] = {a, b};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    auto g = t.out_grad(self);
    for (std::size_t k = 0; k < 2; ++k) {
      if (!t.input_needs_grad(self, k)) continue;
      auto gi = t.input_grad(self, k);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
  });
}

template <typename T>
Var mul(Tape<T>& tape, Var a, Var b) {
  const auto& va = tape.value(a);
  const auto& vb = tape.value(b);
  CheckShape(va.shape == vb.shape, "mul: " + ShapeString(va.shape) + " vs " + ShapeString(vb.shape));
  Tensor<T> out(va.shape);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] * vb[i];
  const Var in[] = {a, b};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    auto g = t.out_grad(self);
    const auto& x0 = t.value_at(t.input(self, 0));
    const auto& x1 = t.value_at(t.input(self, 1));
    if (t.input_needs_grad(self, 0)) {
      auto gi = t.input_grad(self, 0);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * x1[i];
    }
    if (t.input_needs_grad(self, 1)) {
      auto gi = t.input_grad(self, 1);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * x0[i];
    }
  });
}

template <typename T>
Var scale(Tape<T>& tape, Var a, T factor) {
  Tensor<T> out = tape.value(a);
  for (T& x : out.data) x *= factor;
  const Var in[] = {a};
  return tape.record(std::move(out), in, [factor](Tape<T>& t, std::uint32_t self) {
    auto g = t.out_grad(self);
    auto gi = t.input_grad(self, 0);
    for (std::size_t i = 0; i < g.size(); ++i) gi[i] += factor * g[i];
  });
}

template <typename T>
Var scale_by(Tape<T>& tape, Var s, Var v) {
  const auto& vs = tape.value(s);
  CheckShape(vs.size() == 1, "scale_by: scale must be a scalar");
  const T factor = vs[0];
  Tensor<T> out = tape.value(v);
  for (T& x : out.data) x *= factor;
  const Var in[] = {s, v};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    auto g = t.out_grad(self);
    const T f = t.value_at(t.input(self, 0))[0];
    const auto& vv = t.value_at(t.input(self, 1));
    if (t.input_needs_grad(self, 0)) {
      T acc = 0;
      for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * vv[i];
      t.input_grad(self, 0)[0] += acc;
    }
    if (t.input_needs_grad(self, 1)) {
      auto gi = t.input_grad(self, 1);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += f * g[i];
    }
  });
}

template <typename T>
Var tanh(Tape<T>& tape, Var a) {
  Tensor<T> out = tape.value(a);
  for (T& x : out.data) x = std::tanh(x);
  const Var in[] = {a};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    auto g = t.out_grad(self);
    const auto& y = t.value_at(self);
    auto gi = t.input_grad(self, 0);
    for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * (T(1) - y[i] * y[i]);
  });
}

template <typename T>
Var sigmoid(Tape<T>& tape, Var a) {
  Tensor<T> out = tape.value(a);
  for (T& x : out.data) x = StableSigmoid(x);
  const Var in[] = {a};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    auto g = t.out_grad(self);
    const auto& y = t.value_at(self);
    auto gi = t.input_grad(self, 0);
    for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * y[i] * (T(1) - y[i]);
  });
}

template <typename T>
Var sum(Tape<T>& tape, Var a) {
  const auto& va = tape.value(a);
  T acc = 0;
  for (T x : va.data) acc += x;
  const Var in[] = {a};
  return tape.record(Tensor<T>::Scalar(acc), in, [](Tape<T>& t, std::uint32_t self) {
    const T g = t.out_grad(self)[0];
    for (T& gi : t.input_grad(self, 0)) gi += g;
  });
}

template <typename T>
Var concat(Tape<T>& tape, std::span<const Var> parts) {
  CheckShape(!parts.empty(), "concat: no operands");
  std::vector<T> data;
  for (Var p : parts) {
    const auto& v = tape.value(p);
    data.insert(data.end(), v.data.begin(), v.data.end());
  }
  return tape.record(Tensor<T>::Vector(std::move(data)), parts,
                     [n = parts.size()](Tape<T>& t, std::uint32_t self) {
                       auto g = t.out_grad(self);
                       std::size_t offset = 0;
                       for (std::size_t k = 0; k < n; ++k) {
                         const std::size_t len = t.value_at(t.input(self, k)).size();
                         if (t.input_needs_grad(self, k)) {
                           auto gi = t.input_grad(self, k);
                           for (std::size_t i = 0; i < len; ++i) gi[i] += g[offset + i];
                         }
                         offset += len;
                       }
                     });
}

template <typename T>
Var slice(Tape<T>& tape, Var a, std::size_t offset, std::size_t length) {
  const auto& va = tape.value(a);
  CheckShape(offset + length <= va.size(), "slice out of range");
  std::vector<T> data(va.data.begin() + offset, va.data.begin() + offset + length);
  const Var in[] = {a};
  return tape.record(Tensor<T>::Vector(std::move(data)), in,
                     [offset](Tape<T>& t, std::uint32_t self) {
                       auto g = t.out_grad(self);
                       auto gi = t.input_grad(self, 0);
                       for (std::size_t i = 0; i < g.size(); ++i) gi[offset + i] += g[i];
                     });
}

template <typename T>
Var stack_rows(Tape<T>& tape, std::span<const Var> rows) {
  CheckShape(!rows.empty(), "stack_rows: no rows");
  const std::size_t n = tape.value(rows[0]).size();
  std::vector<T> data;
  data.reserve(rows.size() * n);
  for (Var r : rows) {
    const auto& v = tape.value(r);
    CheckShape(v.size() == n, "stack_rows: ragged rows");
    data.insert(data.end(), v.data.begin(), v.data.end());
  }
  return tape.record(Tensor<T>({rows.size(), n}, std::move(data)), rows,
                     [k = rows.size(), n](Tape<T>& t, std::uint32_t self) {
                       auto g = t.out_grad(self);
                       for (std::size_t r = 0; r < k; ++r) {
                         if (!t.input_needs_grad(self, r)) continue;
                         auto gi = t.input_grad(self, r);
                         for (std::size_t i = 0; i < n; ++i) gi[i] += g[r * n + i];
                       }
                     });
}

template <typename T>
Var pad_rows(Tape<T>& tape, Var x, std::size_t rows) {
  const auto& vx = tape.value(x);
  CheckShape(vx.rank() == 2, "pad_rows expects a matrix");
  if (vx.rows() >= rows) return x;
  Tensor<T> out({rows, vx.cols()});
  std::copy(vx.data.begin(), vx.data.end(), out.data.begin());
  const Var in[] = {x};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    auto g = t.out_grad(self);
    auto gi = t.input_grad(self, 0);
    for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += g[i];
  });
}

template <typename T>
Var matvec(Tape<T>& tape, Var m, Var x) {
  const auto& vm = tape.value(m);
  const auto& vx = tape.value(x);
  CheckShape(vm.rank() == 2 && vm.cols() == vx.size(),
             "matvec: " + ShapeString(vm.shape) + " x " + ShapeString(vx.shape));
  Tensor<T> out({vm.rows()});
  AsVector(std::span<T>(out.data)) = AsMatrix(vm) * AsVector(vx);
  const Var in[] = {m, x};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    const auto g = AsVector(t.out_grad(self));
    const auto& mv = t.value_at(t.input(self, 0));
    const auto& xv = t.value_at(t.input(self, 1));
    if (t.input_needs_grad(self, 0))
      AsMatrix(t.input_grad(self, 0), mv.rows(), mv.cols()).noalias() +=
          g * AsVector(xv).transpose();
    if (t.input_needs_grad(self, 1))
      AsVector(t.input_grad(self, 1)).noalias() += AsMatrix(mv).transpose() * g;
  });
}

template <typename T>
Var vecmat(Tape<T>& tape, Var x, Var m) {
  const auto& vm = tape.value(m);
  const auto& vx = tape.value(x);
  CheckShape(vm.rank() == 2 && vm.rows() == vx.size(),
             "vecmat: " + ShapeString(vx.shape) + " x " + ShapeString(vm.shape));
  Tensor<T> out({vm.cols()});
  AsVector(std::span<T>(out.data)) = AsMatrix(vm).transpose() * AsVector(vx);
  const Var in[] = {x, m};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    const auto g = AsVector(t.out_grad(self));
    const auto& xv = t.value_at(t.input(self, 0));
    const auto& mv = t.value_at(t.input(self, 1));
    if (t.input_needs_grad(self, 0))
      AsVector(t.input_grad(self, 0)).noalias() += AsMatrix(mv) * g;
    if (t.input_needs_grad(self, 1))
      AsMatrix(t.input_grad(self, 1), mv.rows(), mv.cols()).noalias() +=
          AsVector(xv) * g.transpose();
  });
}

template <typename T>
Var matmul(Tape<T>& tape, Var a, Var b) {
  const auto& va = tape.value(a);
  const auto& vb = tape.value(b);
  CheckShape(va.rank() == 2 && vb.rank() == 2 && va.cols() == vb.rows(),
             "matmul: " + ShapeString(va.shape) + " x " + ShapeString(vb.shape));
  Tensor<T> out({va.rows(), vb.cols()});
  AsMatrix(std::span<T>(out.data), va.rows(), vb.cols()).noalias() = AsMatrix(va) * AsMatrix(vb);
  const Var in[] = {a, b};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    const auto& av = t.value_at(t.input(self, 0));
    const auto& bv = t.value_at(t.input(self, 1));
    const auto g = AsMatrix(t.out_grad(self), av.rows(), bv.cols());
    if (t.input_needs_grad(self, 0))
      AsMatrix(t.input_grad(self, 0), av.rows(), av.cols()).noalias() +=
          g * AsMatrix(bv).transpose();
    if (t.input_needs_grad(self, 1))
      AsMatrix(t.input_grad(self, 1), bv.rows(), bv.cols()).noalias() +=
          AsMatrix(av).transpose() * g;
  });
}

template <typename T>
Var matmul_nt(Tape<T>& tape, Var a, Var b) {
  const auto& va = tape.value(a);
  const auto& vb = tape.value(b);
  CheckShape(va.rank() == 2 && vb.rank() == 2 && va.cols() == vb.cols(),
             "matmul_nt: " + ShapeString(va.shape) + " x " + ShapeString(vb.shape) + "^T");
  Tensor<T> out({va.rows(), vb.rows()});
  AsMatrix(std::span<T>(out.data), va.rows(), vb.rows()).noalias() =
      AsMatrix(va) * AsMatrix(vb).transpose();
  const Var in[] = {a, b};
  return tape.record(std::move(out), in, [](Tape<T>& t, std::uint32_t self) {
    const auto& av = t.value_at(t.input(self, 0));
    const auto& bv = t.value_at(t.input(self, 1));
    const auto g = AsMatrix(t.out_grad(self), av.rows(), bv.rows());
    if (t.input_needs_grad(self, 0))
      AsMatrix(t.input_grad(self, 0), av.rows(), av.cols()).noalias() += g * AsMatrix(bv);
    if (t.input_needs_grad(self, 1))
      AsMatrix(t.input_grad(self, 1), bv.rows(), bv.cols()).noalias() +=
          g.transpose() * AsMatrix(av);
  });
}

template <typename T>
Var add_rowwise(Tape<T>& tape, Var m, Var v) {
  const auto& vm = tape.value(m);
  const auto& vv = tape.value(v);
  CheckShape(vm.rank() == 2 && vm.cols() == vv.size(),
             "add_rowwise: " + ShapeString(vm.shape) + " + " + ShapeString(vv.shape));
  Tensor<T> out = vm;
  const std::size_t cols = vm.cols();
  for (std::size_t r = 0; r < vm.rows(); ++r)
    for (std::size_t c = 0; c < cols; ++c) out.data[r * cols + c] += vv[c];
  const Var in[] = {m, v};
  return tape.record(std::move(out), in, [cols](Tape<T>& t, std::uint32_t self) {
    auto g = t.out_grad(self);
    if (t.input_needs_grad(self, 0)) {
      auto gi = t.input_grad(self, 0);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
    if (t.input_needs_grad(self, 1)) {
      auto gi = t.input_grad(self, 1);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i % cols] += g[i];
    }
  });
}

template <typename T>
Var embedding_lookup(Tape<T>& tape, Var table, std::span<const int> ids, int frozen_id) {
  const auto& vt = tape.value(table);
  CheckShape(vt.rank() == 2, "embedding table must be a matrix");
  const std::size_t d = vt.cols();
  Tensor<T> out({ids.size(), d});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    Require(ids[r] >= 0 && static_cast<std::size_t>(ids[r]) < vt.rows(), "index-error",
            "embedding id out of range: " + std::to_string(ids[r]));
    std::copy_n(vt.data.begin() + static_cast<std::ptrdiff_t>(ids[r] * d), d,
                out.data.begin() + static_cast<std::ptrdiff_t>(r * d));
  }
  const Var in[] = {table};
  return tape.record(
      std::move(out), in,
      [idx = std::vector<int>(ids.begin(), ids.end()), d, frozen_id](Tape<T>& t,
                                                                     std::uint32_t self) {
        auto g = t.out_grad(self);
        auto gi = t.input_grad(self, 0);
        for (std::size_t r = 0; r < idx.size(); ++r) {
          if (idx[r] == frozen_id) continue;
          const std::size_t base = static_cast<std::size_t>(idx[r]) * d;
          for (std::size_t j = 0; j < d; ++j) gi[base + j] += g[r * d + j];
        }
      });
}

template <typename T>
Var conv1d_narrow(Tape<T>& tape, Var x, Var kernels, Var bias) {
  const auto& vx = tape.value(x);
  const auto& vk = tape.value(kernels);
  const auto& vb = tape.value(bias);
  CheckShape(vx.rank() == 2, "conv1d_narrow: input must be [n x d]");
  const bool single = vk.rank() == 2;
  CheckShape(single || vk.rank() == 3, "conv1d_narrow: kernel must be [c x d] or [F x c x d]");
  const std::size_t filters = single ? 1 : vk.shape[0];
  const std::size_t width = single ? vk.shape[0] : vk.shape[1];
  const std::size_t d = vk.shape.back();
  const std::size_t n = vx.rows();
  CheckShape(vx.cols() == d, "conv1d_narrow: kernel and input disagree on embedding size");
  CheckShape(vb.size() == filters, "conv1d_narrow: one bias per kernel expected");
  CheckShape(width >= 1, "conv1d_narrow: kernel width must be positive");
  if (n < width)
    Fail("kernel-exceeds-length", "sentence of length " + std::to_string(n) +
                                      " is shorter than kernel width " + std::to_string(width));
  const std::size_t len = n - width + 1;
  const std::size_t span_len = width * d;

  using Strided = Eigen::Map<const RowMat<T>, Eigen::Unaligned, Eigen::OuterStride<>>;
  Strided windows(vx.data.data(), static_cast<Eigen::Index>(len),
                  static_cast<Eigen::Index>(span_len), Eigen::OuterStride<>(static_cast<Eigen::Index>(d)));
  const auto kmat = AsMatrix(std::span<const T>(vk.data), filters, span_len);

  Tensor<T> out(single ? Shape{len} : Shape{len, filters});
  auto omat = AsMatrix(std::span<T>(out.data), len, filters);
  omat.noalias() = windows * kmat.transpose();
  for (std::size_t j = 0; j < len; ++j)
    for (std::size_t f = 0; f < filters; ++f)
      out.data[j * filters + f] = std::tanh(out.data[j * filters + f] + vb[f]);

  const Var in[] = {x, kernels, bias};
  return tape.record(
      std::move(out), in,
      [len, filters, span_len, d](Tape<T>& t, std::uint32_t self) {
        auto g = t.out_grad(self);
        const auto& y = t.value_at(self);
        RowMat<T> gpre(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(filters));
        for (std::size_t i = 0; i < len * filters; ++i)
          gpre.data()[i] = g[i] * (T(1) - y[i] * y[i]);
        const auto& xv = t.value_at(t.input(self, 0));
        const auto& kv = t.value_at(t.input(self, 1));
        const auto kmat = AsMatrix(std::span<const T>(kv.data), filters, span_len);
        if (t.input_needs_grad(self, 0)) {
          RowMat<T> gw = gpre * kmat;
          auto gx = t.input_grad(self, 0);
          for (std::size_t j = 0; j < len; ++j)
            for (std::size_t k = 0; k < span_len; ++k)
              gx[j * d + k] += gw(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
        }
        if (t.input_needs_grad(self, 1)) {
          Strided windows(xv.data.data(), static_cast<Eigen::Index>(len),
                          static_cast<Eigen::Index>(span_len),
                          Eigen::OuterStride<>(static_cast<Eigen::Index>(d)));
          AsMatrix(t.input_grad(self, 1), filters, span_len).noalias() +=
              gpre.transpose() * windows;
        }
        if (t.input_needs_grad(self, 2)) {
          auto gb = t.input_grad(self, 2);
          for (std::size_t j = 0; j < len; ++j)
            for (std::size_t f = 0; f < filters; ++f) gb[f] += gpre(j, f);
        }
      });
}

template <typename T>
MaxResult max_over_time(std::span<const T> f) {
  if (f.empty()) Fail("empty-pool", "max over an empty feature map");
  std::size_t best = 0;
  for (std::size_t j = 1; j < f.size(); ++j)
    if (f[j] > f[best]) best = j;
  return MaxResult{static_cast<double>(f[best]), best};
}

template <typename T>
Var max_over_time(Tape<T>& tape, Var feature_map) {
  const auto& vf = tape.value(feature_map);
  if (vf.size() == 0) Fail("empty-pool", "max over an empty feature map");
  const std::size_t len = vf.rank() == 1 ? vf.size() : vf.rows();
  const std::size_t filters = vf.rank() == 1 ? 1 : vf.cols();
  std::vector<std::size_t> argmax(filters, 0);
  Tensor<T> out({filters});
  for (std::size_t f = 0; f < filters; ++f) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < len; ++j)
      if (vf.data[j * filters + f] > vf.data[best * filters + f]) best = j;
    argmax[f] = best;
    out[f] = vf.data[best * filters + f];
  }
  const Var in[] = {feature_map};
  return tape.record(std::move(out), in,
                     [argmax = std::move(argmax), filters](Tape<T>& t, std::uint32_t self) {
                       auto g = t.out_grad(self);
                       auto gi = t.input_grad(self, 0);
                       for (std::size_t f = 0; f < filters; ++f) gi[argmax[f] * filters + f] += g[f];
                     });
}

template <typename T>
Var lstm_step(Tape<T>& tape, Var x, Var h_prev, Var c_prev, Var weights, Var bias) {
  const auto& vx = tape.value(x);
  const auto& vh = tape.value(h_prev);
  const auto& vc = tape.value(c_prev);
  const auto& vw = tape.value(weights);
  const auto& vb = tape.value(bias);
  const std::size_t hd = vh.size();
  const std::size_t xd = vx.size();
  CheckShape(vc.size() == hd, "lstm_step: cell and hidden sizes differ");
  CheckShape(vw.rank() == 2 && vw.rows() == 4 * hd && vw.cols() == hd + xd,
             "lstm_step: weights " + ShapeString(vw.shape) + " incompatible with h=" +
                 std::to_string(hd) + ", x=" + std::to_string(xd));
  CheckShape(vb.size() == 4 * hd, "lstm_step: bias must have 4H entries");

  Eigen::Matrix<T, Eigen::Dynamic, 1> input(static_cast<Eigen::Index>(hd + xd));
  input.head(static_cast<Eigen::Index>(hd)) = AsVector(vh);
  input.tail(static_cast<Eigen::Index>(xd)) = AsVector(vx);
  Eigen::Matrix<T, Eigen::Dynamic, 1> z = AsMatrix(vw) * input + AsVector(vb);

  // gates = [i, f, o, c_hat]
  std::vector<T> gates(4 * hd);
  for (std::size_t k = 0; k < 3 * hd; ++k) gates[k] = StableSigmoid(z[static_cast<Eigen::Index>(k)]);
  for (std::size_t k = 3 * hd; k < 4 * hd; ++k) gates[k] = std::tanh(z[static_cast<Eigen::Index>(k)]);

  Tensor<T> out({2 * hd});
  for (std::size_t k = 0; k < hd; ++k) {
    const T c = gates[hd + k] * vc[k] + gates[k] * gates[3 * hd + k];
    out[hd + k] = c;
    out[k] = gates[2 * hd + k] * std::tanh(c);
  }

  const Var in[] = {x, h_prev, c_prev, weights, bias};
  return tape.record(
      std::move(out), in,
      [hd, xd, gates = std::move(gates)](Tape<T>& t, std::uint32_t self) {
        auto g = t.out_grad(self);
        const auto& y = t.value_at(self);
        const auto& cprev = t.value_at(t.input(self, 2));
        Eigen::Matrix<T, Eigen::Dynamic, 1> dz(static_cast<Eigen::Index>(4 * hd));
        std::vector<T> dc_prev(hd);
        for (std::size_t k = 0; k < hd; ++k) {
          const T ig = gates[k], fg = gates[hd + k], og = gates[2 * hd + k], cand = gates[3 * hd + k];
          const T tc = std::tanh(y[hd + k]);
          const T dh = g[k];
          const T dc = g[hd + k] + dh * og * (T(1) - tc * tc);
          dz[static_cast<Eigen::Index>(k)] = dc * cand * ig * (T(1) - ig);
          dz[static_cast<Eigen::Index>(hd + k)] = dc * cprev[k] * fg * (T(1) - fg);
          dz[static_cast<Eigen::Index>(2 * hd + k)] = dh * tc * og * (T(1) - og);
          dz[static_cast<Eigen::Index>(3 * hd + k)] = dc * ig * (T(1) - cand * cand);
          dc_prev[k] = dc * fg;
        }
        const auto& wv = t.value_at(t.input(self, 3));
        const bool need_x = t.input_needs_grad(self, 0);
        const bool need_h = t.input_needs_grad(self, 1);
        if (need_x || need_h) {
          Eigen::Matrix<T, Eigen::Dynamic, 1> dinput = AsMatrix(wv).transpose() * dz;
          if (need_h) {
            auto gh = t.input_grad(self, 1);
            for (std::size_t k = 0; k < hd; ++k) gh[k] += dinput[static_cast<Eigen::Index>(k)];
          }
          if (need_x) {
            auto gx = t.input_grad(self, 0);
            for (std::size_t k = 0; k < xd; ++k) gx[k] += dinput[static_cast<Eigen::Index>(hd + k)];
          }
        }
        if (t.input_needs_grad(self, 2)) {
          auto gc = t.input_grad(self, 2);
          for (std::size_t k = 0; k < hd; ++k) gc[k] += dc_prev[k];
        }
        if (t.input_needs_grad(self, 3)) {
          const auto& xv = t.value_at(t.input(self, 0));
          const auto& hv = t.value_at(t.input(self, 1));
          Eigen::Matrix<T, Eigen::Dynamic, 1> input(static_cast<Eigen::Index>(hd + xd));
          input.head(static_cast<Eigen::Index>(hd)) = AsVector(hv);
          input.tail(static_cast<Eigen::Index>(xd)) = AsVector(xv);
          AsMatrix(t.input_grad(self, 3), 4 * hd, hd + xd).noalias() += dz * input.transpose();
        }
        if (t.input_needs_grad(self, 4)) AsVector(t.input_grad(self, 4)) += dz;
      });
}

template <typename T>
LstmState lstm_cell(Tape<T>& tape, Var x, const LstmState& prev, Var weights, Var bias) {
  const std::size_t hd = tape.value(prev.h).size();
  const Var packed = lstm_step(tape, x, prev.h, prev.c, weights, bias);
  return LstmState{slice(tape, packed, 0, hd), slice(tape, packed, hd, hd)};
}

template <typename T>
std::vector<T> masked_softmax(std::span<const T> scores, const std::vector<bool>& mask) {
  CheckShape(mask.size() == scores.size(), "masked_softmax: mask length differs from scores");
  T top = -std::numeric_limits<T>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (mask[i]) {
      top = std::max(top, scores[i]);
      any = true;
    }
  if (!any) Fail("empty-support", "softmax with every position masked");
  std::vector<T> out(scores.size(), T(0));
  T z = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (mask[i]) {
      out[i] = std::exp(scores[i] - top);
      z += out[i];
    }
  for (T& p : out) p /= z;
  return out;
}

template <typename T>
Var masked_softmax(Tape<T>& tape, Var scores, const std::vector<bool>& mask) {
  const auto& vs = tape.value(scores);
  auto probs = masked_softmax<T>(std::span<const T>(vs.data), mask);
  const Var in[] = {scores};
  return tape.record(Tensor<T>(vs.shape, std::move(probs)), in, [](Tape<T>& t, std::uint32_t self) {
    auto g = t.out_grad(self);
    const auto& y = t.value_at(self);
    T dot = 0;
    for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * y[i];
    auto gi = t.input_grad(self, 0);
    for (std::size_t i = 0; i < g.size(); ++i) gi[i] += y[i] * (g[i] - dot);
  });
}

template <typename T>
Var dropout(Tape<T>& tape, Var x, double p, bool train, RngStream& rng) {
  if (!(p >= 0.0 && p < 1.0))
    Fail("invalid-probability", "dropout probability must lie in [0, 1), got " + std::to_string(p));
  if (!train || p == 0.0) return x;
  const auto& vx = tape.value(x);
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  std::vector<T> factors(vx.size());
  Tensor<T> out(vx.shape);
  for (std::size_t i = 0; i < vx.size(); ++i) {
    factors[i] = rng.uniform() < p ? T(0) : keep_scale;
    out[i] = vx[i] * factors[i];
  }
  const Var in[] = {x};
  return tape.record(std::move(out), in,
                     [factors = std::move(factors)](Tape<T>& t, std::uint32_t self) {
                       auto g = t.out_grad(self);
                       auto gi = t.input_grad(self, 0);
                       for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * factors[i];
                     });
}

template <typename T>
Var bce_with_logits(Tape<T>& tape, Var logit, T label) {
  const auto& vz = tape.value(logit);
  CheckShape(vz.size() == 1, "bce_with_logits expects a scalar logit");
  const T z = vz[0];
  const T loss = std::max(z, T(0)) - z * label + std::log1p(std::exp(-std::abs(z)));
  const Var in[] = {logit};
  return tape.record(Tensor<T>::Scalar(loss), in, [label](Tape<T>& t, std::uint32_t self) {
    const T zz = t.value_at(t.input(self, 0))[0];
    t.input_grad(self, 0)[0] += t.out_grad(self)[0] * (StableSigmoid(zz) - label);
  });
}

template <typename T>
Var negative_sampling_loss(Tape<T>& tape, Var logits, std::size_t target,
                           std::span<const std::size_t> noise) {
  const auto& vu = tape.value(logits);
  Require(target < vu.size(), "index-error", "negative sampling target out of range");
  T loss = Softplus(-vu[target]);
  for (std::size_t k : noise) {
    Require(k < vu.size(), "index-error", "noise sample out of range");
    loss += Softplus(vu[k]);
  }
  const Var in[] = {logits};
  return tape.record(
      Tensor<T>::Scalar(loss), in,
      [target, noise = std::vector<std::size_t>(noise.begin(), noise.end())](Tape<T>& t,
                                                                            std::uint32_t self) {
        const T g = t.out_grad(self)[0];
        const auto& u = t.value_at(t.input(self, 0));
        auto gi = t.input_grad(self, 0);
        gi[target] += g * (StableSigmoid(u[target]) - T(1));
        for (std::size_t k : noise) gi[k] += g * StableSigmoid(u[k]);
      });
}

template <typename T>
Var softmax_cross_entropy(Tape<T>& tape, Var logits, const std::vector<bool>& mask,
                          std::size_t target) {
  const auto& vu = tape.value(logits);
  Require(target < vu.size() && mask.at(target), "index-error",
          "cross-entropy target outside the support");
  auto probs = masked_softmax<T>(std::span<const T>(vu.data), mask);
  T top = -std::numeric_limits<T>::infinity();
  for (std::size_t i = 0; i < vu.size(); ++i)
    if (mask[i]) top = std::max(top, vu[i]);
  T z = 0;
  for (std::size_t i = 0; i < vu.size(); ++i)
    if (mask[i]) z += std::exp(vu[i] - top);
  const T loss = -(vu[target] - top - std::log(z));
  const Var in[] = {logits};
  return tape.record(Tensor<T>::Scalar(loss), in,
                     [probs = std::move(probs), target](Tape<T>& t, std::uint32_t self) {
                       const T g = t.out_grad(self)[0];
                       auto gi = t.input_grad(self, 0);
                       for (std::size_t i = 0; i < probs.size(); ++i) gi[i] += g * probs[i];
                       gi[target] -= g;
                     });
}

#define NSUM_INSTANTIATE_OPS(T)                                                              \
  template Var add<T>(Tape<T>&, Var, Var);                                                   \
  template Var mul<T>(Tape<T>&, Var, Var);                                                   \
  template Var scale<T>(Tape<T>&, Var, T);                                                   \
  template Var scale_by<T>(Tape<T>&, Var, Var);                                              \
  template Var tanh<T>(Tape<T>&, Var);                                                       \
  template Var sigmoid<T>(Tape<T>&, Var);                                                    \
  template Var sum<T>(Tape<T>&, Var);                                                        \
  template Var concat<T>(Tape<T>&, std::span<const Var>);                                    \
  template Var slice<T>(Tape<T>&, Var, std::size_t, std::size_t);                            \
  template Var stack_rows<T>(Tape<T>&, std::span<const Var>);                                \
  template Var pad_rows<T>(Tape<T>&, Var, std::size_t);                                      \
  template Var matvec<T>(Tape<T>&, Var, Var);                                                \
  template Var vecmat<T>(Tape<T>&, Var, Var);                                                \
  template Var matmul<T>(Tape<T>&, Var, Var);                                                \
  template Var matmul_nt<T>(Tape<T>&, Var, Var);                                             \
  template Var add_rowwise<T>(Tape<T>&, Var, Var);                                           \
  template Var embedding_lookup<T>(Tape<T>&, Var, std::span<const int>, int);                \
  template Var conv1d_narrow<T>(Tape<T>&, Var, Var, Var);                                    \
  template MaxResult max_over_time<T>(std::span<const T>);                                   \
  template Var max_over_time<T>(Tape<T>&, Var);                                              \
  template Var lstm_step<T>(Tape<T>&, Var, Var, Var, Var, Var);                              \
  template LstmState lstm_cell<T>(Tape<T>&, Var, const LstmState&, Var, Var);                \
  template std::vector<T> masked_softmax<T>(std::span<const T>, const std::vector<bool>&);   \
  template Var masked_softmax<T>(Tape<T>&, Var, const std::vector<bool>&);                   \
  template Var dropout<T>(Tape<T>&, Var, double, bool, RngStream&);                          \
  template Var bce_with_logits<T>(Tape<T>&, Var, T);                                         \
  template Var negative_sampling_loss<T>(Tape<T>&, Var, std::size_t,                         \
                                         std::span<const std::size_t>);                      \
  template Var softmax_cross_entropy<T>(Tape<T>&, Var, const std::vector<bool>&, std::size_t);

NSUM_INSTANTIATE_OPS(float)
NSUM_INSTANTIATE_OPS(double)

#undef NSUM_INSTANTIATE_OPS

}  // namespace nsum::ops
