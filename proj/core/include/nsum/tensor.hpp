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

#ifndef NSUM_TENSOR_HPP_
#define NSUM_TENSOR_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "nsum/error.hpp"

namespace nsum {

using Shape = std::vector<std::size_t>;

inline std::size_t NumElements(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string ShapeString(const Shape& shape);

// Dense row-major tensor. Scalars have shape {1}.
template <typename T>
struct Tensor {
  Shape shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(Shape s, T fill = T(0)) : shape(std::move(s)), data(NumElements(shape), fill) {}
  Tensor(Shape s, std::vector<T> values) : shape(std::move(s)), data(std::move(values)) {
    Require(NumElements(shape) == data.size(), "shape-error",
            "tensor data length does not match shape " + ShapeString(shape));
  }

  static Tensor Scalar(T v) { return Tensor({1}, std::vector<T>{v}); }
  static Tensor Vector(std::vector<T> v) {
    const std::size_t n = v.size();
    return Tensor({n}, std::move(v));
  }

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return rank() >= 2 ? size() / shape[0] : 1; }

  T& operator[](std::size_t i) { return data[i]; }
  const T& operator[](std::size_t i) const { return data[i]; }
  T& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool all_finite() const {
    for (const T& x : data)
      if (!std::isfinite(x)) return false;
    return true;
  }

  template <typename U>
  Tensor<U> cast() const {
    return Tensor<U>(shape, std::vector<U>(data.begin(), data.end()));
  }
};

}  // namespace nsum

#endif  // NSUM_TENSOR_HPP_
