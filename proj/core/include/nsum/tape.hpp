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

#ifndef NSUM_TAPE_HPP_
#define NSUM_TAPE_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nsum/rng.hpp"
#include "nsum/tensor.hpp"

namespace nsum {

// A trainable tensor together with its accumulated gradient.
template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
};

// Named parameters in insertion order. Addresses are stable.
template <typename T>
class ParameterSet {
 public:
  Parameter<T>& add(const std::string& name, Shape shape);
  Parameter<T>& get(const std::string& name);
  const Parameter<T>& get(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) > 0; }

  std::size_t size() const { return params_.size(); }
  Parameter<T>& operator[](std::size_t i) { return *params_[i]; }
  const Parameter<T>& operator[](std::size_t i) const { return *params_[i]; }
  std::size_t num_scalars() const;

  void zero_grad();
  double grad_norm() const;
  // Scales gradients so their global L2 norm is at most max_norm.
  // Returns the norm before clipping.
  double clip_grad_norm(double max_norm);

  void init_uniform(RngStream& rng, double range);

  // Copies values from a parameter set with identical names and shapes.
  template <typename U>
  void copy_values_from(const ParameterSet<U>& other) {
    Require(other.size() == size(), "shape-error", "parameter set size mismatch");
    for (std::size_t i = 0; i < size(); ++i) {
      Require(other[i].name == params_[i]->name &&
                  other[i].value.shape == params_[i]->value.shape,
              "shape-error", "parameter mismatch at " + params_[i]->name);
      params_[i]->value.data.assign(other[i].value.data.begin(), other[i].value.data.end());
    }
  }

 private:
  std::vector<std::unique_ptr<Parameter<T>>> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Handle to a value recorded on a Tape.
struct Var {
  std::uint64_t tape_id = 0;
  std::uint32_t index = 0;
  bool valid() const { return tape_id != 0; }
};

// Append-only record of a forward computation for reverse-mode
// differentiation. Nodes are created in topological order, so backward()
// is a single reverse sweep.
template <typename T>
class Tape {
 public:
  using Backward = std::function<void(Tape&, std::uint32_t self)>;

  Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor<T> value);
  // Repeated calls for the same parameter return the same node.
  Var param(Parameter<T>& p);

  const Tensor<T>& value(Var v) const;
  const std::vector<T>& grad(Var v) const;
  bool needs_grad(Var v) const { return node(v).needs_grad; }
  std::size_t size() const { return nodes_.size(); }
  std::uint64_t id() const { return id_; }

  // Appends an op node. backward may be empty for non-differentiable ops.
  Var record(Tensor<T> value, std::span<const Var> inputs, Backward backward);

  // Gradient of the node being processed (valid inside Backward).
  std::span<const T> out_grad(std::uint32_t self) const { return nodes_[self].grad; }
  const Tensor<T>& value_at(std::uint32_t index) const;
  std::uint32_t input(std::uint32_t self, std::size_t k) const { return nodes_[self].inputs[k]; }
  bool input_needs_grad(std::uint32_t self, std::size_t k) const {
    return nodes_[nodes_[self].inputs[k]].needs_grad;
  }
  // Gradient accumulator for an input, zero-initialized on first use.
  std::span<T> input_grad(std::uint32_t self, std::size_t k);

  // Seeds d(loss)/d(loss) = 1 and accumulates gradients into every
  // Parameter reachable from the loss.
  void backward(Var loss);

 private:
  struct Node {
    Tensor<T> value;
    const Tensor<T>* ref = nullptr;  // parameter nodes alias the parameter value
    Parameter<T>* param = nullptr;
    std::vector<std::uint32_t> inputs;
    std::vector<T> grad;
    Backward backward;
    bool needs_grad = false;
  };

  const Node& node(Var v) const;

  std::uint64_t id_;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter<T>*, std::uint32_t> param_nodes_;
};

}  // namespace nsum

#endif  // NSUM_TAPE_HPP_
