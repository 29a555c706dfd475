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

#include "nsum/tape.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace nsum {

std::string ShapeString(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) out << (i ? "x" : "") << shape[i];
  out << ']';
  return out.str();
}

template <typename T>
Parameter<T>& ParameterSet<T>::add(const std::string& name, Shape shape) {
  Require(!contains(name), "duplicate-parameter", name);
  auto p = std::make_unique<Parameter<T>>();
  p->name = name;
  p->value = Tensor<T>(shape);
  p->grad = Tensor<T>(shape);
  index_[name] = params_.size();
  params_.push_back(std::move(p));
  return *params_.back();
}

template <typename T>
Parameter<T>& ParameterSet<T>::get(const std::string& name) {
  auto it = index_.find(name);
  Require(it != index_.end(), "unknown-parameter", name);
  return *params_[it->second];
}

template <typename T>
const Parameter<T>& ParameterSet<T>::get(const std::string& name) const {
  auto it = index_.find(name);
  Require(it != index_.end(), "unknown-parameter", name);
  return *params_[it->second];
}

template <typename T>
std::size_t ParameterSet<T>::num_scalars() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

template <typename T>
void ParameterSet<T>::zero_grad() {
  for (auto& p : params_) std::fill(p->grad.data.begin(), p->grad.data.end(), T(0));
}

template <typename T>
double ParameterSet<T>::grad_norm() const {
  double sq = 0.0;
  for (const auto& p : params_)
    for (T g : p->grad.data) sq += static_cast<double>(g) * static_cast<double>(g);
  return std::sqrt(sq);
}

template <typename T>
double ParameterSet<T>::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (norm > max_norm && norm > 0.0) {
    const T factor = static_cast<T>(max_norm / norm);
    for (auto& p : params_)
      for (T& g : p->grad.data) g *= factor;
  }
  return norm;
}

template <typename T>
void ParameterSet<T>::init_uniform(RngStream& rng, double range) {
  for (auto& p : params_)
    for (T& x : p->value.data) x = static_cast<T>(rng.uniform(-range, range));
}

namespace {
std::atomic<std::uint64_t> next_tape_id{1};
}  // namespace

template <typename T>
Tape<T>::Tape() : id_(next_tape_id.fetch_add(1)) {}

template <typename T>
const typename Tape<T>::Node& Tape<T>::node(Var v) const {
  Require(v.tape_id == id_ && v.index < nodes_.size(), "detached-variable",
          "variable does not belong to this tape");
  return nodes_[v.index];
}

template <typename T>
Var Tape<T>::constant(Tensor<T> value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{id_, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

template <typename T>
Var Tape<T>::param(Parameter<T>& p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return Var{id_, it->second};
  Node n;
  n.ref = &p.value;
  n.param = &p;
  n.needs_grad = true;
  nodes_.push_back(std::move(n));
  const auto index = static_cast<std::uint32_t>(nodes_.size() - 1);
  param_nodes_[&p] = index;
  return Var{id_, index};
}

template <typename T>
const Tensor<T>& Tape<T>::value(Var v) const {
  const Node& n = node(v);
  return n.ref ? *n.ref : n.value;
}

template <typename T>
const Tensor<T>& Tape<T>::value_at(std::uint32_t index) const {
  const Node& n = nodes_[index];
  return n.ref ? *n.ref : n.value;
}

template <typename T>
const std::vector<T>& Tape<T>::grad(Var v) const {
  return node(v).grad;
}

template <typename T>
Var Tape<T>::record(Tensor<T> value, std::span<const Var> inputs, Backward backward) {
  Require(value.all_finite(), "non-finite-value", "op produced NaN or Inf");
  Node n;
  n.value = std::move(value);
  n.inputs.reserve(inputs.size());
  for (Var in : inputs) {
    const Node& src = node(in);
    n.inputs.push_back(in.index);
    n.needs_grad = n.needs_grad || src.needs_grad;
  }
  if (!backward) n.needs_grad = false;
  if (n.needs_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{id_, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

template <typename T>
std::span<T> Tape<T>::input_grad(std::uint32_t self, std::size_t k) {
  Node& in = nodes_[nodes_[self].inputs[k]];
  if (in.grad.empty()) in.grad.assign(value_at(nodes_[self].inputs[k]).size(), T(0));
  return in.grad;
}

template <typename T>
void Tape<T>::backward(Var loss) {
  Require(loss.tape_id == id_ && loss.index < nodes_.size(), "detached-loss",
          "loss was not recorded on this tape");
  Require(value(loss).size() == 1, "shape-error", "loss must be a scalar");
  for (Node& n : nodes_) n.grad.clear();
  nodes_[loss.index].grad.assign(1, T(1));
  for (std::int64_t i = loss.index; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.grad.empty() || !n.needs_grad) continue;
    if (n.param) {
      auto& dst = n.param->grad.data;
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += n.grad[j];
    } else if (n.backward) {
      n.backward(*this, static_cast<std::uint32_t>(i));
    }
  }
}

template class ParameterSet<float>;
template class ParameterSet<double>;
template class Tape<float>;
template class Tape<double>;

}  // namespace nsum
