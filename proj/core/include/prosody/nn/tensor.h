// Copyright (c) 2026 The Prosody TTS Authors
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

#ifndef PROSODY_NN_TENSOR_H_
#define PROSODY_NN_TENSOR_H_

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "prosody/common/error.h"

namespace prosody::nn {

using Index = Eigen::Index;

template <typename S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename S>
using RowVector = Eigen::Matrix<S, 1, Eigen::Dynamic, Eigen::RowMajor>;

// One vertex of the reverse-mode graph. Activations are 2-D: rows index
// packed sequence positions (see SeqLayout), columns index features.
template <typename S>
struct Node {
  Matrix<S> value;
  Matrix<S> grad;  // empty until the first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(Node&)> backward;

  void Accumulate(const Matrix<S>& g) {
    if (grad.size() == 0) {
      grad = g;
    } else {
      grad += g;
    }
  }
  template <typename Expr>
  void AccumulateExpr(const Expr& g) {
    if (grad.size() == 0) {
      grad = g;
    } else {
      grad += g;
    }
  }
};

namespace internal {
inline thread_local int no_grad_depth = 0;
}  // namespace internal

inline bool GradEnabled() { return internal::no_grad_depth == 0; }

// Disables graph recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard() { ++internal::no_grad_depth; }
  ~NoGradGuard() { --internal::no_grad_depth; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;
};

template <typename S>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Matrix<S> value, bool requires_grad = false)
      : node_(std::make_shared<Node<S>>()) {
    node_->value = std::move(value);
    node_->requires_grad = requires_grad;
  }

  static Tensor Zeros(Index rows, Index cols, bool requires_grad = false) {
    return Tensor(Matrix<S>::Zero(rows, cols), requires_grad);
  }

  bool defined() const { return node_ != nullptr; }
  const Matrix<S>& value() const { return node_->value; }
  Matrix<S>& mutable_value() { return node_->value; }
  const Matrix<S>& grad() const { return node_->grad; }
  Matrix<S>& mutable_grad() { return node_->grad; }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  Index rows() const { return node_->value.rows(); }
  Index cols() const { return node_->value.cols(); }
  S item() const { return node_->value(0, 0); }

  void ZeroGrad() { node_->grad.resize(0, 0); }

  // Reverse sweep from a 1x1 tensor. Leaf gradients accumulate.
  void Backward() const;

  const std::shared_ptr<Node<S>>& node() const { return node_; }

 private:
  std::shared_ptr<Node<S>> node_;
};

template <typename S>
void Tensor<S>::Backward() const {
  if (!node_ || !node_->requires_grad) return;
  if (node_->value.size() != 1) {
    Fail(ErrorCategory::kShape, "Backward() requires a scalar tensor");
  }
  // Iterative post-order DFS yields a topological order.
  std::vector<Node<S>*> order;
  std::unordered_set<Node<S>*> visited;
  std::vector<std::pair<Node<S>*, size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node<S>* child = node->inputs[next++].get();
      if (child->requires_grad && visited.insert(child).second) {
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  node_->Accumulate(Matrix<S>::Ones(1, 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node<S>* node = *it;
    if (node->backward && node->grad.size() != 0) node->backward(*node);
  }
}

// Builds an interior node. The backward closure receives the node and reads
// node.grad; it must only capture forward intermediates by value, never the
// node itself.
template <typename S>
Tensor<S> MakeNode(Matrix<S> value, std::vector<Tensor<S>> inputs,
                   std::function<void(Node<S>&)> backward) {
  Tensor<S> out(std::move(value));
  if (!GradEnabled()) return out;
  bool any = false;
  for (const auto& in : inputs) any = any || in.requires_grad();
  if (!any) return out;
  auto& node = *out.node();
  node.requires_grad = true;
  node.inputs.reserve(inputs.size());
  for (auto& in : inputs) node.inputs.push_back(in.node());
  node.backward = std::move(backward);
  return out;
}

template <typename S>
inline bool NeedsGrad(const Node<S>& node, size_t i) {
  return node.inputs[i]->requires_grad;
}

}  // namespace prosody::nn

#endif  // PROSODY_NN_TENSOR_H_
