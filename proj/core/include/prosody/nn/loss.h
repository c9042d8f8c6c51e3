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

#ifndef PROSODY_NN_LOSS_H_
#define PROSODY_NN_LOSS_H_

#include <cmath>
#include <string>
#include <vector>

#include "prosody/nn/ops.h"

namespace prosody::nn {

// A masked mean. `count` is the number of contributing rows; zero means the
// mask was empty, the value is defined as 0 and the caller should flag it.
template <typename S>
struct MaskedLoss {
  Tensor<S> value;
  Index count = 0;

  bool empty() const { return count == 0; }
  S item() const { return value.item(); }
};

namespace internal {

inline Index CountSelected(const std::vector<bool>& mask, Index rows,
                           const char* op) {
  if (static_cast<Index>(mask.size()) != rows) {
    Fail(ErrorCategory::kShape, std::string(op) + ": mask length " +
                                    std::to_string(mask.size()) +
                                    " != rows " + std::to_string(rows));
  }
  Index n = 0;
  for (bool m : mask) n += m ? 1 : 0;
  return n;
}

}  // namespace internal

// Mean absolute error over the selected rows (all columns of each row).
template <typename S>
MaskedLoss<S> MaskedMae(const Tensor<S>& pred, const Matrix<S>& target,
                        const std::vector<bool>& mask) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    Fail(ErrorCategory::kShape, "MaskedMae: prediction/target shape mismatch");
  }
  const Index selected = internal::CountSelected(mask, pred.rows(), "MaskedMae");
  Matrix<S> out = Matrix<S>::Zero(1, 1);
  if (selected == 0) {
    return {MakeNode<S>(std::move(out), {pred}, [](Node<S>&) {}), 0};
  }
  const S denom = static_cast<S>(selected * pred.cols());
  S total = 0;
  Matrix<S> sign = Matrix<S>::Zero(pred.rows(), pred.cols());
  for (Index r = 0; r < pred.rows(); ++r) {
    if (!mask[r]) continue;
    auto diff = (pred.value().row(r) - target.row(r)).array();
    total += diff.abs().sum();
    sign.row(r) = diff.sign().matrix();
  }
  out(0, 0) = total / denom;
  sign /= denom;
  return {MakeNode<S>(std::move(out), {pred},
                      [sign = std::move(sign)](Node<S>& n) {
                        n.inputs[0]->AccumulateExpr(sign * n.grad(0, 0));
                      }),
          selected};
}

// Mean negative log-likelihood of `labels` under softmax(logits) over the
// selected rows. Fused for numerical stability.
template <typename S>
MaskedLoss<S> SoftmaxCrossEntropy(const Tensor<S>& logits,
                                  const std::vector<int>& labels,
                                  const std::vector<bool>& mask) {
  const Index selected =
      internal::CountSelected(mask, logits.rows(), "SoftmaxCrossEntropy");
  if (static_cast<Index>(labels.size()) != logits.rows()) {
    Fail(ErrorCategory::kShape, "SoftmaxCrossEntropy: label count mismatch");
  }
  Matrix<S> out = Matrix<S>::Zero(1, 1);
  if (selected == 0) {
    return {MakeNode<S>(std::move(out), {logits}, [](Node<S>&) {}), 0};
  }
  Matrix<S> dlogits = Matrix<S>::Zero(logits.rows(), logits.cols());
  S total = 0;
  for (Index r = 0; r < logits.rows(); ++r) {
    if (!mask[r]) continue;
    const int y = labels[r];
    if (y < 0 || y >= logits.cols()) {
      Fail(ErrorCategory::kShape, "SoftmaxCrossEntropy: label " +
                                      std::to_string(y) + " out of range");
    }
    const auto row = logits.value().row(r);
    const S mx = row.maxCoeff();
    const S lse = mx + std::log((row.array() - mx).exp().sum());
    total += lse - row(y);
    dlogits.row(r) = (row.array() - lse).exp();
    dlogits(r, y) -= S(1);
  }
  const S inv = S(1) / static_cast<S>(selected);
  out(0, 0) = total * inv;
  dlogits *= inv;
  return {MakeNode<S>(std::move(out), {logits},
                      [dlogits = std::move(dlogits)](Node<S>& n) {
                        n.inputs[0]->AccumulateExpr(dlogits * n.grad(0, 0));
                      }),
          selected};
}

// p(c|h) = softmax(W h) for every row h of `hidden`; `weight` is
// (hidden, classes).
template <typename S>
Tensor<S> SoftmaxHead(const Tensor<S>& hidden, const Tensor<S>& weight) {
  if (weight.cols() < 2) {
    Fail(ErrorCategory::kInvalidArgument, "SoftmaxHead: needs at least 2 classes");
  }
  return SoftmaxRows(MatMul(hidden, weight));
}

// Non-differentiable evaluations of the two loss definitions, used for
// reporting and as reference values in tests.
template <typename S>
double MaeValue(const Matrix<S>& pred, const Matrix<S>& target,
                const std::vector<bool>& mask) {
  double total = 0;
  Index n = 0;
  for (Index r = 0; r < pred.rows(); ++r) {
    if (!mask[r]) continue;
    total += (pred.row(r) - target.row(r)).cwiseAbs().sum();
    n += pred.cols();
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

template <typename S>
double CrossEntropyValue(const Matrix<S>& probs, const std::vector<int>& labels,
                         const std::vector<bool>& mask) {
  double total = 0;
  Index n = 0;
  for (Index r = 0; r < probs.rows(); ++r) {
    if (!mask[r]) continue;
    total -= std::log(static_cast<double>(probs(r, labels[r])));
    ++n;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

}  // namespace prosody::nn

#endif  // PROSODY_NN_LOSS_H_
