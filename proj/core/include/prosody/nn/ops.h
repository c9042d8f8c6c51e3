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

#ifndef PROSODY_NN_OPS_H_
#define PROSODY_NN_OPS_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "prosody/common/rng.h"
#include "prosody/nn/seq.h"
#include "prosody/nn/tensor.h"

// Differentiable primitives over 2-D packed activations. Every op records a
// backward closure only when grad mode is on and an input requires grad.

namespace prosody::nn {

namespace internal {

inline std::string ShapeStr(Index r, Index c) {
  return "(" + std::to_string(r) + "," + std::to_string(c) + ")";
}

template <typename S>
void CheckSameShape(const Tensor<S>& a, const Tensor<S>& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    Fail(ErrorCategory::kShape, std::string(op) + ": shape mismatch " +
                                    ShapeStr(a.rows(), a.cols()) + " vs " +
                                    ShapeStr(b.rows(), b.cols()));
  }
}

}  // namespace internal

template <typename S>
Tensor<S> MatMul(const Tensor<S>& a, const Tensor<S>& b) {
  if (a.cols() != b.rows()) {
    Fail(ErrorCategory::kShape,
         "MatMul: inner dimension mismatch " +
             internal::ShapeStr(a.rows(), a.cols()) + " x " +
             internal::ShapeStr(b.rows(), b.cols()));
  }
  Matrix<S> out = a.value() * b.value();
  return MakeNode<S>(std::move(out), {a, b}, [](Node<S>& n) {
    const Matrix<S>& g = n.grad;
    if (NeedsGrad(n, 0)) n.inputs[0]->AccumulateExpr(g * n.inputs[1]->value.transpose());
    if (NeedsGrad(n, 1)) n.inputs[1]->AccumulateExpr(n.inputs[0]->value.transpose() * g);
  });
}

// x * W + b, with b a (1, out) row broadcast over rows. `bias` may be
// undefined.
template <typename S>
Tensor<S> Affine(const Tensor<S>& x, const Tensor<S>& weight,
                 const Tensor<S>& bias) {
  if (x.cols() != weight.rows()) {
    Fail(ErrorCategory::kShape,
         "Affine: input width " + std::to_string(x.cols()) +
             " does not match weight rows " + std::to_string(weight.rows()));
  }
  Matrix<S> out = x.value() * weight.value();
  const bool has_bias = bias.defined();
  if (has_bias) out.rowwise() += bias.value().row(0);
  std::vector<Tensor<S>> inputs{x, weight};
  if (has_bias) inputs.push_back(bias);
  return MakeNode<S>(std::move(out), std::move(inputs), [has_bias](Node<S>& n) {
    const Matrix<S>& g = n.grad;
    if (NeedsGrad(n, 0)) n.inputs[0]->AccumulateExpr(g * n.inputs[1]->value.transpose());
    if (NeedsGrad(n, 1)) n.inputs[1]->AccumulateExpr(n.inputs[0]->value.transpose() * g);
    if (has_bias && NeedsGrad(n, 2)) n.inputs[2]->AccumulateExpr(g.colwise().sum());
  });
}

template <typename S>
Tensor<S> Add(const Tensor<S>& a, const Tensor<S>& b) {
  internal::CheckSameShape(a, b, "Add");
  Matrix<S> out = a.value() + b.value();
  return MakeNode<S>(std::move(out), {a, b}, [](Node<S>& n) {
    if (NeedsGrad(n, 0)) n.inputs[0]->Accumulate(n.grad);
    if (NeedsGrad(n, 1)) n.inputs[1]->Accumulate(n.grad);
  });
}

template <typename S>
Tensor<S> AddConstant(const Tensor<S>& a, const Matrix<S>& c) {
  if (a.rows() != c.rows() || a.cols() != c.cols()) {
    Fail(ErrorCategory::kShape, "AddConstant: shape mismatch");
  }
  Matrix<S> out = a.value() + c;
  return MakeNode<S>(std::move(out), {a}, [](Node<S>& n) {
    n.inputs[0]->Accumulate(n.grad);
  });
}

template <typename S>
Tensor<S> Scale(const Tensor<S>& a, S factor) {
  Matrix<S> out = a.value() * factor;
  return MakeNode<S>(std::move(out), {a}, [factor](Node<S>& n) {
    n.inputs[0]->AccumulateExpr(n.grad * factor);
  });
}

template <typename S>
Tensor<S> Relu(const Tensor<S>& a) {
  Matrix<S> out = a.value().cwiseMax(S(0));
  return MakeNode<S>(std::move(out), {a}, [](Node<S>& n) {
    const Matrix<S>& x = n.inputs[0]->value;
    n.inputs[0]->AccumulateExpr(
        (x.array() > S(0)).select(n.grad.array(), S(0)).matrix());
  });
}

// Row-wise layer normalization with learned (1, C) gain and shift.
template <typename S>
Tensor<S> LayerNorm(const Tensor<S>& x, const Tensor<S>& gamma,
                    const Tensor<S>& beta, S eps = S(1e-5)) {
  const Index rows = x.rows();
  const Index cols = x.cols();
  if (gamma.cols() != cols || beta.cols() != cols) {
    Fail(ErrorCategory::kShape, "LayerNorm: gain/shift width mismatch");
  }
  Matrix<S> xhat(rows, cols);
  Eigen::Matrix<S, Eigen::Dynamic, 1> inv_std(rows);
  for (Index r = 0; r < rows; ++r) {
    const S mean = x.value().row(r).mean();
    const S var = (x.value().row(r).array() - mean).square().mean();
    inv_std(r) = S(1) / std::sqrt(var + eps);
    xhat.row(r) = (x.value().row(r).array() - mean) * inv_std(r);
  }
  Matrix<S> out = (xhat.array().rowwise() * gamma.value().row(0).array())
                      .rowwise() +
                  beta.value().row(0).array();
  return MakeNode<S>(
      std::move(out), {x, gamma, beta},
      [xhat = std::move(xhat), inv_std = std::move(inv_std)](Node<S>& n) {
        const Matrix<S>& g = n.grad;
        if (NeedsGrad(n, 1)) {
          n.inputs[1]->AccumulateExpr((g.array() * xhat.array()).colwise().sum().matrix());
        }
        if (NeedsGrad(n, 2)) n.inputs[2]->AccumulateExpr(g.colwise().sum());
        if (NeedsGrad(n, 0)) {
          const auto& gain = n.inputs[1]->value;
          Matrix<S> gx = g.array().rowwise() * gain.row(0).array();
          const S inv_c = S(1) / static_cast<S>(gx.cols());
          Matrix<S> dx(gx.rows(), gx.cols());
          for (Index r = 0; r < gx.rows(); ++r) {
            const S m1 = gx.row(r).sum() * inv_c;
            const S m2 = gx.row(r).dot(xhat.row(r)) * inv_c;
            dx.row(r) = inv_std(r) *
                        (gx.row(r).array() - m1 - xhat.row(r).array() * m2);
          }
          n.inputs[0]->Accumulate(dx);
        }
      });
}

// Inverted dropout; identity when rate is 0 or `rng` is null.
template <typename S>
Tensor<S> Dropout(const Tensor<S>& x, double rate, Rng* rng) {
  if (rate <= 0.0 || rng == nullptr) return x;
  const S keep_scale = S(1) / static_cast<S>(1.0 - rate);
  Matrix<S> mask(x.rows(), x.cols());
  for (Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = Bernoulli(*rng, rate) ? S(0) : keep_scale;
  }
  Matrix<S> out = x.value().cwiseProduct(mask);
  return MakeNode<S>(std::move(out), {x}, [mask = std::move(mask)](Node<S>& n) {
    n.inputs[0]->AccumulateExpr(n.grad.cwiseProduct(mask));
  });
}

// 1-D convolution along time inside each sequence, "same" zero padding.
// `weight` is (kernel * in, out), laid out tap-major: rows
// [j*in, (j+1)*in) hold the weights applied to x[t - kernel/2 + j].
template <typename S>
Tensor<S> Conv1d(const Tensor<S>& x, const Tensor<S>& weight,
                 const Tensor<S>& bias, const SeqLayout& layout, int kernel) {
  if (kernel < 1 || kernel % 2 == 0) {
    Fail(ErrorCategory::kInvalidArgument, "Conv1d: kernel must be odd");
  }
  const Index in = x.cols();
  if (weight.rows() != kernel * in) {
    Fail(ErrorCategory::kShape,
         "Conv1d: weight rows " + std::to_string(weight.rows()) +
             " != kernel*in " + std::to_string(kernel * in));
  }
  if (layout.total() != x.rows()) {
    Fail(ErrorCategory::kShape, "Conv1d: layout does not cover input rows");
  }
  if (kernel == 1) return Affine(x, weight, bias);
  const int half = kernel / 2;
  Matrix<S> cols = Matrix<S>::Zero(x.rows(), kernel * in);
  for (size_t b = 0; b < layout.batch(); ++b) {
    const Index start = layout.offset(b);
    const Index end = start + layout.length(b);
    for (Index t = start; t < end; ++t) {
      for (int j = 0; j < kernel; ++j) {
        const Index src = t - half + j;
        if (src >= start && src < end) {
          cols.block(t, j * in, 1, in) = x.value().row(src);
        }
      }
    }
  }
  Matrix<S> out = cols * weight.value();
  const bool has_bias = bias.defined();
  if (has_bias) out.rowwise() += bias.value().row(0);
  std::vector<Tensor<S>> inputs{x, weight};
  if (has_bias) inputs.push_back(bias);
  return MakeNode<S>(
      std::move(out), std::move(inputs),
      [layout, kernel, half, in, has_bias, cols = std::move(cols)](Node<S>& n) {
        const Matrix<S>& g = n.grad;
        if (NeedsGrad(n, 1)) n.inputs[1]->AccumulateExpr(cols.transpose() * g);
        if (has_bias && NeedsGrad(n, 2)) n.inputs[2]->AccumulateExpr(g.colwise().sum());
        if (!NeedsGrad(n, 0)) return;
        Matrix<S> gcols = g * n.inputs[1]->value.transpose();
        Matrix<S> dx = Matrix<S>::Zero(n.inputs[0]->value.rows(), in);
        for (size_t b = 0; b < layout.batch(); ++b) {
          const Index start = layout.offset(b);
          const Index end = start + layout.length(b);
          for (Index t = start; t < end; ++t) {
            for (int j = 0; j < kernel; ++j) {
              const Index src = t - half + j;
              if (src >= start && src < end) {
                dx.row(src) += gcols.block(t, j * in, 1, in);
              }
            }
          }
        }
        n.inputs[0]->Accumulate(dx);
      });
}

// Scaled dot-product self-attention inside each sequence. `qkv` is
// (N, 3*hidden): columns [0,h) queries, [h,2h) keys, [2h,3h) values, each
// split evenly across heads. Returns (N, hidden).
template <typename S>
Tensor<S> SelfAttention(const Tensor<S>& qkv, const SeqLayout& layout,
                        int heads) {
  if (qkv.cols() % 3 != 0) {
    Fail(ErrorCategory::kShape, "SelfAttention: qkv width not divisible by 3");
  }
  const Index hidden = qkv.cols() / 3;
  if (heads < 1 || hidden % heads != 0) {
    Fail(ErrorCategory::kShape, "SelfAttention: hidden " +
                                    std::to_string(hidden) +
                                    " not divisible by heads " +
                                    std::to_string(heads));
  }
  if (layout.total() != qkv.rows()) {
    Fail(ErrorCategory::kShape, "SelfAttention: layout does not cover input");
  }
  const Index dh = hidden / heads;
  const S scale = S(1) / std::sqrt(static_cast<S>(dh));
  const Matrix<S>& in = qkv.value();
  Matrix<S> out(qkv.rows(), hidden);
  // Attention probabilities per (sequence, head), kept for backward.
  std::vector<Matrix<S>> probs;
  const bool record = GradEnabled() && qkv.requires_grad();
  if (record) probs.reserve(layout.batch() * heads);
  for (size_t b = 0; b < layout.batch(); ++b) {
    const Index s = layout.offset(b);
    const Index len = layout.length(b);
    if (len == 0) continue;
    for (int h = 0; h < heads; ++h) {
      auto q = in.block(s, h * dh, len, dh);
      auto k = in.block(s, hidden + h * dh, len, dh);
      auto v = in.block(s, 2 * hidden + h * dh, len, dh);
      Matrix<S> p = (q * k.transpose()) * scale;
      for (Index r = 0; r < len; ++r) {
        const S mx = p.row(r).maxCoeff();
        p.row(r) = (p.row(r).array() - mx).exp();
        p.row(r) /= p.row(r).sum();
      }
      out.block(s, h * dh, len, dh).noalias() = p * v;
      if (record) probs.push_back(std::move(p));
    }
  }
  return MakeNode<S>(
      std::move(out), {qkv},
      [layout, heads, hidden, dh, scale, probs = std::move(probs)](Node<S>& n) {
        const Matrix<S>& in = n.inputs[0]->value;
        const Matrix<S>& g = n.grad;
        Matrix<S> dqkv = Matrix<S>::Zero(in.rows(), in.cols());
        size_t idx = 0;
        for (size_t b = 0; b < layout.batch(); ++b) {
          const Index s = layout.offset(b);
          const Index len = layout.length(b);
          if (len == 0) continue;
          for (int h = 0; h < heads; ++h) {
            const Matrix<S>& p = probs[idx++];
            auto q = in.block(s, h * dh, len, dh);
            auto k = in.block(s, hidden + h * dh, len, dh);
            auto v = in.block(s, 2 * hidden + h * dh, len, dh);
            auto go = g.block(s, h * dh, len, dh);
            dqkv.block(s, 2 * hidden + h * dh, len, dh).noalias() =
                p.transpose() * go;
            Matrix<S> gp = go * v.transpose();
            Matrix<S> gs(len, len);
            for (Index r = 0; r < len; ++r) {
              const S dot = gp.row(r).dot(p.row(r));
              gs.row(r) = p.row(r).array() * (gp.row(r).array() - dot);
            }
            gs *= scale;
            dqkv.block(s, h * dh, len, dh).noalias() = gs * k;
            dqkv.block(s, hidden + h * dh, len, dh).noalias() =
                gs.transpose() * q;
          }
        }
        n.inputs[0]->Accumulate(dqkv);
      });
}

// out.row(i) = x.row(index[i]). Serves embedding lookup, length regulation
// and character-to-phoneme upsampling.
template <typename S>
Tensor<S> GatherRows(const Tensor<S>& x, const std::vector<Index>& index) {
  Matrix<S> out(static_cast<Index>(index.size()), x.cols());
  for (size_t i = 0; i < index.size(); ++i) {
    if (index[i] < 0 || index[i] >= x.rows()) {
      Fail(ErrorCategory::kShape, "GatherRows: index " +
                                      std::to_string(index[i]) +
                                      " out of range [0," +
                                      std::to_string(x.rows()) + ")");
    }
    out.row(static_cast<Index>(i)) = x.value().row(index[i]);
  }
  return MakeNode<S>(std::move(out), {x}, [index](Node<S>& n) {
    Matrix<S> dx = Matrix<S>::Zero(n.inputs[0]->value.rows(),
                                   n.inputs[0]->value.cols());
    for (size_t i = 0; i < index.size(); ++i) {
      dx.row(index[i]) += n.grad.row(static_cast<Index>(i));
    }
    n.inputs[0]->Accumulate(dx);
  });
}

template <typename S>
Tensor<S> ConcatCols(const Tensor<S>& a, const Tensor<S>& b) {
  if (a.rows() != b.rows()) {
    Fail(ErrorCategory::kShape, "ConcatCols: row count mismatch " +
                                    std::to_string(a.rows()) + " vs " +
                                    std::to_string(b.rows()));
  }
  Matrix<S> out(a.rows(), a.cols() + b.cols());
  out.leftCols(a.cols()) = a.value();
  out.rightCols(b.cols()) = b.value();
  const Index split = a.cols();
  return MakeNode<S>(std::move(out), {a, b}, [split](Node<S>& n) {
    if (NeedsGrad(n, 0)) n.inputs[0]->AccumulateExpr(n.grad.leftCols(split));
    if (NeedsGrad(n, 1)) {
      n.inputs[1]->AccumulateExpr(n.grad.rightCols(n.grad.cols() - split));
    }
  });
}

template <typename S>
Matrix<S> SoftmaxRowsValue(const Matrix<S>& logits) {
  Matrix<S> p(logits.rows(), logits.cols());
  for (Index r = 0; r < logits.rows(); ++r) {
    const S mx = logits.row(r).maxCoeff();
    p.row(r) = (logits.row(r).array() - mx).exp();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

template <typename S>
Tensor<S> SoftmaxRows(const Tensor<S>& logits) {
  Matrix<S> p = SoftmaxRowsValue(logits.value());
  Matrix<S> saved = p;
  return MakeNode<S>(std::move(p), {logits}, [saved = std::move(saved)](Node<S>& n) {
    Matrix<S> dx(saved.rows(), saved.cols());
    for (Index r = 0; r < saved.rows(); ++r) {
      const S dot = n.grad.row(r).dot(saved.row(r));
      dx.row(r) = saved.row(r).array() * (n.grad.row(r).array() - dot);
    }
    n.inputs[0]->Accumulate(dx);
  });
}

// Weighted sum of 1x1 tensors; undefined entries are skipped.
template <typename S>
Tensor<S> WeightedSum(const std::vector<Tensor<S>>& terms,
                      const std::vector<S>& weights) {
  Matrix<S> out = Matrix<S>::Zero(1, 1);
  std::vector<Tensor<S>> inputs;
  std::vector<S> used;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (!terms[i].defined()) continue;
    out(0, 0) += weights[i] * terms[i].item();
    inputs.push_back(terms[i]);
    used.push_back(weights[i]);
  }
  return MakeNode<S>(std::move(out), std::move(inputs), [used](Node<S>& n) {
    for (size_t i = 0; i < n.inputs.size(); ++i) {
      if (NeedsGrad(n, i)) n.inputs[i]->AccumulateExpr(n.grad * used[i]);
    }
  });
}

// Sum of the elementwise product with a constant matrix. A smooth scalar
// probe for gradient checks and a generic linear readout.
template <typename S>
Tensor<S> InnerProduct(const Tensor<S>& x, const Matrix<S>& c) {
  if (x.rows() != c.rows() || x.cols() != c.cols()) {
    Fail(ErrorCategory::kShape, "InnerProduct: shape mismatch");
  }
  Matrix<S> out(1, 1);
  out(0, 0) = x.value().cwiseProduct(c).sum();
  return MakeNode<S>(std::move(out), {x}, [c](Node<S>& n) {
    n.inputs[0]->AccumulateExpr(c * n.grad(0, 0));
  });
}

}  // namespace prosody::nn

#endif  // PROSODY_NN_OPS_H_
