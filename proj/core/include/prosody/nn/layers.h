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

#ifndef PROSODY_NN_LAYERS_H_
#define PROSODY_NN_LAYERS_H_

#include <cmath>
#include <string>
#include <vector>

#include "prosody/common/rng.h"
#include "prosody/nn/ops.h"
#include "prosody/nn/params.h"

namespace prosody::nn {

// Training-time state threaded through forward passes. A null rng or
// training == false disables dropout.
struct ForwardContext {
  bool training = false;
  Rng* rng = nullptr;

  Rng* dropout_rng() const { return training ? rng : nullptr; }
};

template <typename S>
Matrix<S> XavierUniform(Index fan_in, Index fan_out, Index rows, Index cols,
                        Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix<S> m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<S>((2.0 * Uniform01(rng) - 1.0) * limit);
  }
  return m;
}

template <typename S>
Matrix<S> NormalInit(Index rows, Index cols, double stddev, Rng& rng) {
  Matrix<S> m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<S>(StandardNormal(rng) * stddev);
  }
  return m;
}

template <typename S>
class Linear {
 public:
  Linear() = default;
  Linear(Index in, Index out, bool bias, Rng& rng)
      : weight(XavierUniform<S>(in, out, in, out, rng), true) {
    if (bias) this->bias = Tensor<S>(Matrix<S>::Zero(1, out), true);
  }

  Tensor<S> Forward(const Tensor<S>& x) const { return Affine(x, weight, bias); }

  void Collect(const std::string& prefix, ParamList<S>& out) const {
    out.Add(prefix + ".weight", weight);
    if (bias.defined()) out.Add(prefix + ".bias", bias);
  }

  Index in_features() const { return weight.rows(); }
  Index out_features() const { return weight.cols(); }

  Tensor<S> weight;
  Tensor<S> bias;
};

template <typename S>
class Embedding {
 public:
  Embedding() = default;
  Embedding(Index vocab, Index dim, Rng& rng)
      : table(NormalInit<S>(vocab, dim, 1.0 / std::sqrt(static_cast<double>(dim)), rng),
              true) {}

  Tensor<S> Forward(const std::vector<int>& ids) const {
    std::vector<Index> index(ids.begin(), ids.end());
    return GatherRows(table, index);
  }

  void Collect(const std::string& prefix, ParamList<S>& out) const {
    out.Add(prefix + ".table", table);
  }

  Index vocab() const { return table.rows(); }
  Index dim() const { return table.cols(); }

  Tensor<S> table;
};

template <typename S>
class LayerNormLayer {
 public:
  LayerNormLayer() = default;
  explicit LayerNormLayer(Index dim)
      : gamma(Matrix<S>::Ones(1, dim), true), beta(Matrix<S>::Zero(1, dim), true) {}

  Tensor<S> Forward(const Tensor<S>& x) const { return LayerNorm(x, gamma, beta); }

  void Collect(const std::string& prefix, ParamList<S>& out) const {
    out.Add(prefix + ".gamma", gamma);
    out.Add(prefix + ".beta", beta);
  }

  Tensor<S> gamma;
  Tensor<S> beta;
};

template <typename S>
class Conv1dLayer {
 public:
  Conv1dLayer() = default;
  Conv1dLayer(Index in, Index out, int kernel, Rng& rng)
      : kernel_(kernel),
        weight(XavierUniform<S>(in * kernel, out, in * kernel, out, rng), true),
        bias(Matrix<S>::Zero(1, out), true) {}

  Tensor<S> Forward(const Tensor<S>& x, const SeqLayout& layout) const {
    return Conv1d(x, weight, bias, layout, kernel_);
  }

  void Collect(const std::string& prefix, ParamList<S>& out) const {
    out.Add(prefix + ".weight", weight);
    out.Add(prefix + ".bias", bias);
  }

  int kernel() const { return kernel_; }
  Index out_features() const { return weight.cols(); }

 private:
  int kernel_ = 1;

 public:
  Tensor<S> weight;
  Tensor<S> bias;
};

template <typename S>
class MultiHeadSelfAttention {
 public:
  MultiHeadSelfAttention() = default;
  MultiHeadSelfAttention(Index hidden, int heads, Rng& rng)
      : heads_(heads), qkv_(hidden, 3 * hidden, true, rng), out_(hidden, hidden, true, rng) {}

  Tensor<S> Forward(const Tensor<S>& x, const SeqLayout& layout) const {
    return out_.Forward(SelfAttention(qkv_.Forward(x), layout, heads_));
  }

  void Collect(const std::string& prefix, ParamList<S>& out) const {
    qkv_.Collect(prefix + ".qkv", out);
    out_.Collect(prefix + ".out", out);
  }

 private:
  int heads_ = 1;
  Linear<S> qkv_;
  Linear<S> out_;
};

struct FFTBlockConfig {
  int hidden = 256;
  int heads = 2;
  int conv_filter = 1024;
  int conv_kernel = 9;
  double dropout = 0.1;

  void Validate() const {
    if (hidden <= 0 || heads <= 0 || hidden % heads != 0) {
      Fail(ErrorCategory::kConfig, "FFT block hidden " + std::to_string(hidden) +
                                       " must be divisible by heads " +
                                       std::to_string(heads));
    }
    if (conv_kernel < 1 || conv_kernel % 2 == 0) {
      Fail(ErrorCategory::kConfig, "FFT block conv_kernel must be odd");
    }
    if (dropout < 0.0 || dropout >= 1.0) {
      Fail(ErrorCategory::kConfig, "dropout must lie in [0,1)");
    }
  }
};

// Feed-forward Transformer block: self-attention and a two-layer 1-D conv
// feed-forward, each followed by dropout, a residual add and layer norm.
// The second convolution has kernel 1.
template <typename S>
class FFTBlock {
 public:
  FFTBlock() = default;
  FFTBlock(const FFTBlockConfig& cfg, Rng& rng)
      : cfg_(cfg),
        attn_(cfg.hidden, cfg.heads, rng),
        norm1_(cfg.hidden),
        conv1_(cfg.hidden, cfg.conv_filter, cfg.conv_kernel, rng),
        conv2_(cfg.conv_filter, cfg.hidden, 1, rng),
        norm2_(cfg.hidden) {
    cfg.Validate();
  }

  Tensor<S> Forward(const Tensor<S>& x, const SeqLayout& layout,
                    const ForwardContext& ctx) const {
    if (x.cols() != cfg_.hidden) {
      Fail(ErrorCategory::kShape, "FFT block expects width " +
                                      std::to_string(cfg_.hidden) + ", got " +
                                      std::to_string(x.cols()));
    }
    Tensor<S> a = Dropout(attn_.Forward(x, layout), cfg_.dropout, ctx.dropout_rng());
    Tensor<S> h = norm1_.Forward(Add(x, a));
    Tensor<S> f = Relu(conv1_.Forward(h, layout));
    f = Dropout(conv2_.Forward(f, layout), cfg_.dropout, ctx.dropout_rng());
    return norm2_.Forward(Add(h, f));
  }

  void Collect(const std::string& prefix, ParamList<S>& out) const {
    attn_.Collect(prefix + ".attn", out);
    norm1_.Collect(prefix + ".norm1", out);
    conv1_.Collect(prefix + ".conv1", out);
    conv2_.Collect(prefix + ".conv2", out);
    norm2_.Collect(prefix + ".norm2", out);
  }

  const FFTBlockConfig& config() const { return cfg_; }

 private:
  FFTBlockConfig cfg_;
  MultiHeadSelfAttention<S> attn_;
  LayerNormLayer<S> norm1_;
  Conv1dLayer<S> conv1_;
  Conv1dLayer<S> conv2_;
  LayerNormLayer<S> norm2_;
};

// Sinusoidal position table; positions restart at 0 for every sequence.
template <typename S>
Matrix<S> PositionalEncoding(const SeqLayout& layout, Index dim) {
  Matrix<S> pe(layout.total(), dim);
  for (size_t b = 0; b < layout.batch(); ++b) {
    for (Index t = 0; t < layout.length(b); ++t) {
      for (Index i = 0; i < dim; ++i) {
        const double rate =
            std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / static_cast<double>(dim));
        const double angle = static_cast<double>(t) * rate;
        pe(layout.offset(b) + t, i) =
            static_cast<S>(i % 2 == 0 ? std::sin(angle) : std::cos(angle));
      }
    }
  }
  return pe;
}

// Positional encoding followed by `num_blocks` FFT blocks.
template <typename S>
class FFTStack {
 public:
  FFTStack() = default;
  FFTStack(int num_blocks, const FFTBlockConfig& cfg, Rng& rng) : hidden_(cfg.hidden) {
    blocks_.reserve(num_blocks);
    for (int i = 0; i < num_blocks; ++i) blocks_.emplace_back(cfg, rng);
  }

  Tensor<S> Forward(const Tensor<S>& x, const SeqLayout& layout,
                    const ForwardContext& ctx) const {
    if (x.cols() != hidden_) {
      Fail(ErrorCategory::kShape, "FFT stack expects width " +
                                      std::to_string(hidden_) + ", got " +
                                      std::to_string(x.cols()));
    }
    Tensor<S> h = AddConstant(x, PositionalEncoding<S>(layout, hidden_));
    for (const auto& block : blocks_) h = block.Forward(h, layout, ctx);
    return h;
  }

  void Collect(const std::string& prefix, ParamList<S>& out) const {
    for (size_t i = 0; i < blocks_.size(); ++i) {
      blocks_[i].Collect(prefix + ".block" + std::to_string(i), out);
    }
  }

  size_t num_blocks() const { return blocks_.size(); }
  Index hidden() const { return hidden_; }

 private:
  Index hidden_ = 0;
  std::vector<FFTBlock<S>> blocks_;
};

}  // namespace prosody::nn

#endif  // PROSODY_NN_LAYERS_H_
