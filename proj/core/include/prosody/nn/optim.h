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

#ifndef PROSODY_NN_OPTIM_H_
#define PROSODY_NN_OPTIM_H_

#include <cmath>
#include <string>
#include <vector>

#include "prosody/nn/params.h"

namespace prosody::nn {

struct OptimizerConfig {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-9;
  int warmup_steps = 4000;
  int model_width = 256;
  // Multiplies the schedule; 1.0 is the plain inverse-square-root schedule.
  double lr_scale = 1.0;
  // Global gradient-norm clip; <= 0 disables clipping.
  double clip_norm = 1.0;

  void Validate() const;
};

// Windowed mean training losses, one point per window.
struct LossCurve {
  std::vector<double> points;

  double first() const { return points.empty() ? 0.0 : points.front(); }
  double last() const { return points.empty() ? 0.0 : points.back(); }
};

// Accumulates a scalar series into windowed means.
class LossWindow {
 public:
  explicit LossWindow(int every) : every_(every < 1 ? 1 : every) {}
  void Add(double v, LossCurve& curve) {
    sum_ += v;
    if (++n_ == every_) Flush(curve);
  }
  void Flush(LossCurve& curve) {
    if (n_ == 0) return;
    curve.points.push_back(sum_ / n_);
    sum_ = 0;
    n_ = 0;
  }

 private:
  int every_;
  int n_ = 0;
  double sum_ = 0;
};

// width^-0.5 * min(step^-0.5, step * warmup^-1.5); rejects step < 1.
double NoamLearningRate(long step, long warmup, long width);

// Adam with the inverse-square-root warmup schedule. Owns the moment
// estimates; the parameters themselves live in the model.
template <typename S>
class Adam {
 public:
  Adam(ParamList<S> params, const OptimizerConfig& cfg) : params_(std::move(params)), cfg_(cfg) {
    cfg_.Validate();
    for (const auto& p : params_) {
      m_.push_back(Matrix<S>::Zero(p.tensor.rows(), p.tensor.cols()));
      v_.push_back(Matrix<S>::Zero(p.tensor.rows(), p.tensor.cols()));
    }
  }

  // Applies one update from the accumulated gradients, then clears them.
  // Returns the learning rate used.
  double Step() {
    ++step_;
    const double lr = cfg_.lr_scale *
                      NoamLearningRate(step_, cfg_.warmup_steps, cfg_.model_width);
    double scale = 1.0;
    if (cfg_.clip_norm > 0) {
      const double norm = GradNorm();
      if (norm > cfg_.clip_norm) scale = cfg_.clip_norm / norm;
    }
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    const S b1 = static_cast<S>(cfg_.beta1);
    const S b2 = static_cast<S>(cfg_.beta2);
    const S step_size = static_cast<S>(lr / bc1);
    const S inv_sqrt_bc2 = static_cast<S>(1.0 / std::sqrt(bc2));
    const S eps = static_cast<S>(cfg_.epsilon);
    for (size_t i = 0; i < params_.size(); ++i) {
      auto& t = params_[i].tensor;
      if (t.grad().size() == 0) continue;
      const auto g = (t.grad() * static_cast<S>(scale)).eval();
      m_[i] = b1 * m_[i] + (S(1) - b1) * g;
      v_[i] = b2 * v_[i] + (S(1) - b2) * g.cwiseAbs2();
      t.mutable_value().array() -=
          step_size * m_[i].array() / ((v_[i].array().sqrt() * inv_sqrt_bc2) + eps);
    }
    params_.ZeroGrad();
    return lr;
  }

  double GradNorm() const {
    double total = 0;
    for (const auto& p : params_) {
      if (p.tensor.grad().size() != 0) {
        total += static_cast<double>(p.tensor.grad().squaredNorm());
      }
    }
    return std::sqrt(total);
  }

  void ZeroGrad() { params_.ZeroGrad(); }
  long step() const { return step_; }
  ParamList<S>& params() { return params_; }
  const OptimizerConfig& config() const { return cfg_; }

 private:
  ParamList<S> params_;
  OptimizerConfig cfg_;
  std::vector<Matrix<S>> m_;
  std::vector<Matrix<S>> v_;
  long step_ = 0;
};

}  // namespace prosody::nn

#endif  // PROSODY_NN_OPTIM_H_
