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

#ifndef PROSODY_TESTS_UNIT_GRADCHECK_H_
#define PROSODY_TESTS_UNIT_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "prosody/nn/params.h"
#include "prosody/nn/tensor.h"

namespace prosody::testing {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;  // name of the worst tensor
};

// Central-difference oracle. `loss` must rebuild the whole forward pass from
// the current parameter values and return a 1x1 tensor; it is evaluated once
// with grad enabled for the analytic gradient and twice per scalar with
// grad disabled. The error per tensor is ||g_analytic - g_numeric|| /
// max(||g_analytic|| + ||g_numeric||, 1e-12).
inline GradCheckResult CheckGradients(
    std::vector<nn::NamedParam<double>> wrt,
    const std::function<nn::Tensor<double>()>& loss, double h = 1e-5) {
  for (auto& p : wrt) p.tensor.ZeroGrad();
  loss().Backward();
  GradCheckResult result;
  for (auto& p : wrt) {
    nn::Matrix<double> analytic = p.tensor.grad();
    if (analytic.size() == 0) {
      analytic = nn::Matrix<double>::Zero(p.tensor.rows(), p.tensor.cols());
    }
    nn::Matrix<double> numeric(p.tensor.rows(), p.tensor.cols());
    auto& v = p.tensor.mutable_value();
    for (nn::Index i = 0; i < v.size(); ++i) {
      const double orig = v.data()[i];
      double plus, minus;
      {
        nn::NoGradGuard guard;
        v.data()[i] = orig + h;
        plus = loss().item();
        v.data()[i] = orig - h;
        minus = loss().item();
      }
      v.data()[i] = orig;
      numeric.data()[i] = (plus - minus) / (2 * h);
    }
    const double denom =
        std::max(analytic.norm() + numeric.norm(), 1e-12);
    const double err = (analytic - numeric).norm() / denom;
    if (err > result.max_rel_error) {
      result.max_rel_error = err;
      result.worst = p.name;
    }
  }
  return result;
}

inline std::vector<nn::NamedParam<double>> AsList(const nn::ParamList<double>& params) {
  return {params.begin(), params.end()};
}

}  // namespace prosody::testing

#endif  // PROSODY_TESTS_UNIT_GRADCHECK_H_
