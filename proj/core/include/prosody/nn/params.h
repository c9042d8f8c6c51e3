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

#ifndef PROSODY_NN_PARAMS_H_
#define PROSODY_NN_PARAMS_H_

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prosody/nn/tensor.h"

namespace prosody::nn {

template <typename S>
struct NamedParam {
  std::string name;
  Tensor<S> tensor;
};

// Ordered parameter table of a model. Entries share state with the model's
// layers, so updates through the table are visible to the model.
template <typename S>
class ParamList {
 public:
  void Add(std::string name, Tensor<S> tensor) {
    params_.push_back({std::move(name), std::move(tensor)});
  }

  size_t size() const { return params_.size(); }
  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }
  const NamedParam<S>& operator[](size_t i) const { return params_[i]; }
  NamedParam<S>& operator[](size_t i) { return params_[i]; }

  const NamedParam<S>* Find(const std::string& name) const {
    for (const auto& p : params_) {
      if (p.name == name) return &p;
    }
    return nullptr;
  }
  NamedParam<S>* Find(const std::string& name) {
    for (auto& p : params_) {
      if (p.name == name) return &p;
    }
    return nullptr;
  }

  void ZeroGrad() {
    for (auto& p : params_) p.tensor.ZeroGrad();
  }

  Index NumScalars() const {
    Index n = 0;
    for (const auto& p : params_) n += p.tensor.value().size();
    return n;
  }

 private:
  std::vector<NamedParam<S>> params_;
};

struct NamedArray {
  std::string name;
  Index rows = 0;
  Index cols = 0;
  std::vector<float> data;
};

// Named-parameter table serialized as `params.bin` (little-endian float32)
// with a plain-text `manifest.txt` listing tags, names and shapes.
struct Checkpoint {
  std::map<std::string, std::string> tags;
  std::vector<NamedArray> arrays;

  const NamedArray* Find(const std::string& name) const;
  void Save(const std::filesystem::path& dir) const;
  static Checkpoint Load(const std::filesystem::path& dir);
};

// Maps checkpoint name prefixes to model name prefixes. Only parameters
// matched by some rule are loaded; everything else in the model is left
// untouched.
struct TransferMap {
  std::vector<std::pair<std::string, std::string>> prefixes;  // from -> to
};

template <typename S>
Checkpoint ToCheckpoint(const ParamList<S>& params,
                        std::map<std::string, std::string> tags = {}) {
  Checkpoint ckpt;
  ckpt.tags = std::move(tags);
  for (const auto& p : params) {
    NamedArray a;
    a.name = p.name;
    a.rows = p.tensor.rows();
    a.cols = p.tensor.cols();
    a.data.resize(static_cast<size_t>(a.rows * a.cols));
    for (Index i = 0; i < p.tensor.value().size(); ++i) {
      a.data[i] = static_cast<float>(p.tensor.value().data()[i]);
    }
    ckpt.arrays.push_back(std::move(a));
  }
  return ckpt;
}

namespace internal {

template <typename S>
void CopyInto(const NamedArray& src, NamedParam<S>& dst) {
  if (src.rows != dst.tensor.rows() || src.cols != dst.tensor.cols()) {
    Fail(ErrorCategory::kShape,
         "parameter " + dst.name + ": checkpoint shape (" +
             std::to_string(src.rows) + "," + std::to_string(src.cols) +
             ") != model shape (" + std::to_string(dst.tensor.rows()) + "," +
             std::to_string(dst.tensor.cols()) + ")");
  }
  auto& v = dst.tensor.mutable_value();
  for (Index i = 0; i < v.size(); ++i) v.data()[i] = static_cast<S>(src.data[i]);
}

}  // namespace internal

// Exact load: names and shapes of checkpoint and model must match one to
// one.
template <typename S>
void LoadParams(const Checkpoint& ckpt, ParamList<S>& params) {
  if (ckpt.arrays.size() != params.size()) {
    for (const auto& a : ckpt.arrays) {
      if (!params.Find(a.name)) {
        Fail(ErrorCategory::kShape, "checkpoint parameter " + a.name +
                                        " has no counterpart in the model");
      }
    }
  }
  for (auto& p : params) {
    const NamedArray* a = ckpt.Find(p.name);
    if (!a) {
      Fail(ErrorCategory::kShape, "parameter " + p.name + " missing from checkpoint");
    }
    internal::CopyInto(*a, p);
  }
}

// Partial load through a prefix map. Returns the number of parameters
// copied. Every mapped checkpoint parameter must land on a model parameter
// of identical shape.
template <typename S>
size_t LoadParams(const Checkpoint& ckpt, ParamList<S>& params,
                  const TransferMap& map) {
  size_t copied = 0;
  for (const auto& a : ckpt.arrays) {
    for (const auto& [from, to] : map.prefixes) {
      if (a.name.compare(0, from.size(), from) != 0) continue;
      const std::string target = to + a.name.substr(from.size());
      NamedParam<S>* p = params.Find(target);
      if (!p) {
        Fail(ErrorCategory::kShape, "transfer target " + target +
                                        " (from " + a.name +
                                        ") does not exist in the model");
      }
      internal::CopyInto(a, *p);
      ++copied;
      break;
    }
  }
  return copied;
}

// Same mapping as the partial LoadParams, copying between two live
// parameter tables without the float32 round trip.
template <typename S>
size_t TransferParams(const ParamList<S>& src, ParamList<S>& dst, const TransferMap& map) {
  size_t copied = 0;
  for (const auto& a : src) {
    for (const auto& [from, to] : map.prefixes) {
      if (a.name.compare(0, from.size(), from) != 0) continue;
      const std::string target = to + a.name.substr(from.size());
      NamedParam<S>* p = dst.Find(target);
      if (!p) {
        Fail(ErrorCategory::kShape, "transfer target " + target + " (from " + a.name +
                                        ") does not exist in the model");
      }
      if (p->tensor.rows() != a.tensor.rows() || p->tensor.cols() != a.tensor.cols()) {
        Fail(ErrorCategory::kShape,
             "parameter " + target + ": source shape (" + std::to_string(a.tensor.rows()) +
                 "," + std::to_string(a.tensor.cols()) + ") != target shape (" +
                 std::to_string(p->tensor.rows()) + "," + std::to_string(p->tensor.cols()) +
                 ")");
      }
      p->tensor.mutable_value() = a.tensor.value();
      ++copied;
      break;
    }
  }
  return copied;
}

}  // namespace prosody::nn

#endif  // PROSODY_NN_PARAMS_H_
