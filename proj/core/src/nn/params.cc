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

#include "prosody/nn/params.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace prosody::nn {

namespace {

constexpr char kMagic[4] = {'P', 'R', 'C', 'K'};
constexpr uint32_t kVersion = 1;

void PutU32(std::ostream& os, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t GetU32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) {
    Fail(ErrorCategory::kIo, "truncated checkpoint");
  }
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

void PutF32(std::ostream& os, float f) { PutU32(os, std::bit_cast<uint32_t>(f)); }

float GetF32(std::istream& is) { return std::bit_cast<float>(GetU32(is)); }

}  // namespace

const NamedArray* Checkpoint::Find(const std::string& name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

void Checkpoint::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream bin(dir / "params.bin", std::ios::binary);
  if (!bin) Fail(ErrorCategory::kIo, "cannot write " + (dir / "params.bin").string());
  bin.write(kMagic, 4);
  PutU32(bin, kVersion);
  PutU32(bin, static_cast<uint32_t>(arrays.size()));
  for (const auto& a : arrays) {
    PutU32(bin, static_cast<uint32_t>(a.name.size()));
    bin.write(a.name.data(), static_cast<std::streamsize>(a.name.size()));
    PutU32(bin, static_cast<uint32_t>(a.rows));
    PutU32(bin, static_cast<uint32_t>(a.cols));
    for (float f : a.data) PutF32(bin, f);
  }
  std::ofstream man(dir / "manifest.txt");
  man << "# prosody checkpoint v" << kVersion << "\n";
  for (const auto& [k, v] : tags) man << "tag " << k << " " << v << "\n";
  for (const auto& a : arrays) {
    man << "param " << a.name << " " << a.rows << " " << a.cols << "\n";
  }
}

Checkpoint Checkpoint::Load(const std::filesystem::path& dir) {
  const auto bin_path = dir / "params.bin";
  const auto man_path = dir / "manifest.txt";
  if (!std::filesystem::exists(bin_path)) {
    Fail(ErrorCategory::kMissingArtifact, "checkpoint not found: " + bin_path.string());
  }
  if (!std::filesystem::exists(man_path)) {
    Fail(ErrorCategory::kMissingArtifact, "checkpoint manifest not found: " + man_path.string());
  }
  Checkpoint ckpt;
  std::ifstream bin(bin_path, std::ios::binary);
  char magic[4];
  if (!bin.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    Fail(ErrorCategory::kIo, "bad checkpoint magic in " + bin_path.string());
  }
  if (GetU32(bin) != kVersion) {
    Fail(ErrorCategory::kIo, "unsupported checkpoint version");
  }
  const uint32_t count = GetU32(bin);
  for (uint32_t i = 0; i < count; ++i) {
    NamedArray a;
    a.name.resize(GetU32(bin));
    bin.read(a.name.data(), static_cast<std::streamsize>(a.name.size()));
    a.rows = GetU32(bin);
    a.cols = GetU32(bin);
    a.data.resize(static_cast<size_t>(a.rows * a.cols));
    for (float& f : a.data) f = GetF32(bin);
    ckpt.arrays.push_back(std::move(a));
  }

  std::ifstream man(man_path);
  std::string line;
  size_t listed = 0;
  while (std::getline(man, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "tag") {
      std::string key, value;
      ss >> key;
      std::getline(ss >> std::ws, value);
      ckpt.tags[key] = value;
    } else if (kind == "param") {
      std::string name;
      Index rows = 0, cols = 0;
      ss >> name >> rows >> cols;
      const NamedArray* a = ckpt.Find(name);
      if (!a || a->rows != rows || a->cols != cols) {
        Fail(ErrorCategory::kIo, "manifest entry " + name +
                                     " disagrees with params.bin");
      }
      ++listed;
    }
  }
  if (listed != ckpt.arrays.size()) {
    Fail(ErrorCategory::kIo, "manifest lists " + std::to_string(listed) +
                                 " params, params.bin holds " +
                                 std::to_string(ckpt.arrays.size()));
  }
  return ckpt;
}

}  // namespace prosody::nn
