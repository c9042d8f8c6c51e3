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

#include "prosody/lingdata/io.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>

#include "json.hpp"
#include "prosody/common/error.h"

namespace prosody::lingdata {

namespace {

using json = nlohmann::json;

static_assert(std::endian::native == std::endian::little, "little-endian host required");

std::ofstream OpenOut(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) Fail(ErrorCategory::kIo, "cannot write " + path.string());
  return out;
}

std::ifstream OpenIn(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) Fail(ErrorCategory::kMissingArtifact, "file not found: " + path.string());
  return in;
}

template <typename F>
void ForEachRecord(const std::filesystem::path& path, F&& fn) {
  auto in = OpenIn(path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      Fail(ErrorCategory::kData,
           path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      Fail(ErrorCategory::kData,
           path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

void SaveCorpus(const std::filesystem::path& path,
                const std::vector<AnnotatedSentence>& sentences,
                const std::vector<std::string>& pos_names) {
  auto out = OpenOut(path);
  for (const auto& s : sentences) {
    json j;
    j["chars"] = s.chars;
    j["pinyin"] = s.pinyin;
    json tags = json::array();
    json bounds = json::array();
    for (size_t i = 0; i < s.size(); ++i) {
      tags.push_back(pos_names.at(s.seg_pos[i].pos) + (s.seg_pos[i].begin ? "-B" : "-I"));
      bounds.push_back(std::string(BoundaryName(s.prosody[i])));
    }
    j["seg_pos"] = tags;
    j["prosody"] = bounds;
    out << j.dump() << '\n';
  }
}

std::vector<AnnotatedSentence> LoadCorpus(const std::filesystem::path& path,
                                          const std::vector<std::string>& pos_names) {
  std::vector<AnnotatedSentence> out;
  ForEachRecord(path, [&](const json& j) {
    AnnotatedSentence s;
    s.chars = j.at("chars").get<std::vector<std::string>>();
    s.pinyin = j.at("pinyin").get<std::vector<int>>();
    for (const auto& t : j.at("seg_pos")) {
      const std::string tag = t.get<std::string>();
      const auto dash = tag.rfind('-');
      if (dash == std::string::npos) Fail(ErrorCategory::kData, "bad seg_pos tag " + tag);
      const std::string pos = tag.substr(0, dash);
      const std::string bi = tag.substr(dash + 1);
      auto it = std::find(pos_names.begin(), pos_names.end(), pos);
      if (it == pos_names.end() || (bi != "B" && bi != "I")) {
        Fail(ErrorCategory::kData, "bad seg_pos tag " + tag);
      }
      s.seg_pos.push_back({static_cast<int>(it - pos_names.begin()), bi == "B"});
    }
    for (const auto& b : j.at("prosody")) s.prosody.push_back(ParseBoundary(b.get<std::string>()));
    s.Validate(static_cast<int>(pos_names.size()));
    out.push_back(std::move(s));
  });
  return out;
}

void SaveDurations(const std::filesystem::path& path,
                   const std::vector<DurationSample>& samples) {
  auto out = OpenOut(path);
  for (const auto& s : samples) {
    json j;
    j["phoneme_ids"] = s.phoneme_ids;
    j["durations"] = s.durations;
    j["char_spans"] = s.char_spans;
    out << j.dump() << '\n';
  }
}

std::vector<DurationSample> LoadDurations(const std::filesystem::path& path) {
  std::vector<DurationSample> out;
  ForEachRecord(path, [&](const json& j) {
    DurationSample s;
    s.phoneme_ids = j.at("phoneme_ids").get<std::vector<int>>();
    s.durations = j.at("durations").get<std::vector<int>>();
    s.char_spans = j.at("char_spans").get<std::vector<int>>();
    out.push_back(std::move(s));
  });
  return out;
}

void SaveMel(const std::filesystem::path& path, const MelSample& mel) {
  auto out = OpenOut(path, true);
  const int32_t header[2] = {static_cast<int32_t>(mel.mel.rows()),
                             static_cast<int32_t>(mel.mel.cols())};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(mel.mel.data()),
            static_cast<std::streamsize>(mel.mel.size() * sizeof(float)));
  if (!out) Fail(ErrorCategory::kIo, "short write to " + path.string());
}

MelSample LoadMel(const std::filesystem::path& path) {
  auto in = OpenIn(path, true);
  int32_t header[2];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || header[0] < 0 || header[1] != kMelDims) {
    Fail(ErrorCategory::kData, "bad mel header in " + path.string());
  }
  MelSample mel;
  mel.mel.resize(header[0], header[1]);
  in.read(reinterpret_cast<char*>(mel.mel.data()),
          static_cast<std::streamsize>(mel.mel.size() * sizeof(float)));
  if (!in) Fail(ErrorCategory::kData, "truncated mel file " + path.string());
  return mel;
}

}  // namespace prosody::lingdata
