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

#ifndef PROSODY_LINGDATA_IO_H_
#define PROSODY_LINGDATA_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "prosody/lingdata/corpus.h"
#include "prosody/lingdata/duration.h"
#include "prosody/lingdata/mel.h"

namespace prosody::lingdata {

// Corpus: one JSON object per line,
// {"chars":[...],"pinyin":[...],"seg_pos":["N-B",...],"prosody":["NB",...]}.
void SaveCorpus(const std::filesystem::path& path,
                const std::vector<AnnotatedSentence>& sentences,
                const std::vector<std::string>& pos_names);
std::vector<AnnotatedSentence> LoadCorpus(const std::filesystem::path& path,
                                          const std::vector<std::string>& pos_names);

// Duration dataset: {"phoneme_ids":[...],"durations":[...],"char_spans":[...]}.
void SaveDurations(const std::filesystem::path& path,
                   const std::vector<DurationSample>& samples);
std::vector<DurationSample> LoadDurations(const std::filesystem::path& path);

// Mel: int32 LE frame count, int32 LE 80, then row-major float32 LE.
void SaveMel(const std::filesystem::path& path, const MelSample& mel);
MelSample LoadMel(const std::filesystem::path& path);

}  // namespace prosody::lingdata

#endif  // PROSODY_LINGDATA_IO_H_
