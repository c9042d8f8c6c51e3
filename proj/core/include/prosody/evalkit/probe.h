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

#ifndef PROSODY_EVALKIT_PROBE_H_
#define PROSODY_EVALKIT_PROBE_H_

#include <vector>

#include "prosody/acoustic/model.h"
#include "prosody/frontend/char_encoder.h"
#include "prosody/frontend/vocab.h"
#include "prosody/lingdata/corpus.h"
#include "prosody/lingdata/duration.h"

namespace prosody::evalkit {

// Pause frames at gold PPH boundaries and at word-internal / PW gaps. A
// boundary without an SP counts as 0 frames.
struct PauseStats {
  long boundaries = 0;
  long hits = 0;  // boundaries with an SP of >= 1 frame
  double boundary_frames = 0;
  long gaps = 0;
  double gap_frames = 0;

  double HitRate() const { return boundaries == 0 ? 0.0 : static_cast<double>(hits) / boundaries; }
  double MeanBoundaryFrames() const { return boundaries == 0 ? 0.0 : boundary_frames / boundaries; }
  double MeanGapFrames() const { return gaps == 0 ? 0.0 : gap_frames / gaps; }
  PauseStats& operator+=(const PauseStats& o);
};

// `sample` must carry durations; `gold` has one label per character. The
// last character is never probed.
PauseStats MeasurePauses(const lingdata::DurationSample& sample,
                         const std::vector<lingdata::Boundary>& gold);

bool HasPphBoundary(const lingdata::AnnotatedSentence& s);

// Runs G2P with `g2p` (predicted readings and prosody) on every sentence
// with a gold PPH boundary, synthesizes it with `model` and measures the
// pauses. Character embeddings come from `embedder`, which is required when
// the model uses them.
PauseStats BoundaryPauseProbe(const acoustic::AcousticModel<float>& model,
                              const frontend::CharEncoder<float>& g2p,
                              const frontend::CharEncoder<float>* embedder,
                              const frontend::CharVocab& vocab, const lingdata::Lexicon& lex,
                              const lingdata::PhonemeInventory& inv,
                              const std::vector<lingdata::AnnotatedSentence>& sentences);

}  // namespace prosody::evalkit

#endif  // PROSODY_EVALKIT_PROBE_H_
