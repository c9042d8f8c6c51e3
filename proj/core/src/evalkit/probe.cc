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

#include "prosody/evalkit/probe.h"

#include "prosody/common/error.h"
#include "prosody/frontend/inference.h"

namespace prosody::evalkit {

using lingdata::Boundary;
using lingdata::PhonemeInventory;

PauseStats& PauseStats::operator+=(const PauseStats& o) {
  boundaries += o.boundaries;
  hits += o.hits;
  boundary_frames += o.boundary_frames;
  gaps += o.gaps;
  gap_frames += o.gap_frames;
  return *this;
}

PauseStats MeasurePauses(const lingdata::DurationSample& sample,
                         const std::vector<Boundary>& gold) {
  if (sample.durations.size() != sample.phoneme_ids.size()) {
    Fail(ErrorCategory::kInvalidArgument, "pause probe needs per-phoneme durations");
  }
  PauseStats out;
  const auto& spans = sample.char_spans;
  size_t p = 0;
  size_t ch = 0;
  for (size_t k = 0; k < spans.size(); ++k) {
    const int first = sample.phoneme_ids[p];
    const bool pause = spans[k] == 1 && (first == PhonemeInventory::kSp ||
                                         first == PhonemeInventory::kSil);
    p += spans[k];
    if (pause) continue;
    if (ch >= gold.size()) Fail(ErrorCategory::kShape, "more characters than gold labels");
    const Boundary b = gold[ch++];
    if (ch == gold.size()) break;
    int frames = 0;
    if (k + 1 < spans.size() && spans[k + 1] == 1 &&
        sample.phoneme_ids[p] == PhonemeInventory::kSp) {
      frames = sample.durations[p];
    }
    if (b == Boundary::kPPH) {
      ++out.boundaries;
      out.hits += frames >= 1;
      out.boundary_frames += frames;
    } else if (b != Boundary::kIPH) {
      ++out.gaps;
      out.gap_frames += frames;
    }
  }
  if (ch != gold.size()) Fail(ErrorCategory::kShape, "fewer characters than gold labels");
  return out;
}

bool HasPphBoundary(const lingdata::AnnotatedSentence& s) {
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    if (s.prosody[i] == Boundary::kPPH) return true;
  }
  return false;
}

PauseStats BoundaryPauseProbe(const acoustic::AcousticModel<float>& model,
                              const frontend::CharEncoder<float>& g2p,
                              const frontend::CharEncoder<float>* embedder,
                              const frontend::CharVocab& vocab, const lingdata::Lexicon& lex,
                              const lingdata::PhonemeInventory& inv,
                              const std::vector<lingdata::AnnotatedSentence>& sentences) {
  if (model.config().use_frontend && embedder == nullptr) {
    Fail(ErrorCategory::kInvalidArgument, "pause probe: model needs a character embedder");
  }
  PauseStats total;
  for (const auto& s : sentences) {
    if (!HasPphBoundary(s)) continue;
    acoustic::TtsExample ex;
    ex.sample = frontend::G2p(g2p, vocab, s.chars, lex, inv).skeleton;
    if (model.config().use_frontend) {
      ex.char_embeddings = frontend::CharEmbeddings(*embedder, vocab.Encode(s.chars));
    }
    lingdata::DurationSample timed = ex.sample;
    timed.durations = acoustic::Synthesize(model, ex).durations;
    total += MeasurePauses(timed, s.prosody);
  }
  return total;
}

}  // namespace prosody::evalkit
