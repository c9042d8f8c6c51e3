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

#ifndef PROSODY_EVALKIT_REPORT_H_
#define PROSODY_EVALKIT_REPORT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prosody/evalkit/probe.h"
#include "prosody/frontend/char_encoder.h"
#include "prosody/frontend/vocab.h"
#include "prosody/lingdata/corpus.h"

namespace prosody::evalkit {

// Metrics of one system. Absent entries were not measured or are undefined.
struct EvalReport {
  std::optional<double> polyphone_accuracy;
  std::optional<double> span_f1;
  std::optional<double> pw_f1;
  std::optional<double> pph_f1;
  std::optional<double> iph_f1;
  std::optional<double> duration_mae;  // frames
  std::optional<PauseStats> pauses;

  // Throws kNumeric naming the first metric outside its range.
  void Validate() const;
  // "name value" pairs in a fixed order; absent metrics are skipped.
  std::vector<std::pair<std::string, double>> Records() const;
};

// Polyphone accuracy (masked argmax over lexicon candidates), span F1 and
// boundary F1 per tier. Metrics of tasks without a head stay absent.
EvalReport EvaluateFrontend(const frontend::CharEncoder<float>& enc,
                            const frontend::CharVocab& vocab, const lingdata::Lexicon& lex,
                            const lingdata::PhonemeInventory& inv,
                            const std::vector<lingdata::AnnotatedSentence>& sentences);

using Records = std::vector<std::pair<std::string, double>>;

std::string FormatRecords(const Records& records);
void WriteRecords(const std::filesystem::path& path, const Records& records);
Records ReadRecords(const std::filesystem::path& path);

struct TableRow {
  std::string name;
  std::vector<std::optional<double>> cells;
};

// Aligned text table; absent cells print as "-".
std::string FormatTable(const std::string& title, const std::vector<std::string>& columns,
                        const std::vector<TableRow>& rows, int precision = 2);

// Front-end table: ACC-Polyphone, F1-CWS+POS, F1-Prosody PW/PPH/IPH, in
// percent.
std::string FrontendTable(const std::vector<std::pair<std::string, EvalReport>>& systems);
// Acoustic ablation table: duration MAE and the pause probe columns.
std::string AblationTable(const std::vector<std::pair<std::string, EvalReport>>& systems);

}  // namespace prosody::evalkit

#endif  // PROSODY_EVALKIT_REPORT_H_
