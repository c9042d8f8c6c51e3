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

#include "prosody/evalkit/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "prosody/common/error.h"
#include "prosody/evalkit/metrics.h"
#include "prosody/frontend/inference.h"

namespace prosody::evalkit {

using lingdata::Boundary;

namespace {

void CheckRange(const char* name, const std::optional<double>& v, double hi) {
  if (!v) return;
  if (!std::isfinite(*v) || *v < 0 || *v > hi) {
    Fail(ErrorCategory::kNumeric, std::string(name) + " out of range: " + std::to_string(*v));
  }
}

std::optional<double> Percent(const std::optional<double>& v) {
  if (!v) return std::nullopt;
  return *v * 100;
}

}  // namespace

void EvalReport::Validate() const {
  const double inf = std::numeric_limits<double>::infinity();
  CheckRange("polyphone_accuracy", polyphone_accuracy, 1);
  CheckRange("span_f1", span_f1, 1);
  CheckRange("pw_f1", pw_f1, 1);
  CheckRange("pph_f1", pph_f1, 1);
  CheckRange("iph_f1", iph_f1, 1);
  CheckRange("duration_mae", duration_mae, inf);
  if (pauses) {
    CheckRange("pause_hit_rate", pauses->HitRate(), 1);
    CheckRange("pause_pph_frames", pauses->MeanBoundaryFrames(), inf);
    CheckRange("pause_gap_frames", pauses->MeanGapFrames(), inf);
  }
}

Records EvalReport::Records() const {
  evalkit::Records out;
  auto add = [&](const char* name, const std::optional<double>& v) {
    if (v) out.emplace_back(name, *v);
  };
  add("polyphone_accuracy", polyphone_accuracy);
  add("span_f1", span_f1);
  add("prosody_f1_pw", pw_f1);
  add("prosody_f1_pph", pph_f1);
  add("prosody_f1_iph", iph_f1);
  add("duration_mae_frames", duration_mae);
  if (pauses) {
    out.emplace_back("pph_boundaries", static_cast<double>(pauses->boundaries));
    out.emplace_back("pph_sp_hit_rate", pauses->HitRate());
    out.emplace_back("pph_sp_mean_frames", pauses->MeanBoundaryFrames());
    out.emplace_back("gap_mean_frames", pauses->MeanGapFrames());
  }
  return out;
}

EvalReport EvaluateFrontend(const frontend::CharEncoder<float>& enc,
                            const frontend::CharVocab& vocab, const lingdata::Lexicon& lex,
                            const lingdata::PhonemeInventory& inv,
                            const std::vector<lingdata::AnnotatedSentence>& sentences) {
  using frontend::Task;
  EvalReport r;
  std::vector<std::vector<int>> ids;
  ids.reserve(sentences.size());
  for (const auto& s : sentences) ids.push_back(vocab.Encode(s.chars));
  if (enc.HasHead(Task::kPolyphone)) {
    std::vector<int> pred, gold;
    for (const auto& s : sentences) {
      // gold prosody keeps the skeleton independent of the prosody head
      const auto g = frontend::G2p(enc, vocab, s.chars, lex, inv, &s.prosody);
      for (size_t k = 0; k < s.size(); ++k) {
        if (!lex.IsPolyphone(s.chars[k])) continue;
        pred.push_back(g.pinyin[k]);
        gold.push_back(s.pinyin[k]);
      }
    }
    r.polyphone_accuracy = PolyphoneAccuracy(pred, gold);
  }
  if (enc.HasHead(Task::kSegPos)) {
    std::vector<std::vector<int>> gold;
    for (const auto& s : sentences) {
      std::vector<int> tags;
      for (const auto& t : s.seg_pos) tags.push_back(t.Id());
      gold.push_back(std::move(tags));
    }
    r.span_f1 = SpanF1(frontend::PredictTags(enc, ids, Task::kSegPos), gold);
  }
  if (enc.HasHead(Task::kProsody)) {
    std::vector<std::vector<int>> gold;
    for (const auto& s : sentences) {
      std::vector<int> labels;
      for (Boundary b : s.prosody) labels.push_back(static_cast<int>(b));
      gold.push_back(std::move(labels));
    }
    const auto pred = frontend::PredictTags(enc, ids, Task::kProsody);
    r.pw_f1 = BoundaryF1(pred, gold, Boundary::kPW);
    r.pph_f1 = BoundaryF1(pred, gold, Boundary::kPPH);
    r.iph_f1 = BoundaryF1(pred, gold, Boundary::kIPH);
  }
  return r;
}

std::string FormatRecords(const Records& records) {
  std::ostringstream os;
  os.precision(9);
  for (const auto& [name, value] : records) os << name << ' ' << value << '\n';
  return os.str();
}

void WriteRecords(const std::filesystem::path& path, const Records& records) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCategory::kIo, "cannot write " + path.string());
  out << FormatRecords(records);
  if (!out) Fail(ErrorCategory::kIo, "write failed: " + path.string());
}

Records ReadRecords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kMissingArtifact, "missing metric file " + path.string());
  Records out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string name;
    double value = 0;
    if (!(ls >> name >> value)) {
      Fail(ErrorCategory::kData, path.string() + ":" + std::to_string(lineno) +
                                     ": expected 'name value'");
    }
    out.emplace_back(name, value);
  }
  return out;
}

std::string FormatTable(const std::string& title, const std::vector<std::string>& columns,
                        const std::vector<TableRow>& rows, int precision) {
  std::vector<std::vector<std::string>> cells;
  std::vector<size_t> width(columns.size() + 1, 0);
  width[0] = std::string("System").size();
  for (size_t c = 0; c < columns.size(); ++c) width[c + 1] = columns[c].size();
  for (const auto& row : rows) {
    if (row.cells.size() != columns.size()) {
      Fail(ErrorCategory::kShape, "table row '" + row.name + "' has " +
                                      std::to_string(row.cells.size()) + " cells, expected " +
                                      std::to_string(columns.size()));
    }
    std::vector<std::string> line{row.name};
    for (const auto& v : row.cells) {
      if (!v) {
        line.emplace_back("-");
        continue;
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.*f", precision, *v);
      line.emplace_back(buf);
    }
    for (size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    cells.push_back(std::move(line));
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& line) {
    for (size_t c = 0; c < line.size(); ++c) {
      if (c == 0) {
        os << line[c] << std::string(width[c] - line[c].size(), ' ');
      } else {
        os << "  " << std::string(width[c] - line[c].size(), ' ') << line[c];
      }
    }
    os << '\n';
  };
  if (!title.empty()) os << title << '\n';
  std::vector<std::string> header{"System"};
  header.insert(header.end(), columns.begin(), columns.end());
  emit(header);
  size_t total = 0;
  for (size_t w : width) total += w + 2;
  os << std::string(total - 2, '-') << '\n';
  for (const auto& line : cells) emit(line);
  return os.str();
}

std::string FrontendTable(const std::vector<std::pair<std::string, EvalReport>>& systems) {
  std::vector<TableRow> rows;
  for (const auto& [name, r] : systems) {
    rows.push_back({name,
                    {Percent(r.polyphone_accuracy), Percent(r.span_f1), Percent(r.pw_f1),
                     Percent(r.pph_f1), Percent(r.iph_f1)}});
  }
  return FormatTable("Front-end results (%)",
                     {"ACC-Polyphone", "F1-CWS+POS", "F1-PW", "F1-PPH", "F1-IPH"}, rows);
}

std::string AblationTable(const std::vector<std::pair<std::string, EvalReport>>& systems) {
  std::vector<TableRow> rows;
  for (const auto& [name, r] : systems) {
    TableRow row{name, {r.duration_mae, std::nullopt, std::nullopt, std::nullopt}};
    if (r.pauses) {
      row.cells[1] = r.pauses->HitRate();
      row.cells[2] = r.pauses->MeanBoundaryFrames();
      row.cells[3] = r.pauses->MeanGapFrames();
    }
    rows.push_back(std::move(row));
  }
  return FormatTable("Acoustic ablation",
                     {"Dur-MAE", "PPH-SP-rate", "PPH-SP-frames", "Gap-frames"}, rows, 3);
}

}  // namespace prosody::evalkit
