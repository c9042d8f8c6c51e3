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

#include "commands.h"

#include <algorithm>
#include <fstream>
#include <functional>

#include "spdlog/spdlog.h"

#include "plot.h"
#include "prosody/common/error.h"
#include "prosody/evalkit/probe.h"
#include "prosody/frontend/inference.h"
#include "prosody/lingdata/io.h"
#include "prosody/lingdata/lexicon.h"
#include "prosody/pipeline/datasets.h"

namespace prosody::tools {

namespace fs = std::filesystem;
using frontend::Task;

namespace {

const char kData[] = "data";
const char kCharLm[] = "charlm";

std::vector<fs::path> CheckpointFiles(const std::string& sub = "model") {
  return {fs::path(sub) / "params.bin", fs::path(sub) / "manifest.txt"};
}

void WriteText(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
  if (!out) Fail(ErrorCategory::kIo, "cannot write " + p.string());
}

void WriteCurve(const fs::path& p, const nn::LossCurve& curve, int every) {
  std::ofstream out(p);
  for (size_t i = 0; i < curve.points.size(); ++i) {
    out << (i + 1) * every << ' ' << curve.points[i] << '\n';
  }
  if (!out) Fail(ErrorCategory::kIo, "cannot write " + p.string());
}

// Reuses a complete stage, builds it when allowed, otherwise fails naming
// the expected artifact.
fs::path Ensure(Context& ctx, const std::string& stage, const std::function<void()>& build) {
  if (ctx.ws.IsComplete(stage)) return ctx.ws.StageDir(stage);
  if (ctx.build_upstream) build();
  return ctx.ws.Require(stage);
}

bool Reuse(const Context& ctx, const std::string& stage) {
  if (!ctx.ws.IsComplete(stage)) return false;
  spdlog::info("{}: complete with the same config, reusing {}", stage,
               ctx.ws.StageDir(stage).string());
  return true;
}

fs::path EnsureData(Context& ctx) { return Ensure(ctx, kData, [&] { GenData(ctx); }); }

fs::path EnsureFrontend(Context& ctx, const std::set<Task>& tasks) {
  return Ensure(ctx, FrontendStage(tasks), [&] { FinetuneFrontend(ctx, tasks); });
}

frontend::CharEncoder<float> LoadEncoder(const fs::path& stage_dir) {
  return frontend::LoadCharEncoder(stage_dir / "model").encoder;
}

const std::set<Task>& MultiTask() { return pipeline::AllTasks(); }

// Character embedder of a preset, or nullopt for phoneme-only systems.
std::optional<frontend::CharEncoder<float>> LoadEmbedder(Context& ctx,
                                                         const pipeline::SystemPreset& p) {
  if (p.frontend == "none") return std::nullopt;
  if (p.frontend == "bert") {
    return LoadEncoder(Ensure(ctx, kCharLm, [&] { PretrainCharLm(ctx); }));
  }
  return LoadEncoder(EnsureFrontend(ctx, MultiTask()));
}

evalkit::Records Prefixed(const std::string& prefix, const evalkit::Records& in) {
  evalkit::Records out;
  for (const auto& [k, v] : in) out.emplace_back(prefix + "." + k, v);
  return out;
}

evalkit::EvalReport EvaluateTts(Context& ctx, const std::string& preset,
                                const pipeline::TtsData& base_data,
                                const frontend::CharEncoder<float>& g2p) {
  const auto& p = pipeline::FindPreset(preset);
  const auto model = acoustic::LoadAcoustic(ctx.ws.Require(TtsStage(preset)) / "model");
  const auto embedder = LoadEmbedder(ctx, p);
  const pipeline::TtsData data =
      embedder ? pipeline::WithCharEmbeddings(base_data, ctx.world, *embedder) : base_data;
  return pipeline::EvaluateAcoustic(model, ctx.world, data, g2p,
                                    embedder ? &*embedder : nullptr);
}

}  // namespace

std::string FrontendStage(const std::set<Task>& tasks) {
  if (tasks == MultiTask()) return "frontend-multi";
  std::string name = "frontend";
  for (Task t : tasks) name += "-" + std::string(frontend::TaskName(t));
  return name;
}

std::string PretrainStage(const std::string& kind) {
  if (kind != "clean" && kind != "noisy") {
    Fail(ErrorCategory::kInvalidArgument, "pretraining preset must be clean or noisy, got '" +
                                              kind + "'");
  }
  return "pretrain-" + kind;
}

std::string TtsStage(const std::string& preset) {
  return "tts-" + pipeline::FindPreset(preset).name;
}

void GenData(Context& ctx) {
  if (Reuse(ctx, kData)) return;
  const fs::path dir = ctx.ws.Begin(kData);
  spdlog::info("data: generating corpora (seed {})", ctx.cfg.seed);
  const auto data = pipeline::GenerateAll(ctx.cfg, ctx.world);
  const auto files = pipeline::SaveGenerated(dir, data, ctx.world);
  evalkit::Records m{
      {"frontend_train_sentences", static_cast<double>(data.frontend.train.size())},
      {"frontend_test_sentences", static_cast<double>(data.frontend.test.size())},
      {"tts_train_sentences", static_cast<double>(data.tts.train.size())},
      {"tts_test_sentences", static_cast<double>(data.tts.test.size())},
      {"pretrain_train_samples", static_cast<double>(data.pretrain_clean.train.size())},
      {"pretrain_heldout_samples", static_cast<double>(data.pretrain_clean.heldout.size())},
      {"constant_duration_mae", pipeline::ConstantDurationMae(data.tts)},
  };
  ctx.ws.Complete(kData, files, {}, m);
  spdlog::info("data: wrote {} files to {}", files.size(), dir.string());
}

void PretrainCharLm(Context& ctx) {
  if (Reuse(ctx, kCharLm)) return;
  const fs::path data_dir = EnsureData(ctx);
  const auto fd = pipeline::LoadFrontendData(data_dir, ctx.world);
  const fs::path dir = ctx.ws.Begin(kCharLm);
  spdlog::info("charlm: {} MLM steps on {} sentences", ctx.cfg.encoder.mlm_steps, fd.train.size());
  const auto tf = pipeline::PretrainFrontend(ctx.cfg, ctx.world, fd);
  frontend::SaveCharEncoder(dir / "model", tf.encoder, ctx.world.vocab);
  WriteCurve(dir / "loss.txt", tf.mlm.train, ctx.cfg.training.log_every);
  evalkit::Records m{{"mlm_heldout_loss_initial", tf.mlm.initial_heldout_loss},
                     {"mlm_heldout_loss_final", tf.mlm.final_heldout_loss},
                     {"mlm_heldout_accuracy", tf.mlm.heldout_accuracy},
                     {"mlm_chance_accuracy", tf.mlm.chance_accuracy}};
  auto files = CheckpointFiles();
  files.emplace_back("loss.txt");
  ctx.ws.Complete(kCharLm, files, {kData}, m);
  spdlog::info("charlm: held-out MLM loss {:.3f} -> {:.3f}, accuracy {:.3f}",
               tf.mlm.initial_heldout_loss, tf.mlm.final_heldout_loss, tf.mlm.heldout_accuracy);
}

void FinetuneFrontend(Context& ctx, const std::set<Task>& tasks) {
  if (tasks.empty()) Fail(ErrorCategory::kInvalidArgument, "at least one task is required");
  const std::string stage = FrontendStage(tasks);
  if (Reuse(ctx, stage)) return;
  const fs::path data_dir = EnsureData(ctx);
  const fs::path lm_dir = Ensure(ctx, kCharLm, [&] { PretrainCharLm(ctx); });
  const auto fd = pipeline::LoadFrontendData(data_dir, ctx.world);
  auto enc = LoadEncoder(lm_dir);
  const fs::path dir = ctx.ws.Begin(stage);
  spdlog::info("{}: {} fine-tuning steps, tasks {}", stage, ctx.cfg.encoder.finetune_steps,
               frontend::JoinTasks(tasks));
  const auto report = pipeline::FinetuneFrontend(ctx.cfg, ctx.world, fd, tasks, enc);
  frontend::SaveCharEncoder(dir / "model", enc, ctx.world.vocab);
  WriteCurve(dir / "loss.txt", report.total, ctx.cfg.training.log_every);
  const auto eval = evalkit::EvaluateFrontend(enc, ctx.world.vocab, ctx.world.lex, ctx.world.inv,
                                              fd.test);
  eval.Validate();
  auto m = eval.Records();
  m.emplace_back("finetune_loss_first", report.total.first());
  m.emplace_back("finetune_loss_last", report.total.last());
  const std::string table = evalkit::FrontendTable({{stage, eval}});
  WriteText(dir / "table.txt", table);
  auto files = CheckpointFiles();
  files.emplace_back("loss.txt");
  files.emplace_back("table.txt");
  ctx.ws.Complete(stage, files, {kData, kCharLm}, m);
  spdlog::info("{}: done\n{}", stage, table);
}

void PretrainDuration(Context& ctx, const std::string& kind) {
  const std::string stage = PretrainStage(kind);
  if (Reuse(ctx, stage)) return;
  const fs::path data_dir = EnsureData(ctx);
  const auto pd = pipeline::LoadPretrainData(data_dir, kind == "noisy");
  const fs::path dir = ctx.ws.Begin(stage);
  spdlog::info("{}: {} steps on {} samples", stage, ctx.cfg.pretraining.steps, pd.train.size());
  const auto run = pipeline::RunDurationPretrain(ctx.cfg, ctx.world, pd);
  durpretrain::SavePretrain(dir / "model", run.model, kind);
  WriteCurve(dir / "loss.txt", run.report.total, ctx.cfg.training.log_every);
  const auto& r = run.report;
  evalkit::Records m{{"loss_first_step", r.first_step_total},
                     {"loss_last_window", r.total.last()},
                     {"heldout_dur_mae_log_initial", r.initial.dur_mae},
                     {"heldout_dur_mae_log_final", r.final.dur_mae},
                     {"heldout_mlm_ce_initial", r.initial.mlm_ce},
                     {"heldout_mlm_ce_final", r.final.mlm_ce},
                     {"heldout_mlm_accuracy", r.final.accuracy},
                     {"mlm_chance_accuracy", r.chance_accuracy}};
  auto files = CheckpointFiles();
  files.emplace_back("loss.txt");
  ctx.ws.Complete(stage, files, {kData}, m);
  spdlog::info("{}: loss {:.3f} -> {:.3f}, held-out MLM accuracy {:.3f}", stage,
               r.first_step_total, r.total.last(), r.final.accuracy);
}

void TrainTts(Context& ctx, const std::string& preset) {
  const auto& p = pipeline::FindPreset(preset);
  const std::string stage = TtsStage(preset);
  if (Reuse(ctx, stage)) return;
  const fs::path data_dir = EnsureData(ctx);
  std::vector<std::string> upstream{kData};
  const auto embedder = LoadEmbedder(ctx, p);
  if (p.frontend == "bert") upstream.push_back(kCharLm);
  if (p.frontend == "bert-multi") upstream.push_back(FrontendStage(MultiTask()));
  std::optional<durpretrain::PretrainModel<float>> pretrained;
  if (p.pretrain != "none") {
    const std::string pre = PretrainStage(p.pretrain);
    const fs::path pre_dir = Ensure(ctx, pre, [&] { PretrainDuration(ctx, p.pretrain); });
    pretrained = durpretrain::LoadPretrain(pre_dir / "model").model;
    upstream.push_back(pre);
  }
  pipeline::TtsData data = pipeline::LoadTtsData(data_dir, ctx.world);
  if (embedder) data = pipeline::WithCharEmbeddings(data, ctx.world, *embedder);
  const fs::path dir = ctx.ws.Begin(stage);
  spdlog::info("{}: {} steps, front-end {}, pretraining {}", stage, ctx.cfg.training.steps,
               p.frontend, p.pretrain);
  const auto run = pipeline::TrainAcoustic(ctx.cfg, ctx.world, data, embedder.has_value(),
                                           pretrained ? &*pretrained : nullptr);
  acoustic::SaveAcoustic(dir / "model", run.model, {{"preset", p.name}});
  WriteCurve(dir / "loss.txt", run.report.total, ctx.cfg.training.log_every);
  std::ofstream curve(dir / "heldout_dur_mae.txt");
  for (const auto& [step, mae] : run.report.heldout_dur_mae) curve << step << ' ' << mae << '\n';
  curve.close();
  const double first = run.report.first_step.total;
  const double last = run.report.total.last();
  evalkit::Records m{{"loss_first_step", first},
                     {"loss_last_window", last},
                     {"loss_ratio", first > 0 ? last / first : 0.0},
                     {"transferred_tensors", static_cast<double>(run.transferred)}};
  if (!run.report.heldout_dur_mae.empty()) {
    m.emplace_back("heldout_dur_mae_final", run.report.heldout_dur_mae.back().second);
  }
  auto files = CheckpointFiles();
  files.emplace_back("loss.txt");
  files.emplace_back("heldout_dur_mae.txt");
  ctx.ws.Complete(stage, files, upstream, m);
  spdlog::info("{}: loss {:.3f} -> {:.3f}", stage, first, last);
}

void Synthesize(Context& ctx, const SynthesisRequest& req) {
  const auto& p = pipeline::FindPreset(req.preset);
  const fs::path data_dir = ctx.ws.Require(kData);
  const auto model = acoustic::LoadAcoustic(ctx.ws.Require(TtsStage(p.name)) / "model");
  const auto g2p = LoadEncoder(ctx.ws.Require(FrontendStage(MultiTask())));
  const auto embedder = LoadEmbedder(ctx, p);
  std::vector<std::string> chars;
  std::string source;
  if (!req.text.empty()) {
    chars = lingdata::SplitUtf8(req.text);
    source = "text";
  } else {
    const auto test =
        lingdata::LoadCorpus(data_dir / "tts_test.jsonl", ctx.world.spec.pos_names);
    int index = req.index;
    if (index < 0) {
      for (size_t i = 0; i < test.size() && index < 0; ++i) {
        if (evalkit::HasPphBoundary(test[i])) index = static_cast<int>(i);
      }
      if (index < 0) index = 0;
    }
    if (index >= static_cast<int>(test.size())) {
      Fail(ErrorCategory::kInvalidArgument, "--index " + std::to_string(index) +
                                                " out of range (" + std::to_string(test.size()) +
                                                " held-out sentences)");
    }
    chars = test[index].chars;
    source = "tts_test.jsonl:" + std::to_string(index);
  }
  if (chars.empty()) Fail(ErrorCategory::kInvalidArgument, "nothing to synthesize");
  const auto g = frontend::G2p(g2p, ctx.world.vocab, chars, ctx.world.lex, ctx.world.inv);
  acoustic::TtsExample ex;
  ex.sample = g.skeleton;
  if (embedder) {
    ex.char_embeddings = frontend::CharEmbeddings(*embedder, ctx.world.vocab.Encode(chars));
  }
  const auto syn = acoustic::Synthesize(model, ex);

  const std::string stage = "synth-" + p.name;
  const fs::path dir = ctx.ws.Begin(stage);
  lingdata::SaveMel(dir / "utt.mel", lingdata::MelSample{syn.mel});
  std::ofstream dur(dir / "durations.txt");
  std::vector<int> sp_starts;
  int frame = 0;
  long sp = 0;
  double sp_frames = 0;
  for (size_t i = 0; i < syn.durations.size(); ++i) {
    const int id = g.skeleton.phoneme_ids[i];
    dur << ctx.world.inv.Symbol(id) << ' ' << syn.durations[i] << '\n';
    if (id == lingdata::PhonemeInventory::kSp) {
      sp_starts.push_back(frame);
      ++sp;
      sp_frames += syn.durations[i];
    }
    frame += syn.durations[i];
  }
  dur.close();
  std::string text;
  for (const auto& c : chars) text += c;
  std::string prosody;
  for (auto b : g.prosody) prosody += std::string(lingdata::BoundaryName(b)) + " ";
  WriteText(dir / "input.txt", "source " + source + "\ntext " + text + "\nprosody " + prosody +
                                   "\n");
  std::vector<fs::path> files{"utt.mel", "durations.txt", "input.txt"};
  if (req.plot) {
    WriteMelPgm(dir / "utt.pgm", syn.mel, 2, sp_starts);
    files.emplace_back("utt.pgm");
  }
  ctx.ws.Complete(stage, files, {kData, TtsStage(p.name), FrontendStage(MultiTask())},
                  {{"frames", static_cast<double>(syn.mel.rows())},
                   {"phonemes", static_cast<double>(syn.durations.size())},
                   {"sp_count", static_cast<double>(sp)},
                   {"sp_mean_frames", sp > 0 ? sp_frames / sp : 0.0}});
  spdlog::info("{}: {} frames, {} pauses -> {}", stage, syn.mel.rows(), sp, dir.string());
}

void Evaluate(Context& ctx) {
  const fs::path data_dir = ctx.ws.Require(kData);
  evalkit::Records records;
  std::vector<std::pair<std::string, evalkit::EvalReport>> fe_rows;
  const auto fd = pipeline::LoadFrontendData(data_dir, ctx.world);
  std::vector<std::set<Task>> task_sets;
  for (Task t : frontend::kAllTasks) task_sets.push_back({t});
  task_sets.push_back(MultiTask());
  for (const auto& tasks : task_sets) {
    const std::string stage = FrontendStage(tasks);
    if (!ctx.ws.IsComplete(stage)) continue;
    const auto enc = LoadEncoder(ctx.ws.StageDir(stage));
    auto r = evalkit::EvaluateFrontend(enc, ctx.world.vocab, ctx.world.lex, ctx.world.inv, fd.test);
    r.Validate();
    auto rec = Prefixed(stage, r.Records());
    records.insert(records.end(), rec.begin(), rec.end());
    fe_rows.emplace_back(stage, r);
  }
  std::vector<std::pair<std::string, evalkit::EvalReport>> tts_rows;
  std::vector<std::string> tts_presets;
  for (const auto& p : pipeline::AblationPresets()) {
    if (ctx.ws.IsComplete(TtsStage(p.name))) tts_presets.push_back(p.name);
  }
  if (!tts_presets.empty()) {
    const auto g2p = LoadEncoder(ctx.ws.Require(FrontendStage(MultiTask())));
    const auto data = pipeline::LoadTtsData(data_dir, ctx.world);
    for (const auto& name : tts_presets) {
      auto r = EvaluateTts(ctx, name, data, g2p);
      r.Validate();
      auto rec = Prefixed(name, r.Records());
      records.insert(records.end(), rec.begin(), rec.end());
      tts_rows.emplace_back(name, r);
    }
  }
  if (fe_rows.empty() && tts_rows.empty()) {
    Fail(ErrorCategory::kMissingArtifact,
         "nothing to evaluate: no complete frontend-* or tts-* stage under " +
             ctx.ws.root().string());
  }
  const fs::path dir = ctx.ws.Begin("eval");
  std::string tables;
  if (!fe_rows.empty()) tables += evalkit::FrontendTable(fe_rows) + "\n";
  if (!tts_rows.empty()) tables += evalkit::AblationTable(tts_rows);
  WriteText(dir / "tables.txt", tables);
  ctx.ws.Complete("eval", {"tables.txt"}, {kData}, records);
  spdlog::info("eval: wrote {}\n{}", (dir / "tables.txt").string(), tables);
}

void Ablate(Context& ctx, const std::vector<std::string>& presets) {
  if (presets.empty()) Fail(ErrorCategory::kInvalidArgument, "no presets given");
  for (const auto& name : presets) pipeline::FindPreset(name);
  ctx.build_upstream = true;
  EnsureData(ctx);
  EnsureFrontend(ctx, MultiTask());
  for (const auto& name : presets) TrainTts(ctx, name);
  const auto data = pipeline::LoadTtsData(ctx.ws.StageDir(kData), ctx.world);
  const auto g2p = LoadEncoder(ctx.ws.StageDir(FrontendStage(MultiTask())));
  std::vector<std::pair<std::string, evalkit::EvalReport>> rows;
  evalkit::Records records;
  std::vector<std::string> upstream{kData, FrontendStage(MultiTask())};
  for (const auto& name : presets) {
    auto r = EvaluateTts(ctx, name, data, g2p);
    r.Validate();
    auto rec = Prefixed(name, r.Records());
    records.insert(records.end(), rec.begin(), rec.end());
    rows.emplace_back(name, r);
    upstream.push_back(TtsStage(name));
  }
  const std::string table = evalkit::AblationTable(rows);
  const fs::path dir = ctx.ws.Begin("ablate");
  WriteText(dir / "table.txt", table);
  ctx.ws.Complete("ablate", {"table.txt"}, upstream, records);
  spdlog::info("ablate: wrote {}\n{}", (dir / "table.txt").string(), table);
}

void PlotMel(const fs::path& mel, const fs::path& image, int scale) {
  const auto m = lingdata::LoadMel(mel);
  WriteMelPgm(image, m.mel, scale);
  spdlog::info("plot-mel: {} frames -> {}", m.frames(), image.string());
}

}  // namespace prosody::tools
