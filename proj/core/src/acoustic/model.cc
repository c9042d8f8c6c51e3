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

#include "prosody/acoustic/model.h"

#include <cmath>

#include "prosody/common/error.h"

namespace prosody::acoustic {

namespace {

int TagInt(const std::map<std::string, std::string>& tags, const std::string& key) {
  auto it = tags.find(key);
  if (it == tags.end()) Fail(ErrorCategory::kData, "checkpoint manifest lacks tag '" + key + "'");
  return std::stoi(it->second);
}

}  // namespace

nn::FFTBlockConfig AcousticConfig::BlockConfig() const {
  return {hidden, heads, conv_filter, conv_kernel, dropout};
}

void AcousticConfig::Validate() const {
  if (phoneme_vocab < 5) Fail(ErrorCategory::kConfig, "acoustic.phoneme_vocab too small");
  if (encoder_blocks < 1 || decoder_blocks < 1) {
    Fail(ErrorCategory::kConfig, "acoustic encoder/decoder need at least one block");
  }
  BlockConfig().Validate();
  if (duration_filter < 1 || duration_kernel < 1 || duration_kernel % 2 == 0) {
    Fail(ErrorCategory::kConfig, "acoustic.duration_kernel must be odd and filter >= 1");
  }
  if (mel_dims < 1) Fail(ErrorCategory::kConfig, "acoustic.mel_dims must be >= 1");
  if (use_frontend && (char_hidden < 1 || combine_kernel % 2 == 0)) {
    Fail(ErrorCategory::kConfig, "acoustic.combine_kernel must be odd and char_hidden >= 1");
  }
}

std::map<std::string, std::string> AcousticConfig::ToTags() const {
  return {{"model", "acoustic"},
          {"phoneme_vocab", std::to_string(phoneme_vocab)},
          {"hidden", std::to_string(hidden)},
          {"encoder_blocks", std::to_string(encoder_blocks)},
          {"decoder_blocks", std::to_string(decoder_blocks)},
          {"heads", std::to_string(heads)},
          {"conv_filter", std::to_string(conv_filter)},
          {"conv_kernel", std::to_string(conv_kernel)},
          {"duration_filter", std::to_string(duration_filter)},
          {"duration_kernel", std::to_string(duration_kernel)},
          {"mel_dims", std::to_string(mel_dims)},
          {"use_frontend", use_frontend ? "1" : "0"},
          {"char_hidden", std::to_string(char_hidden)},
          {"combine_kernel", std::to_string(combine_kernel)}};
}

AcousticConfig AcousticConfig::FromTags(const std::map<std::string, std::string>& tags) {
  AcousticConfig c;
  c.phoneme_vocab = TagInt(tags, "phoneme_vocab");
  c.hidden = TagInt(tags, "hidden");
  c.encoder_blocks = TagInt(tags, "encoder_blocks");
  c.decoder_blocks = TagInt(tags, "decoder_blocks");
  c.heads = TagInt(tags, "heads");
  c.conv_filter = TagInt(tags, "conv_filter");
  c.conv_kernel = TagInt(tags, "conv_kernel");
  c.duration_filter = TagInt(tags, "duration_filter");
  c.duration_kernel = TagInt(tags, "duration_kernel");
  c.mel_dims = TagInt(tags, "mel_dims");
  c.use_frontend = TagInt(tags, "use_frontend") != 0;
  c.char_hidden = TagInt(tags, "char_hidden");
  c.combine_kernel = TagInt(tags, "combine_kernel");
  return c;
}

template <typename S>
DurationPredictor<S>::DurationPredictor(Index in, Index filter, int kernel, double dropout,
                                        Rng& rng)
    : dropout_(dropout),
      conv1_(in, filter, kernel, rng),
      norm1_(filter),
      conv2_(filter, filter, kernel, rng),
      norm2_(filter),
      proj_(filter, 1, true, rng) {}

template <typename S>
nn::Tensor<S> DurationPredictor<S>::Forward(const nn::Tensor<S>& x, const nn::SeqLayout& layout,
                                            const nn::ForwardContext& ctx) const {
  nn::Tensor<S> h = nn::Relu(conv1_.Forward(x, layout));
  h = nn::Dropout(norm1_.Forward(h), dropout_, ctx.dropout_rng());
  h = nn::Relu(conv2_.Forward(h, layout));
  h = nn::Dropout(norm2_.Forward(h), dropout_, ctx.dropout_rng());
  return proj_.Forward(h);
}

template <typename S>
void DurationPredictor<S>::Collect(const std::string& prefix, nn::ParamList<S>& out) const {
  conv1_.Collect(prefix + ".conv1", out);
  norm1_.Collect(prefix + ".norm1", out);
  conv2_.Collect(prefix + ".conv2", out);
  norm2_.Collect(prefix + ".norm2", out);
  proj_.Collect(prefix + ".proj", out);
}

std::vector<Index> LengthRegulateIndex(const std::vector<int>& durations,
                                       const nn::SeqLayout& phone_layout,
                                       nn::SeqLayout* frame_layout) {
  if (static_cast<Index>(durations.size()) != phone_layout.total()) {
    Fail(ErrorCategory::kShape, "length regulator: " + std::to_string(durations.size()) +
                                    " durations for " + std::to_string(phone_layout.total()) +
                                    " positions");
  }
  std::vector<Index> index;
  std::vector<Index> frames;
  for (size_t b = 0; b < phone_layout.batch(); ++b) {
    Index count = 0;
    for (Index t = 0; t < phone_layout.length(b); ++t) {
      const Index row = phone_layout.offset(b) + t;
      const int d = durations[row];
      if (d < 0) Fail(ErrorCategory::kInvalidArgument, "negative duration");
      for (int k = 0; k < d; ++k) index.push_back(row);
      count += d;
    }
    if (count == 0 && phone_layout.length(b) > 0) {
      Fail(ErrorCategory::kInvalidArgument,
           "all durations are zero for item " + std::to_string(b) + " (degenerate utterance)");
    }
    frames.push_back(count);
  }
  if (frame_layout) *frame_layout = nn::SeqLayout(frames);
  return index;
}

std::vector<int> DecodeDurations(const nn::Matrix<float>& log_durations) {
  std::vector<int> out(log_durations.size());
  for (Index i = 0; i < log_durations.size(); ++i) {
    const double frames = std::round(std::exp(static_cast<double>(log_durations.data()[i])));
    out[i] = static_cast<int>(std::clamp(frames, 1.0, 1e6));
  }
  return out;
}

template <typename S>
AcousticBatch<S> MakeBatch(const std::vector<const TtsExample*>& items, bool use_frontend) {
  AcousticBatch<S> batch;
  std::vector<Index> phone_lengths, frame_lengths;
  Index total_frames = 0, total_chars = 0, mel_cols = 0;
  for (const auto* ex : items) {
    total_frames += ex->mel.rows();
    total_chars += ex->char_embeddings.rows();
    if (ex->mel.size()) mel_cols = ex->mel.cols();
  }
  batch.mel.resize(total_frames, mel_cols);
  if (use_frontend && items.size()) {
    batch.char_embeddings.resize(total_chars, items.front()->char_embeddings.cols());
  }
  Index frame_row = 0, char_row = 0;
  for (const auto* ex : items) {
    const auto& s = ex->sample;
    batch.phoneme_ids.insert(batch.phoneme_ids.end(), s.phoneme_ids.begin(), s.phoneme_ids.end());
    batch.durations.insert(batch.durations.end(), s.durations.begin(), s.durations.end());
    phone_lengths.push_back(static_cast<Index>(s.size()));
    if (ex->mel.size()) {
      if (ex->mel.rows() != s.TotalFrames()) {
        Fail(ErrorCategory::kShape, "mel frames " + std::to_string(ex->mel.rows()) +
                                        " != sum of durations " +
                                        std::to_string(s.TotalFrames()));
      }
      batch.mel.middleRows(frame_row, ex->mel.rows()) = ex->mel.template cast<S>();
      frame_row += ex->mel.rows();
    }
    frame_lengths.push_back(ex->mel.rows());
    if (use_frontend) {
      if (ex->char_embeddings.size() == 0) {
        Fail(ErrorCategory::kData, "front-end model needs character embeddings");
      }
      for (Index idx : frontend::UpsampleIndex(s.phoneme_ids, s.char_spans)) {
        if (idx >= ex->char_embeddings.rows()) {
          Fail(ErrorCategory::kShape, "char_spans reference more characters than embedded");
        }
        batch.char_index.push_back(char_row + idx);
      }
      batch.char_embeddings.middleRows(char_row, ex->char_embeddings.rows()) =
          ex->char_embeddings.template cast<S>();
      char_row += ex->char_embeddings.rows();
    }
  }
  batch.phone_layout = nn::SeqLayout(phone_lengths);
  batch.frame_layout = nn::SeqLayout(frame_lengths);
  return batch;
}

template AcousticBatch<float> MakeBatch<float>(const std::vector<const TtsExample*>&, bool);
template AcousticBatch<double> MakeBatch<double>(const std::vector<const TtsExample*>&, bool);

template <typename S>
AcousticModel<S>::AcousticModel(const AcousticConfig& cfg, Rng& rng) : cfg_(cfg) {
  cfg_.Validate();
  embedding_ = nn::Embedding<S>(cfg.phoneme_vocab, cfg.hidden, rng);
  if (cfg.use_frontend) {
    combine_ = frontend::CombineLayer<S>(cfg.char_hidden, cfg.hidden, cfg.hidden,
                                         cfg.combine_kernel, rng);
  }
  encoder_ = nn::FFTStack<S>(cfg.encoder_blocks, cfg.BlockConfig(), rng);
  duration_ = DurationPredictor<S>(cfg.hidden, cfg.duration_filter, cfg.duration_kernel,
                                   cfg.dropout, rng);
  decoder_ = nn::FFTStack<S>(cfg.decoder_blocks, cfg.BlockConfig(), rng);
  mel_ = nn::Linear<S>(cfg.hidden, cfg.mel_dims, true, rng);
}

template <typename S>
nn::Tensor<S> AcousticModel<S>::Encode(const AcousticBatch<S>& batch,
                                       const nn::ForwardContext& ctx) const {
  if (static_cast<Index>(batch.phoneme_ids.size()) != batch.phone_layout.total()) {
    Fail(ErrorCategory::kShape, "phoneme ids do not match the batch layout");
  }
  for (int id : batch.phoneme_ids) {
    if (id < 0 || id >= cfg_.phoneme_vocab) {
      Fail(ErrorCategory::kData, "phoneme id " + std::to_string(id) + " outside the table");
    }
  }
  nn::Tensor<S> x = embedding_.Forward(batch.phoneme_ids);
  if (cfg_.use_frontend) {
    x = combine_.Forward(nn::Tensor<S>(batch.char_embeddings), x, batch.char_index,
                         batch.phone_layout);
  }
  return encoder_.Forward(x, batch.phone_layout, ctx);
}

template <typename S>
nn::Tensor<S> AcousticModel<S>::PredictDurations(const nn::Tensor<S>& hidden,
                                                 const nn::SeqLayout& layout,
                                                 const nn::ForwardContext& ctx) const {
  return duration_.Forward(hidden, layout, ctx);
}

template <typename S>
nn::Tensor<S> AcousticModel<S>::Decode(const nn::Tensor<S>& frames,
                                       const nn::SeqLayout& frame_layout,
                                       const nn::ForwardContext& ctx) const {
  return mel_.Forward(decoder_.Forward(frames, frame_layout, ctx));
}

template <typename S>
LossTensors<S> AcousticModel<S>::Losses(const AcousticBatch<S>& batch,
                                        const nn::ForwardContext& ctx) const {
  const nn::Tensor<S> hidden = Encode(batch, ctx);
  nn::Matrix<S> log_target(batch.phone_layout.total(), 1);
  for (Index i = 0; i < log_target.rows(); ++i) {
    if (batch.durations[i] < 1) Fail(ErrorCategory::kData, "gold durations must be >= 1");
    log_target(i, 0) = static_cast<S>(std::log(static_cast<double>(batch.durations[i])));
  }
  const std::vector<bool> phone_mask(log_target.rows(), true);
  auto dur = nn::MaskedMae(PredictDurations(hidden, batch.phone_layout, ctx), log_target,
                           phone_mask);
  nn::SeqLayout frame_layout;
  const nn::Tensor<S> frames =
      LengthRegulate(hidden, batch.durations, batch.phone_layout, &frame_layout);
  const nn::Tensor<S> mel = Decode(frames, frame_layout, ctx);
  const std::vector<bool> frame_mask(mel.rows(), true);
  auto mel_loss = nn::MaskedMae(mel, batch.mel, frame_mask);
  nn::Tensor<S> total = nn::WeightedSum<S>({mel_loss.value, dur.value}, {S(1), S(1)});
  return {mel_loss, dur, total};
}

template <typename S>
nn::ParamList<S> AcousticModel<S>::Params() const {
  nn::ParamList<S> out;
  embedding_.Collect("embedding", out);
  if (cfg_.use_frontend) combine_.Collect("combine", out);
  encoder_.Collect("encoder", out);
  duration_.Collect("duration", out);
  decoder_.Collect("decoder", out);
  mel_.Collect("mel", out);
  return out;
}

template class DurationPredictor<float>;
template class DurationPredictor<double>;
template class AcousticModel<float>;
template class AcousticModel<double>;

StepLosses TrainStep(const AcousticModel<float>& model, const AcousticBatch<float>& batch,
                     nn::Adam<float>& opt, Rng& dropout_rng) {
  const nn::ForwardContext ctx{true, &dropout_rng};
  LossTensors<float> losses = model.Losses(batch, ctx);
  StepLosses out{losses.mel.item(), losses.dur.item(), losses.total.item()};
  if (!std::isfinite(out.total)) {
    Fail(ErrorCategory::kNumeric, "TTS loss is not finite at step " +
                                      std::to_string(opt.step() + 1) + " (mel " +
                                      std::to_string(out.mel_mae) + ", duration " +
                                      std::to_string(out.dur_mae) + ")");
  }
  losses.total.Backward();
  opt.Step();
  return out;
}

Synthesis Synthesize(const AcousticModel<float>& model, const TtsExample& input) {
  if (input.sample.phoneme_ids.empty()) Fail(ErrorCategory::kInvalidArgument, "empty input");
  nn::NoGradGuard no_grad;
  TtsExample stripped;
  stripped.sample.phoneme_ids = input.sample.phoneme_ids;
  stripped.sample.char_spans = input.sample.char_spans;
  stripped.char_embeddings = input.char_embeddings;
  AcousticBatch<float> batch = MakeBatch<float>({&stripped}, model.config().use_frontend);
  const nn::ForwardContext ctx;
  const nn::Tensor<float> hidden = model.Encode(batch, ctx);
  Synthesis out;
  out.durations =
      DecodeDurations(model.PredictDurations(hidden, batch.phone_layout, ctx).value());
  nn::SeqLayout frame_layout;
  const auto frames = LengthRegulate(hidden, out.durations, batch.phone_layout, &frame_layout);
  out.mel = model.Decode(frames, frame_layout, ctx).value();
  return out;
}

double DurationMaeFrames(const AcousticModel<float>& model,
                         const std::vector<TtsExample>& data) {
  nn::NoGradGuard no_grad;
  double total = 0;
  long count = 0;
  constexpr size_t kChunk = 32;
  for (size_t begin = 0; begin < data.size(); begin += kChunk) {
    std::vector<TtsExample> part;
    for (size_t i = begin; i < std::min(data.size(), begin + kChunk); ++i) {
      TtsExample ex;
      ex.sample = data[i].sample;
      ex.char_embeddings = data[i].char_embeddings;
      part.push_back(std::move(ex));
    }
    std::vector<const TtsExample*> ptrs;
    for (const auto& ex : part) ptrs.push_back(&ex);
    const auto batch = MakeBatch<float>(ptrs, model.config().use_frontend);
    const nn::ForwardContext ctx;
    const auto pred = DecodeDurations(
        model.PredictDurations(model.Encode(batch, ctx), batch.phone_layout, ctx).value());
    for (size_t i = 0; i < pred.size(); ++i) {
      total += std::abs(pred[i] - batch.durations[i]);
      ++count;
    }
  }
  return count ? total / count : 0.0;
}

void SaveAcoustic(const std::filesystem::path& dir, const AcousticModel<float>& model,
                  std::map<std::string, std::string> extra_tags) {
  auto tags = model.config().ToTags();
  tags.insert(extra_tags.begin(), extra_tags.end());
  nn::ToCheckpoint(model.Params(), tags).Save(dir);
}

AcousticModel<float> LoadAcoustic(const std::filesystem::path& dir) {
  const nn::Checkpoint ckpt = nn::Checkpoint::Load(dir);
  if (ckpt.tags.count("model") == 0 || ckpt.tags.at("model") != "acoustic") {
    Fail(ErrorCategory::kData, dir.string() + " is not an acoustic model checkpoint");
  }
  Rng rng(0);
  AcousticModel<float> model(AcousticConfig::FromTags(ckpt.tags), rng);
  auto params = model.Params();
  nn::LoadParams(ckpt, params);
  return model;
}

}  // namespace prosody::acoustic
