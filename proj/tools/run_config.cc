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

#include "run_config.h"

#include <fstream>
#include <functional>
#include <sstream>
#include <variant>
#include <vector>

#include "yaml-cpp/yaml.h"

#include "prosody/common/error.h"

namespace prosody::tools {

namespace {

using pipeline::RunConfig;

using FieldRef = std::variant<int*, double*, uint64_t*>;

struct Field {
  std::string section;
  std::string key;
  std::function<FieldRef(RunConfig&)> ref;
};

#define PROSODY_FIELD(section, key, member) \
  { section, key, [](RunConfig& c) -> FieldRef { return &c.member; } }

const std::vector<Field>& Schema() {
  // clang-format off
  static const std::vector<Field> fields{
      {"", "seed", [](RunConfig& c) -> FieldRef { return &c.seed; }},
      PROSODY_FIELD("data", "frontend_train", data.frontend_train),
      PROSODY_FIELD("data", "frontend_test", data.frontend_test),
      PROSODY_FIELD("data", "tts_train", data.tts_train),
      PROSODY_FIELD("data", "tts_test", data.tts_test),
      PROSODY_FIELD("data", "pretrain_train", data.pretrain_train),
      PROSODY_FIELD("data", "pretrain_heldout", data.pretrain_heldout),
      PROSODY_FIELD("encoder", "hidden", encoder.hidden),
      PROSODY_FIELD("encoder", "blocks", encoder.blocks),
      PROSODY_FIELD("encoder", "heads", encoder.heads),
      PROSODY_FIELD("encoder", "conv_filter", encoder.conv_filter),
      PROSODY_FIELD("encoder", "conv_kernel", encoder.conv_kernel),
      PROSODY_FIELD("encoder", "dropout", encoder.dropout),
      PROSODY_FIELD("encoder", "mlm_steps", encoder.mlm_steps),
      PROSODY_FIELD("encoder", "finetune_steps", encoder.finetune_steps),
      PROSODY_FIELD("encoder", "batch_size", encoder.batch_size),
      PROSODY_FIELD("encoder", "mask_rate", encoder.mask_rate),
      PROSODY_FIELD("encoder", "warmup_steps", encoder.warmup_steps),
      PROSODY_FIELD("encoder", "lr_scale", encoder.lr_scale),
      PROSODY_FIELD("acoustic", "hidden", acoustic.hidden),
      PROSODY_FIELD("acoustic", "encoder_blocks", acoustic.encoder_blocks),
      PROSODY_FIELD("acoustic", "decoder_blocks", acoustic.decoder_blocks),
      PROSODY_FIELD("acoustic", "heads", acoustic.heads),
      PROSODY_FIELD("acoustic", "conv_filter", acoustic.conv_filter),
      PROSODY_FIELD("acoustic", "conv_kernel", acoustic.conv_kernel),
      PROSODY_FIELD("acoustic", "duration_filter", acoustic.duration_filter),
      PROSODY_FIELD("acoustic", "duration_kernel", acoustic.duration_kernel),
      PROSODY_FIELD("acoustic", "mel_dims", acoustic.mel_dims),
      PROSODY_FIELD("acoustic", "dropout", acoustic.dropout),
      PROSODY_FIELD("pretraining", "steps", pretraining.steps),
      PROSODY_FIELD("pretraining", "batch_size", pretraining.batch_size),
      PROSODY_FIELD("pretraining", "mask_rate", pretraining.mask_rate),
      PROSODY_FIELD("pretraining", "noise_dur_sigma", pretraining.noise.dur_sigma),
      PROSODY_FIELD("pretraining", "noise_sub_prob", pretraining.noise.sub_prob),
      PROSODY_FIELD("pretraining", "noise_sp_drop_prob", pretraining.noise.sp_drop_prob),
      PROSODY_FIELD("training", "steps", training.steps),
      PROSODY_FIELD("training", "batch_size", training.batch_size),
      PROSODY_FIELD("training", "warmup_steps", training.warmup_steps),
      PROSODY_FIELD("training", "lr_scale", training.lr_scale),
      PROSODY_FIELD("training", "log_every", training.log_every),
      PROSODY_FIELD("training", "eval_every", training.eval_every),
  };
  // clang-format on
  return fields;
}
#undef PROSODY_FIELD

std::string FieldName(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

const Field* Find(const std::string& section, const std::string& key) {
  for (const auto& f : Schema()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

bool IsSection(const std::string& name) {
  for (const auto& f : Schema()) {
    if (!f.section.empty() && f.section == name) return true;
  }
  return false;
}

void Assign(const Field& f, const YAML::Node& value, RunConfig& cfg) {
  const std::string name = FieldName(f.section, f.key);
  if (!value.IsScalar()) Fail(ErrorCategory::kConfig, name + ": expected a scalar");
  const FieldRef ref = f.ref(cfg);
  try {
    if (auto* i = std::get_if<int*>(&ref)) {
      **i = value.as<int>();
    } else if (auto* d = std::get_if<double*>(&ref)) {
      **d = value.as<double>();
    } else if (auto* u = std::get_if<uint64_t*>(&ref)) {
      if (!value.Scalar().empty() && value.Scalar()[0] == '-') throw YAML::BadConversion({});
      **u = value.as<uint64_t>();
    }
  } catch (const YAML::BadConversion&) {
    const char* type = std::holds_alternative<double*>(ref) ? "a number" : "an integer";
    Fail(ErrorCategory::kConfig,
         name + ": expected " + type + ", got '" + value.Scalar() + "'");
  }
}

}  // namespace

RunConfig ParseRunConfig(const std::string& yaml_text, const std::string& profile_override) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    Fail(ErrorCategory::kConfig, std::string("yaml: ") + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) Fail(ErrorCategory::kConfig, "config root must be a mapping");
  std::string profile = "desk";
  if (root["profile"]) profile = root["profile"].as<std::string>();
  if (!profile_override.empty()) profile = profile_override;
  RunConfig cfg = RunConfig::Profile(profile);
  for (const auto& entry : root) {
    const std::string key = entry.first.as<std::string>();
    if (key == "profile") continue;
    if (const Field* f = Find("", key)) {
      Assign(*f, entry.second, cfg);
      continue;
    }
    if (!IsSection(key)) Fail(ErrorCategory::kConfig, key + ": unknown field");
    if (!entry.second.IsMap()) Fail(ErrorCategory::kConfig, key + ": expected a mapping");
    for (const auto& sub : entry.second) {
      const std::string name = sub.first.as<std::string>();
      const Field* f = Find(key, name);
      if (f == nullptr) Fail(ErrorCategory::kConfig, FieldName(key, name) + ": unknown field");
      Assign(*f, sub.second, cfg);
    }
  }
  cfg.Validate();
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path, const std::string& profile_override) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kMissingArtifact, "config file not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str(), profile_override);
}

std::string EmitRunConfig(const RunConfig& cfg) {
  RunConfig copy = cfg;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap << YAML::Key << "profile" << YAML::Value << cfg.profile;
  std::string open;
  auto emit_value = [&](const FieldRef& ref) {
    std::visit([&](auto* p) { out << *p; }, ref);
  };
  for (const auto& f : Schema()) {
    if (f.section != open) {
      if (!open.empty()) out << YAML::EndMap;
      open = f.section;
      out << YAML::Key << open << YAML::Value << YAML::BeginMap;
    }
    out << YAML::Key << f.key << YAML::Value;
    emit_value(f.ref(copy));
  }
  if (!open.empty()) out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace prosody::tools
