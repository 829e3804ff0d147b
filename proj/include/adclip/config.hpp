// Copyright 2026 The adclip authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "adclip/model.hpp"

namespace adclip {

// One declarative configuration for every pipeline command. Defaults are
// the reference training setup: stride 12, half-window 3, Adam at 1e-3 for
// 50 epochs with batch size 1, BCE loss, fusion weights 0.5, a 15-second
// budget. The default backends expect precomputed 1024-d features and fail
// loudly without them; the synthetic families exist for weight-free runs.
struct RunConfig {
  // filesystem (not part of the fingerprint)
  std::string manifest;
  std::string cache_dir = ".adclip-cache";
  std::string output_dir = "out";
  int jobs = 1;

  // semantic fields (fingerprinted)
  std::string visual_backend = "swin3d-pooled:1024";
  std::string audio_backend = "w2vbert-pooled:1024";
  std::string attention_backbone = "conv-attn";
  int stride = 12;
  int hws = 3;
  std::string fusion_mode = "early";
  double alpha = 0.5;
  double beta = 0.5;
  std::string loss = "bce";
  int epochs = 50;
  int batch_size = 1;
  double learning_rate = 0.001;
  std::optional<bool> train_backbone;
  bool normalize_features = false;  // ablation-only z-score switch
  double budget_seconds = 15.0;
  double similarity_floor = 0.05;
  double boundary_threshold = 0.5;
  double target_fps = 23.98;
  std::uint64_t seed = 42;

  FusionConfig fusion_config() const;
  TrainConfig train_config() const;

  // Stable hex hash over the semantic fields above. Embedded in artifacts;
  // prediction refuses a checkpoint carrying a different fingerprint.
  std::string fingerprint() const;

  nlohmann::json to_json() const;  // full, including paths
};

// Reads a JSON config file and overlays it on the defaults. Unknown keys
// are rejected to catch typos.
RunConfig load_run_config(const std::filesystem::path& path);
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);

// ADCLIP_CACHE_DIR overrides cache_dir when set.
void apply_environment(RunConfig& cfg);

}  // namespace adclip
