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

#include "adclip/config.hpp"

#include <cstdlib>
#include <set>

#include "adclip/errors.hpp"
#include "adclip/util.hpp"

namespace adclip {

FusionConfig RunConfig::fusion_config() const {
  FusionConfig f;
  f.mode = fusion_mode_from_string(fusion_mode);
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ValidationError("alpha must lie in [0,1]");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw ValidationError("beta must lie in [0,1]");
  f.alpha = alpha;
  f.beta = beta;
  return f;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.loss = loss_kind_from_string(loss);
  t.epochs = epochs;
  t.batch_size = batch_size;
  t.learning_rate = learning_rate;
  t.seed = seed;
  t.train_backbone = train_backbone;
  return t;
}

namespace {

nlohmann::json semantic_json(const RunConfig& c) {
  nlohmann::json j{
      {"visual_backend", c.visual_backend},
      {"audio_backend", c.audio_backend},
      {"attention_backbone", c.attention_backbone},
      {"stride", c.stride},
      {"hws", c.hws},
      {"fusion_mode", c.fusion_mode},
      {"alpha", c.alpha},
      {"beta", c.beta},
      {"loss", c.loss},
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"learning_rate", c.learning_rate},
      {"normalize_features", c.normalize_features},
      {"budget_seconds", c.budget_seconds},
      {"similarity_floor", c.similarity_floor},
      {"boundary_threshold", c.boundary_threshold},
      {"target_fps", c.target_fps},
      {"seed", c.seed}};
  if (c.train_backbone) j["train_backbone"] = *c.train_backbone;
  return j;
}

}  // namespace

std::string RunConfig::fingerprint() const {
  // nlohmann objects serialize with sorted keys, so dump() is canonical.
  return to_hex(fnv1a64(semantic_json(*this).dump()));
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = semantic_json(*this);
  j["manifest"] = manifest;
  j["cache_dir"] = cache_dir;
  j["output_dir"] = output_dir;
  j["jobs"] = jobs;
  return j;
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known{
      "manifest",        "cache_dir",          "output_dir",
      "jobs",            "visual_backend",     "audio_backend",
      "attention_backbone", "stride",          "hws",
      "fusion_mode",     "alpha",              "beta",
      "loss",            "epochs",             "batch_size",
      "learning_rate",   "train_backbone",     "normalize_features",
      "budget_seconds",  "similarity_floor",   "boundary_threshold",
      "target_fps",      "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key))
      throw ValidationError("unknown config key: " + key);
    try {
      if (key == "manifest") cfg.manifest = value.get<std::string>();
      else if (key == "cache_dir") cfg.cache_dir = value.get<std::string>();
      else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
      else if (key == "jobs") cfg.jobs = value.get<int>();
      else if (key == "visual_backend")
        cfg.visual_backend = value.get<std::string>();
      else if (key == "audio_backend")
        cfg.audio_backend = value.get<std::string>();
      else if (key == "attention_backbone")
        cfg.attention_backbone = value.get<std::string>();
      else if (key == "stride") cfg.stride = value.get<int>();
      else if (key == "hws") cfg.hws = value.get<int>();
      else if (key == "fusion_mode")
        cfg.fusion_mode = value.get<std::string>();
      else if (key == "alpha") cfg.alpha = value.get<double>();
      else if (key == "beta") cfg.beta = value.get<double>();
      else if (key == "loss") cfg.loss = value.get<std::string>();
      else if (key == "epochs") cfg.epochs = value.get<int>();
      else if (key == "batch_size") cfg.batch_size = value.get<int>();
      else if (key == "learning_rate")
        cfg.learning_rate = value.get<double>();
      else if (key == "train_backbone")
        cfg.train_backbone = value.get<bool>();
      else if (key == "normalize_features")
        cfg.normalize_features = value.get<bool>();
      else if (key == "budget_seconds")
        cfg.budget_seconds = value.get<double>();
      else if (key == "similarity_floor")
        cfg.similarity_floor = value.get<double>();
      else if (key == "boundary_threshold")
        cfg.boundary_threshold = value.get<double>();
      else if (key == "target_fps") cfg.target_fps = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("bad config value for '" + key + "': " +
                            e.what());
    }
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  RunConfig cfg;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config parse failure in " + path.string() + ": " +
                          e.what());
  }
  apply_config_json(cfg, j);
  return cfg;
}

void apply_environment(RunConfig& cfg) {
  if (const char* dir = std::getenv("ADCLIP_CACHE_DIR"))
    cfg.cache_dir = dir;
}

}  // namespace adclip
