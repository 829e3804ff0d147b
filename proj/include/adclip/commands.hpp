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

#include <filesystem>
#include <string>
#include <vector>

#include "adclip/config.hpp"
#include "adclip/feature_cache.hpp"
#include "adclip/manifest.hpp"
#include "adclip/model.hpp"

namespace adclip {

struct BuildDatasetArgs {
  std::string sources;
  std::string out_manifest;
  std::vector<double> thresholds{0.5};
  double similarity_floor = 0.05;
  bool standardize_fps = false;
  double target_fps = 23.98;
  std::string review_report;  // default: <out>.review.json
  std::string folds_out;      // empty: no folds file
  int k_folds = 5;
  std::uint64_t seed = 42;
  int jobs = 1;
};

// Shot segmentation from boundary probabilities, SIFT shot matching, and
// fold construction. Sweeping thresholds writes one manifest per threshold,
// suffixed ".t<threshold>". Nothing is written until every pair validated.
void cmd_build_dataset(const BuildDatasetArgs& args);

// Embeds and caches features for every long video in the manifest.
void cmd_extract(const RunConfig& cfg);

void cmd_train(const RunConfig& cfg,
               const std::filesystem::path& checkpoint_out,
               const std::filesystem::path& report_out);

void cmd_predict(const RunConfig& cfg,
                 const std::filesystem::path& checkpoint,
                 const std::filesystem::path& scores_dir);

void cmd_clip(const RunConfig& cfg, const std::filesystem::path& scores_dir,
              const std::filesystem::path& out_dir, bool do_assemble,
              const std::string& ffmpeg_binary = "ffmpeg");

void cmd_evaluate(const RunConfig& cfg,
                  const std::filesystem::path& scores_dir,
                  const std::filesystem::path& report_out, bool positional);

void cmd_evaluate_cv(const RunConfig& cfg,
                     const std::filesystem::path& report_out,
                     bool positional);

// Feature/label assembly for one pair's long video, through the cache.
// Frames and audio are only decoded on a cache miss.
TrainSample assemble_sample(const AdPair& pair, const RunConfig& cfg,
                            FeatureCache& cache, bool need_visual,
                            bool need_audio);

}  // namespace adclip
