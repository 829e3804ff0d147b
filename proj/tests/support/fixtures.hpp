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

#include <opencv2/core.hpp>

#include "adclip/manifest.hpp"

namespace adclip::testing {

// Heavily textured frame for one shot: seeded noise plus a few shapes, so
// SIFT finds plenty of keypoints and different shots look nothing alike.
// A small moving marker makes frames within a shot distinct.
cv::Mat shot_frame(std::uint64_t seed, int shot_id, int frame_in_shot,
                   int width, int height, int base_brightness);

struct SyntheticVideo {
  std::vector<cv::Mat> frames;
  std::vector<Shot> shots;
  std::vector<float> audio;
  int sample_rate = 16000;
  double fps = 24.0;
};

// One shot per entry of shot_lengths; brightness and tone amplitude are
// per-shot knobs (visual and audio signal for the labels).
SyntheticVideo make_video(std::uint64_t seed,
                          const std::vector<int>& shot_lengths,
                          const std::vector<int>& brightness_per_shot,
                          const std::vector<double>& amplitude_per_shot,
                          double fps, int width, int height);

// Short ad built by excerpting whole shots of the long ad, in order.
SyntheticVideo excerpt_video(const SyntheticVideo& long_video,
                             const std::vector<int>& shot_ids);

void write_video_dir(const std::filesystem::path& dir,
                     const SyntheticVideo& video);

// Boundary probabilities reproducing the video's shot tiling: 0.9 at every
// shot's last frame, 0 elsewhere.
void write_probs(const std::filesystem::path& path,
                 const SyntheticVideo& video);

struct FixturePair {
  AdPair pair;  // construction ground truth, mapping included
  std::filesystem::path long_dir, short_dir;
  std::filesystem::path long_probs, short_probs;
};

struct FixtureOptions {
  int n_shots = 6;
  double fps = 24.0;
  int width = 128;
  int height = 96;
  // Excerpted (positive) shots bright and loud, the rest dark and quiet;
  // gives the synthetic backends a clean label signal.
  bool separable = true;
};

FixturePair write_pair(const std::filesystem::path& root,
                       const std::string& pair_id, std::uint64_t seed,
                       const std::vector<int>& excerpt,
                       const FixtureOptions& opts = {});

std::filesystem::path write_sources_json(
    const std::filesystem::path& root, const std::vector<FixturePair>& pairs);

// Fresh directory under the system temp root.
std::filesystem::path make_temp_dir(const std::string& tag);

}  // namespace adclip::testing
