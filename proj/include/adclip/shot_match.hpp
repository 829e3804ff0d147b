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

#include <vector>

#include <opencv2/core.hpp>

#include "adclip/frames.hpp"
#include "adclip/manifest.hpp"

namespace adclip {

struct MatchOptions {
  float ratio = 0.75f;         // Lowe ratio test on the two nearest matches
  double review_floor = 0.05;  // matches below go to the review report
  int max_keypoints = 400;     // SIFT feature cap per frame
};

// A best match whose similarity fell below the review floor; surfaced for
// manual review instead of being silently accepted or dropped.
struct ReviewEntry {
  int short_shot_id = 0;
  int long_shot_id = 0;
  double similarity = 0.0;
};

struct MatchResult {
  ShotMapping mapping;
  std::vector<ReviewEntry> review;
};

// Similarity of two frames: SIFT keypoint matches passing the ratio test,
// normalized by the larger keypoint count and clamped to [0,1]. A frame
// with no detectable keypoints scores 0 against everything.
double frame_similarity(const cv::Mat& a, const cv::Mat& b,
                        const MatchOptions& opts = {});

// Maps every short shot to the long shot with the highest mean similarity
// over the (first, middle, last) frame pairs; ties go to the earliest long
// shot. Middle frame is floor((start+end)/2).
MatchResult match_shots(const std::vector<Shot>& short_shots,
                        const FrameSource& short_frames,
                        const std::vector<Shot>& long_shots,
                        const FrameSource& long_frames,
                        const MatchOptions& opts = {});

}  // namespace adclip
