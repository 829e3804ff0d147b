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

#include "adclip/shot_match.hpp"

#include <algorithm>
#include <map>

#include <opencv2/features2d.hpp>
#include <opencv2/imgproc.hpp>

#include "adclip/errors.hpp"

namespace adclip {

namespace {

struct FrameFeatures {
  int keypoints = 0;
  cv::Mat descriptors;
};

FrameFeatures compute_features(const cv::Mat& frame,
                               const MatchOptions& opts) {
  cv::Mat gray;
  if (frame.channels() == 3)
    cv::cvtColor(frame, gray, cv::COLOR_BGR2GRAY);
  else
    gray = frame;
  auto sift = cv::SIFT::create(opts.max_keypoints);
  std::vector<cv::KeyPoint> kps;
  FrameFeatures f;
  sift->detectAndCompute(gray, cv::noArray(), kps, f.descriptors);
  f.keypoints = static_cast<int>(kps.size());
  return f;
}

double features_similarity(const FrameFeatures& a, const FrameFeatures& b,
                           const MatchOptions& opts) {
  if (a.keypoints == 0 || b.keypoints == 0) return 0.0;
  if (b.keypoints < 2) {
    // Too few candidates for a ratio test; fall back to the symmetric call
    // or give up when both sides are that sparse.
    if (a.keypoints < 2) return 0.0;
    return features_similarity(b, a, opts);
  }
  cv::BFMatcher matcher(cv::NORM_L2);
  std::vector<std::vector<cv::DMatch>> knn;
  matcher.knnMatch(a.descriptors, b.descriptors, knn, 2);
  int good = 0;
  for (const auto& m : knn) {
    if (m.size() == 2 && m[0].distance < opts.ratio * m[1].distance) ++good;
  }
  const double sim =
      static_cast<double>(good) / std::max(a.keypoints, b.keypoints);
  return std::clamp(sim, 0.0, 1.0);
}

// First, middle and last frame of a shot; middle is floor((start+end)/2).
std::array<int, 3> keyframe_indices(const Shot& s) {
  return {s.start_frame, (s.start_frame + s.end_frame) / 2, s.end_frame};
}

// Descriptor lookup keyed by frame index, computed once per distinct frame.
class FeatureBank {
 public:
  FeatureBank(const FrameSource& frames, const MatchOptions& opts)
      : frames_(frames), opts_(opts) {}

  const FrameFeatures& at(int frame_index) {
    auto it = cache_.find(frame_index);
    if (it == cache_.end()) {
      it = cache_
               .emplace(frame_index,
                        compute_features(frames_.frame(frame_index), opts_))
               .first;
    }
    return it->second;
  }

 private:
  const FrameSource& frames_;
  const MatchOptions& opts_;
  std::map<int, FrameFeatures> cache_;
};

}  // namespace

double frame_similarity(const cv::Mat& a, const cv::Mat& b,
                        const MatchOptions& opts) {
  return features_similarity(compute_features(a, opts),
                             compute_features(b, opts), opts);
}

MatchResult match_shots(const std::vector<Shot>& short_shots,
                        const FrameSource& short_frames,
                        const std::vector<Shot>& long_shots,
                        const FrameSource& long_frames,
                        const MatchOptions& opts) {
  if (short_shots.empty() || long_shots.empty())
    throw ValidationError("match_shots needs non-empty shot lists");

  FeatureBank short_bank(short_frames, opts);
  FeatureBank long_bank(long_frames, opts);

  MatchResult result;
  for (const Shot& ss : short_shots) {
    const auto short_keys = keyframe_indices(ss);
    double best_sim = -1.0;
    int best_long = -1;
    for (const Shot& ls : long_shots) {
      const auto long_keys = keyframe_indices(ls);
      double acc = 0.0;
      for (int k = 0; k < 3; ++k)
        acc += features_similarity(short_bank.at(short_keys[k]),
                                   long_bank.at(long_keys[k]), opts);
      const double sim = acc / 3.0;
      if (sim > best_sim) {  // strict: ties keep the earliest long shot
        best_sim = sim;
        best_long = ls.shot_id;
      }
    }
    result.mapping.entries.push_back(
        MappingEntry{ss.shot_id, best_long, best_sim});
    if (best_sim < opts.review_floor)
      result.review.push_back(ReviewEntry{ss.shot_id, best_long, best_sim});
  }
  return result;
}

}  // namespace adclip
