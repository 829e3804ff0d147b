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

#include <doctest.h>

#include "adclip/frames.hpp"
#include "adclip/shot_match.hpp"
#include "support/fixtures.hpp"

using namespace adclip;

namespace {

MemoryFrameSource video_source(const testing::SyntheticVideo& v) {
  return MemoryFrameSource(v.frames, v.fps);
}

}  // namespace

TEST_CASE("frame similarity: identical textured frames score high") {
  const cv::Mat a = testing::shot_frame(1, 0, 0, 128, 96, 120);
  const cv::Mat b = testing::shot_frame(1, 1, 0, 128, 96, 120);
  CHECK(frame_similarity(a, a) > 0.5);
  CHECK(frame_similarity(a, b) < frame_similarity(a, a));
}

TEST_CASE("frame similarity: blank frames have no keypoints, score zero") {
  const cv::Mat blank(96, 128, CV_8UC3, cv::Scalar(128, 128, 128));
  const cv::Mat textured = testing::shot_frame(2, 0, 0, 128, 96, 120);
  CHECK(frame_similarity(blank, textured) == 0.0);
  CHECK(frame_similarity(blank, blank) == 0.0);
}

TEST_CASE("match: single short shot vs single long shot") {
  const auto long_v = testing::make_video(10, {24}, {130}, {0.4}, 24, 128, 96);
  const auto short_v = testing::excerpt_video(long_v, {0});
  auto short_frames = video_source(short_v);
  auto long_frames = video_source(long_v);
  const auto result = match_shots(short_v.shots, short_frames, long_v.shots,
                                  long_frames);
  REQUIRE(result.mapping.entries.size() == 1);
  CHECK(result.mapping.entries[0].short_shot_id == 0);
  CHECK(result.mapping.entries[0].long_shot_id == 0);
  CHECK(result.review.empty());
}

TEST_CASE("match: excerpted shots map back to their construction") {
  const std::vector<int> excerpt{1, 3, 4};
  const auto long_v = testing::make_video(
      33, {20, 24, 20, 28, 24, 20}, {120, 130, 110, 140, 125, 115},
      std::vector<double>(6, 0.3), 24, 128, 96);
  const auto short_v = testing::excerpt_video(long_v, excerpt);
  auto short_frames = video_source(short_v);
  auto long_frames = video_source(long_v);
  const auto result = match_shots(short_v.shots, short_frames, long_v.shots,
                                  long_frames);
  REQUIRE(result.mapping.entries.size() == excerpt.size());
  for (std::size_t i = 0; i < excerpt.size(); ++i) {
    CHECK(result.mapping.entries[i].short_shot_id == static_cast<int>(i));
    CHECK(result.mapping.entries[i].long_shot_id == excerpt[i]);
    CHECK(result.mapping.entries[i].similarity > 0.05);
  }
}

TEST_CASE("match: a foreign shot still maps but is flagged for review") {
  const auto long_v = testing::make_video(44, {24, 24, 24}, {120, 125, 130},
                                          std::vector<double>(3, 0.3), 24,
                                          128, 96);
  // short ad = one excerpted shot plus one shot from entirely different
  // footage
  auto short_v = testing::excerpt_video(long_v, {1});
  const auto foreign =
      testing::make_video(4242, {24}, {135}, {0.3}, 24, 128, 96);
  for (const auto& f : foreign.frames) short_v.frames.push_back(f);
  short_v.shots.push_back(Shot{1, 24, 47});

  auto short_frames = video_source(short_v);
  auto long_frames = video_source(long_v);
  MatchOptions opts;
  // textured-but-unrelated footage sits well under the true match; a floor
  // between the two flags it without touching present shots
  opts.review_floor = 0.5;
  const auto result = match_shots(short_v.shots, short_frames, long_v.shots,
                                  long_frames, opts);
  REQUIRE(result.mapping.entries.size() == 2);
  CHECK(result.mapping.entries[0].long_shot_id == 1);
  CHECK(result.mapping.entries[0].similarity > 0.5);
  // the foreign shot got some argmax anyway, with low similarity
  CHECK(result.mapping.entries[1].similarity < 0.5);
  REQUIRE(result.review.size() == 1);
  CHECK(result.review[0].short_shot_id == 1);
  CHECK(result.review[0].similarity == result.mapping.entries[1].similarity);
}

TEST_CASE("match: a textureless foreign shot scores zero at the default "
          "floor") {
  const auto long_v = testing::make_video(77, {24, 24}, {120, 130},
                                          std::vector<double>(2, 0.3), 24,
                                          128, 96);
  auto short_v = testing::excerpt_video(long_v, {0});
  // 24 flat frames: no detectable keypoints, similarity defined as 0
  for (int f = 0; f < 24; ++f)
    short_v.frames.emplace_back(96, 128, CV_8UC3, cv::Scalar(90, 90, 90));
  short_v.shots.push_back(Shot{1, 24, 47});

  auto short_frames = video_source(short_v);
  auto long_frames = video_source(long_v);
  const auto result =
      match_shots(short_v.shots, short_frames, long_v.shots, long_frames);
  REQUIRE(result.mapping.entries.size() == 2);
  CHECK(result.mapping.entries[1].similarity == 0.0);
  // zero similarity everywhere: argmax falls back to the earliest long shot
  CHECK(result.mapping.entries[1].long_shot_id == 0);
  REQUIRE(result.review.size() == 1);
  CHECK(result.review[0].short_shot_id == 1);
}
