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

#include "adclip/sampling.hpp"

#include <algorithm>

#include "adclip/errors.hpp"

namespace adclip {

std::vector<int> sample_focal_frames(int frame_count, int stride) {
  if (frame_count < 1) throw ValidationError("frame_count must be >= 1");
  if (stride < 1) throw ValidationError("sample stride must be >= 1");
  std::vector<int> focal;
  for (int f = 0; f < frame_count; f += stride) focal.push_back(f);
  return focal;
}

std::vector<Clip> build_clips(const std::vector<Shot>& shots,
                              const std::vector<int>& focal_frames, int hws,
                              double fps) {
  if (hws < 1) throw ValidationError("half-window size must be >= 1");
  if (fps <= 0.0) throw ValidationError("fps must be positive");
  std::vector<Clip> clips;
  clips.reserve(focal_frames.size());
  std::size_t shot_cursor = 0;
  for (std::size_t i = 0; i < focal_frames.size(); ++i) {
    const int focal = focal_frames[i];
    // Focal frames arrive in increasing order, so the shot lookup only ever
    // moves forward.
    while (shot_cursor < shots.size() &&
           shots[shot_cursor].end_frame < focal)
      ++shot_cursor;
    if (shot_cursor >= shots.size() ||
        focal < shots[shot_cursor].start_frame)
      throw ValidationError("focal frame " + std::to_string(focal) +
                            " lies outside every shot (tiling violation)");
    const Shot& shot = shots[shot_cursor];

    Clip clip;
    clip.clip_index = static_cast<int>(i);
    clip.focal_frame = focal;
    clip.shot_id = shot.shot_id;
    clip.frame_indices.reserve(static_cast<std::size_t>(2 * hws + 1));
    for (int f = focal - hws; f <= focal + hws; ++f)
      clip.frame_indices.push_back(
          std::clamp(f, shot.start_frame, shot.end_frame));
    const auto span = audio_span_for(clip, fps);
    clip.audio_start_s = span.first;
    clip.audio_end_s = span.second;
    clips.push_back(std::move(clip));
  }
  return clips;
}

std::pair<double, double> audio_span_for(const Clip& clip, double fps) {
  if (fps <= 0.0) throw ValidationError("fps must be positive");
  const auto [min_it, max_it] =
      std::minmax_element(clip.frame_indices.begin(),
                          clip.frame_indices.end());
  return {*min_it / fps, (*max_it + 1) / fps};
}

ClipSet make_clip_set(const VideoRef& video, int stride, int hws) {
  ClipSet set;
  set.video_id = video.video_id;
  set.fps = video.fps;
  set.frame_count = video.frame_count;
  set.sample_stride = stride;
  set.hws = hws;
  set.clips = build_clips(video.shots,
                          sample_focal_frames(video.frame_count, stride), hws,
                          video.fps);
  return set;
}

}  // namespace adclip
