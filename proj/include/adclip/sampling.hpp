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

#include <string>
#include <utility>
#include <vector>

#include "adclip/manifest.hpp"

namespace adclip {

// A fixed-size window of frames around one sampled focal frame, confined to
// a single shot. The window always holds 2*hws+1 indices; where the shot is
// too short the edge frames repeat.
struct Clip {
  int clip_index = 0;
  int focal_frame = 0;
  std::vector<int> frame_indices;
  int shot_id = 0;
  double audio_start_s = 0.0;
  double audio_end_s = 0.0;
};

struct ClipSet {
  std::string video_id;
  double fps = 0.0;
  int frame_count = 0;
  int sample_stride = 0;
  int hws = 0;
  std::vector<Clip> clips;
};

// {0, stride, 2*stride, ...} below frame_count.
std::vector<int> sample_focal_frames(int frame_count, int stride);

// Window of hws frames each side of the focal frame, clamped to the
// containing shot; edge replication keeps the size at 2*hws+1.
std::vector<Clip> build_clips(const std::vector<Shot>& shots,
                              const std::vector<int>& focal_frames, int hws,
                              double fps);

// (min index / fps, (max index + 1) / fps); duplicates from edge
// replication do not widen the span.
std::pair<double, double> audio_span_for(const Clip& clip, double fps);

ClipSet make_clip_set(const VideoRef& video, int stride, int hws);

}  // namespace adclip
