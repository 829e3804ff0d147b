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
#include <optional>
#include <string>
#include <vector>

namespace adclip {

// One shot: a maximal run of frames between two cuts. Frame indices are
// 0-based and end_frame is inclusive.
struct Shot {
  int shot_id = 0;
  int start_frame = 0;
  int end_frame = 0;

  int frame_count() const { return end_frame - start_frame + 1; }
  double duration_seconds(double fps) const { return frame_count() / fps; }
};

struct VideoRef {
  std::string video_id;
  std::string file;  // video file or a directory of numbered frames
  double fps = 0.0;
  int frame_count = 0;
  std::vector<Shot> shots;
};

struct MappingEntry {
  int short_shot_id = 0;
  int long_shot_id = 0;
  double similarity = 0.0;
};

// Short-to-long shot correspondence. Every short shot appears exactly once;
// several short shots may point at the same long shot.
struct ShotMapping {
  std::vector<MappingEntry> entries;

  // Distinct mapped long shot ids, ascending.
  std::vector<int> mapped_long_shots() const;
};

struct AdPair {
  std::string pair_id;
  VideoRef long_video;
  VideoRef short_video;
  std::optional<ShotMapping> mapping;
};

// Shot tiling: consecutive, non-overlapping, covering 0..frame_count-1.
// Throws ValidationError naming the first offending frame.
void validate_shots(const VideoRef& video);
void validate_pair(const AdPair& pair);

struct ManifestLoadOptions {
  bool check_files = true;  // referenced video paths must exist
};

std::vector<AdPair> load_manifest(const std::filesystem::path& path,
                                  const ManifestLoadOptions& opts = {});

// Atomic write; schema identical to what load_manifest accepts.
void save_manifest(const std::vector<AdPair>& pairs,
                   const std::filesystem::path& path);

std::string manifest_to_json_text(const std::vector<AdPair>& pairs);

}  // namespace adclip
