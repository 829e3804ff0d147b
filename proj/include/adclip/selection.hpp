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

#include <json.hpp>

#include "adclip/manifest.hpp"

namespace adclip {

struct ShotScore {
  int shot_id = 0;
  double mean_score = 0.0;
  double duration_seconds = 0.0;
  int rank = 0;  // 1-based, descending mean_score, ties to smaller shot_id
};

// Per-shot mean of the frame-expanded scores, plus durations.
std::vector<ShotScore> aggregate_shot_scores(
    const std::vector<double>& frame_scores, const std::vector<Shot>& shots,
    double fps);

// Fills ranks 1..m: descending mean_score, ties broken by smaller shot_id.
void rank_shot_scores(std::vector<ShotScore>& scores);

struct SelectionResult {
  std::vector<int> selected_shot_ids;  // ascending
  std::vector<int> playback_order;     // temporal order
  double total_duration_seconds = 0.0;
  double budget_seconds = 0.0;
};

// Walks ranks 1,2,... adding shots until the cumulative duration reaches or
// exceeds the budget. Overshoot stands; shots are never trimmed. A video
// shorter than the budget selects everything.
SelectionResult select_shots(std::vector<ShotScore> scores,
                             double budget_seconds);

// {pair_id, budget, segments: [{shot_id,start_frame,end_frame,start_s,
// end_s}], total_s}; segments in temporal order, frame-accurate.
nlohmann::json emit_cut_list(const SelectionResult& sel, const AdPair& pair);

// Splices the selected segments with an external media toolchain (ffmpeg as
// a subprocess; never reimplemented in-process). Throws DependencyError
// with a clear diagnostic when the toolchain is missing; cut lists remain
// the canonical artifact either way.
void assemble(const nlohmann::json& cut_list, const VideoRef& source,
              const std::filesystem::path& output,
              const std::string& ffmpeg_binary = "ffmpeg");

}  // namespace adclip
