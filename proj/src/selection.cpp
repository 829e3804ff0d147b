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

#include "adclip/selection.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "adclip/audio.hpp"
#include "adclip/errors.hpp"
#include "adclip/frames.hpp"
#include "adclip/util.hpp"

namespace adclip {

std::vector<ShotScore> aggregate_shot_scores(
    const std::vector<double>& frame_scores, const std::vector<Shot>& shots,
    double fps) {
  if (fps <= 0.0) throw ValidationError("fps must be positive");
  if (shots.empty()) throw ValidationError("no shots to aggregate");
  const int frame_count = shots.back().end_frame + 1;
  if (static_cast<int>(frame_scores.size()) != frame_count)
    throw ValidationError("frame score count " +
                          std::to_string(frame_scores.size()) +
                          " does not match frame count " +
                          std::to_string(frame_count));
  std::vector<ShotScore> scores;
  scores.reserve(shots.size());
  for (const Shot& s : shots) {
    double acc = 0.0;
    for (int f = s.start_frame; f <= s.end_frame; ++f)
      acc += frame_scores[static_cast<std::size_t>(f)];
    scores.push_back(ShotScore{s.shot_id, acc / s.frame_count(),
                               s.duration_seconds(fps), 0});
  }
  rank_shot_scores(scores);
  return scores;
}

void rank_shot_scores(std::vector<ShotScore>& scores) {
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a].mean_score != scores[b].mean_score)
      return scores[a].mean_score > scores[b].mean_score;
    return scores[a].shot_id < scores[b].shot_id;
  });
  for (std::size_t r = 0; r < order.size(); ++r)
    scores[order[r]].rank = static_cast<int>(r) + 1;
}

SelectionResult select_shots(std::vector<ShotScore> scores,
                             double budget_seconds) {
  if (scores.empty()) throw ValidationError("select_shots needs shot scores");
  if (budget_seconds <= 0.0)
    throw ValidationError("budget must be positive");
  rank_shot_scores(scores);
  std::sort(scores.begin(), scores.end(),
            [](const ShotScore& a, const ShotScore& b) {
              return a.rank < b.rank;
            });
  SelectionResult result;
  result.budget_seconds = budget_seconds;
  for (const ShotScore& s : scores) {
    result.selected_shot_ids.push_back(s.shot_id);
    result.total_duration_seconds += s.duration_seconds;
    if (result.total_duration_seconds >= budget_seconds) break;
  }
  result.playback_order = result.selected_shot_ids;
  // Shot ids follow temporal order within a tiled video, so sorting by id
  // is playback order.
  std::sort(result.playback_order.begin(), result.playback_order.end());
  result.selected_shot_ids = result.playback_order;
  return result;
}

nlohmann::json emit_cut_list(const SelectionResult& sel, const AdPair& pair) {
  const auto& video = pair.long_video;
  nlohmann::json segments = nlohmann::json::array();
  double total = 0.0;
  for (int shot_id : sel.playback_order) {
    if (shot_id < 0 || shot_id >= static_cast<int>(video.shots.size()))
      throw ValidationError("selected shot " + std::to_string(shot_id) +
                            " is not a shot of pair '" + pair.pair_id + "'");
    const Shot& s = video.shots[static_cast<std::size_t>(shot_id)];
    segments.push_back({{"shot_id", s.shot_id},
                        {"start_frame", s.start_frame},
                        {"end_frame", s.end_frame},
                        {"start_s", s.start_frame / video.fps},
                        {"end_s", (s.end_frame + 1) / video.fps}});
    total += s.duration_seconds(video.fps);
  }
  return nlohmann::json{{"pair_id", pair.pair_id},
                        {"budget", sel.budget_seconds},
                        {"segments", segments},
                        {"total_s", total}};
}

namespace {

bool toolchain_available(const std::string& binary) {
  const std::string cmd = binary + " -version >/dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

void run_or_throw(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc != 0)
    throw DependencyError("media toolchain command failed (exit " +
                          std::to_string(rc) + "): " + cmd);
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  out += "'";
  return out;
}

}  // namespace

void assemble(const nlohmann::json& cut_list, const VideoRef& source,
              const std::filesystem::path& output,
              const std::string& ffmpeg_binary) {
  if (!toolchain_available(ffmpeg_binary))
    throw DependencyError(
        "media toolchain '" + ffmpeg_binary +
        "' is not available; the cut list remains the canonical output. "
        "Install ffmpeg or pass --ffmpeg to point at a binary.");

  const auto& segments = cut_list.at("segments");
  if (segments.empty()) throw ValidationError("cut list has no segments");
  std::filesystem::create_directories(output.parent_path());

  const bool dir_source = std::filesystem::is_directory(source.file);
  std::filesystem::path audio_sidecar;
  if (dir_source) {
    audio_sidecar = std::filesystem::path(source.file) / "audio.wav";
  } else {
    audio_sidecar = source.file;
    audio_sidecar.replace_extension(".wav");
  }
  const bool has_sidecar = std::filesystem::exists(audio_sidecar);

  std::filesystem::path spliced_wav;
  if (has_sidecar) {
    // Splice the soundtrack segment-by-segment so audio travels with its
    // video segment.
    WavFileSource wav(audio_sidecar);
    std::vector<float> spliced;
    for (const auto& seg : segments) {
      const auto part = wav.span(seg.at("start_s").get<double>(),
                                 seg.at("end_s").get<double>());
      spliced.insert(spliced.end(), part.begin(), part.end());
    }
    spliced_wav = output;
    spliced_wav += ".audio.wav";
    write_wav(spliced_wav, spliced, wav.sample_rate());
  }

  std::ostringstream cmd;
  std::filesystem::path concat_file;
  if (dir_source) {
    // ffconcat listing of the selected frames, one image per video frame.
    std::vector<std::filesystem::path> images;
    for (const auto& entry :
         std::filesystem::directory_iterator(source.file)) {
      const auto ext = entry.path().extension().string();
      if (entry.is_regular_file() &&
          (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp"))
        images.push_back(entry.path());
    }
    std::sort(images.begin(), images.end());
    std::ostringstream listing;
    listing << "ffconcat version 1.0\n";
    for (const auto& seg : segments) {
      const int begin = seg.at("start_frame").get<int>();
      const int end = seg.at("end_frame").get<int>();
      for (int f = begin; f <= end; ++f) {
        if (f < 0 || f >= static_cast<int>(images.size()))
          throw ValidationError("cut list frame " + std::to_string(f) +
                                " outside frame directory");
        listing << "file "
                << shell_quote(std::filesystem::absolute(
                                   images[static_cast<std::size_t>(f)])
                                   .string())
                << "\nduration " << 1.0 / source.fps << "\n";
      }
    }
    concat_file = output;
    concat_file += ".ffconcat";
    atomic_write_file(concat_file, listing.str());
    cmd << ffmpeg_binary << " -y -loglevel error -f concat -safe 0 -i "
        << shell_quote(concat_file.string());
    if (has_sidecar) cmd << " -i " << shell_quote(spliced_wav.string());
    cmd << " -fps_mode cfr -r " << source.fps;
    if (has_sidecar) cmd << " -shortest";
    cmd << " " << shell_quote(output.string());
  } else {
    // Container input: trim/concat filter graph, frame-accurate via
    // timestamps derived from frame indices.
    std::ostringstream filter;
    std::ostringstream concat_inputs;
    int idx = 0;
    for (const auto& seg : segments) {
      const double start_s = seg.at("start_s").get<double>();
      const double end_s = seg.at("end_s").get<double>();
      filter << "[0:v]trim=start=" << start_s << ":end=" << end_s
             << ",setpts=PTS-STARTPTS[v" << idx << "];";
      if (!has_sidecar)
        filter << "[0:a]atrim=start=" << start_s << ":end=" << end_s
               << ",asetpts=PTS-STARTPTS[a" << idx << "];";
      concat_inputs << "[v" << idx << "]";
      if (!has_sidecar) concat_inputs << "[a" << idx << "]";
      ++idx;
    }
    filter << concat_inputs.str() << "concat=n=" << idx
           << ":v=1:a=" << (has_sidecar ? 0 : 1) << "[outv]";
    if (!has_sidecar) filter << "[outa]";
    cmd << ffmpeg_binary << " -y -loglevel error -i "
        << shell_quote(source.file);
    if (has_sidecar) cmd << " -i " << shell_quote(spliced_wav.string());
    cmd << " -filter_complex " << shell_quote(filter.str())
        << " -map \"[outv]\"";
    if (has_sidecar)
      cmd << " -map 1:a -shortest";
    else
      cmd << " -map \"[outa]\"";
    cmd << " " << shell_quote(output.string());
  }

  run_or_throw(cmd.str());
  if (!concat_file.empty()) std::filesystem::remove(concat_file);
  if (!spliced_wav.empty()) std::filesystem::remove(spliced_wav);
}

}  // namespace adclip
