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

#include "support/fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <random>

#include <json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "adclip/audio.hpp"
#include "adclip/util.hpp"

namespace adclip::testing {

cv::Mat shot_frame(std::uint64_t seed, int shot_id, int frame_in_shot,
                   int width, int height, int base_brightness) {
  std::mt19937_64 rng(fnv1a64("shot-pattern",
                              seed ^ (static_cast<std::uint64_t>(shot_id)
                                      << 17)));
  // Coarse upscaled noise: blocky blobs give SIFT distinctive structure per
  // shot without the accidental cross-matches of per-pixel noise. The base
  // runs a vertical ramp from base_brightness to its complement, so shots
  // with contrasting bases get opposed (not just scaled) intensity layouts.
  const int gw = std::max(2, width / 8), gh = std::max(2, height / 8);
  cv::Mat coarse(gh, gw, CV_8UC1);
  const int spread = 55;
  for (int y = 0; y < gh; ++y) {
    const double ramp = gh > 1 ? static_cast<double>(y) / (gh - 1) : 0.5;
    const int row_base = static_cast<int>(
        std::lround(base_brightness +
                    (255.0 - 2.0 * base_brightness) * ramp));
    for (int x = 0; x < gw; ++x)
      coarse.at<std::uint8_t>(y, x) = cv::saturate_cast<std::uint8_t>(
          row_base + static_cast<int>(next_index(rng, 2 * spread + 1)) -
          spread);
  }
  cv::Mat gray;
  cv::resize(coarse, gray, cv::Size(width, height), 0, 0, cv::INTER_NEAREST);
  cv::GaussianBlur(gray, gray, cv::Size(3, 3), 0);

  for (int s = 0; s < 3; ++s) {
    const int cx = static_cast<int>(next_index(rng, width));
    const int cy = static_cast<int>(next_index(rng, height));
    const int r = 6 + static_cast<int>(next_index(rng, height / 4));
    const int shade = std::clamp(
        base_brightness + (s % 2 ? 70 : -70) +
            static_cast<int>(next_index(rng, 30)),
        0, 255);
    if (s % 2)
      cv::circle(gray, {cx, cy}, r, cv::Scalar(shade), -1);
    else
      cv::rectangle(gray, {cx - r, cy - r}, {cx + r, cy + r},
                    cv::Scalar(shade), -1);
  }
  // moving marker: distinguishes frames within the shot
  const int mx = 4 + (frame_in_shot * 5) % std::max(1, width - 8);
  cv::circle(gray, {mx, 6}, 2, cv::Scalar(255), -1);

  cv::Mat img;
  cv::cvtColor(gray, img, cv::COLOR_GRAY2BGR);
  // slight per-shot channel tint keeps the mean-pixel channels informative
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      auto& px = img.at<cv::Vec3b>(y, x);
      px[1] = cv::saturate_cast<std::uint8_t>(px[1] + shot_id * 3);
      px[2] = cv::saturate_cast<std::uint8_t>(px[2] - shot_id * 2);
    }
  return img;
}

SyntheticVideo make_video(std::uint64_t seed,
                          const std::vector<int>& shot_lengths,
                          const std::vector<int>& brightness_per_shot,
                          const std::vector<double>& amplitude_per_shot,
                          double fps, int width, int height) {
  SyntheticVideo v;
  v.fps = fps;
  int frame = 0;
  for (std::size_t shot = 0; shot < shot_lengths.size(); ++shot) {
    const int len = shot_lengths[shot];
    v.shots.push_back(
        Shot{static_cast<int>(shot), frame, frame + len - 1});
    for (int f = 0; f < len; ++f)
      v.frames.push_back(shot_frame(seed, static_cast<int>(shot), f, width,
                                    height, brightness_per_shot[shot]));
    frame += len;

    // per-shot tone; frequency tracks the shot id so spans sound distinct
    const double freq = 180.0 + 97.0 * static_cast<double>(shot);
    const double amp = amplitude_per_shot[shot];
    const auto samples = static_cast<std::size_t>(
        std::llround(len / fps * v.sample_rate));
    const std::size_t base = v.audio.size();
    v.audio.resize(base + samples);
    for (std::size_t i = 0; i < samples; ++i)
      v.audio[base + i] = static_cast<float>(
          amp * std::sin(2.0 * M_PI * freq * static_cast<double>(i) /
                         v.sample_rate));
  }
  return v;
}

SyntheticVideo excerpt_video(const SyntheticVideo& long_video,
                             const std::vector<int>& shot_ids) {
  SyntheticVideo v;
  v.fps = long_video.fps;
  v.sample_rate = long_video.sample_rate;
  int frame = 0;
  for (std::size_t i = 0; i < shot_ids.size(); ++i) {
    const Shot& src = long_video.shots[static_cast<std::size_t>(shot_ids[i])];
    v.shots.push_back(
        Shot{static_cast<int>(i), frame, frame + src.frame_count() - 1});
    for (int f = src.start_frame; f <= src.end_frame; ++f)
      v.frames.push_back(long_video.frames[static_cast<std::size_t>(f)]);
    frame += src.frame_count();

    const auto begin = static_cast<std::size_t>(std::llround(
        src.start_frame / v.fps * v.sample_rate));
    const auto end = static_cast<std::size_t>(std::llround(
        (src.end_frame + 1) / v.fps * v.sample_rate));
    for (std::size_t s = begin; s < end && s < long_video.audio.size(); ++s)
      v.audio.push_back(long_video.audio[s]);
  }
  return v;
}

void write_video_dir(const std::filesystem::path& dir,
                     const SyntheticVideo& video) {
  std::filesystem::create_directories(dir);
  char name[32];
  for (std::size_t i = 0; i < video.frames.size(); ++i) {
    std::snprintf(name, sizeof(name), "frame_%06zu.png", i);
    cv::imwrite((dir / name).string(), video.frames[i]);
  }
  write_wav(dir / "audio.wav", video.audio, video.sample_rate);
}

void write_probs(const std::filesystem::path& path,
                 const SyntheticVideo& video) {
  std::string text;
  std::vector<double> probs(video.frames.size(), 0.0);
  for (const Shot& s : video.shots)
    probs[static_cast<std::size_t>(s.end_frame)] = 0.9;
  for (double p : probs) text += (p > 0.0 ? "0.9\n" : "0.0\n");
  atomic_write_file(path, text);
}

FixturePair write_pair(const std::filesystem::path& root,
                       const std::string& pair_id, std::uint64_t seed,
                       const std::vector<int>& excerpt,
                       const FixtureOptions& opts) {
  std::mt19937_64 rng(fnv1a64("fixture-pair", seed));
  std::vector<int> lengths, brightness;
  std::vector<double> amplitude;
  std::vector<bool> positive(static_cast<std::size_t>(opts.n_shots), false);
  for (int id : excerpt) positive[static_cast<std::size_t>(id)] = true;
  for (int s = 0; s < opts.n_shots; ++s) {
    lengths.push_back(16 + static_cast<int>(next_index(rng, 5)) * 4);
    if (opts.separable) {
      brightness.push_back(positive[static_cast<std::size_t>(s)] ? 240 : 15);
      // opposed ramps plus loud vs near-silent tones
      amplitude.push_back(positive[static_cast<std::size_t>(s)] ? 0.9 : 0.02);
    } else {
      brightness.push_back(90 + static_cast<int>(next_index(rng, 80)));
      amplitude.push_back(0.1 + 0.5 * next_unit(rng));
    }
  }
  const SyntheticVideo long_v = make_video(
      seed, lengths, brightness, amplitude, opts.fps, opts.width,
      opts.height);
  const SyntheticVideo short_v = excerpt_video(long_v, excerpt);

  FixturePair out;
  out.long_dir = root / (pair_id + "_long");
  out.short_dir = root / (pair_id + "_short");
  out.long_probs = root / (pair_id + "_long.probs.txt");
  out.short_probs = root / (pair_id + "_short.probs.txt");
  write_video_dir(out.long_dir, long_v);
  write_video_dir(out.short_dir, short_v);
  write_probs(out.long_probs, long_v);
  write_probs(out.short_probs, short_v);

  out.pair.pair_id = pair_id;
  out.pair.long_video =
      VideoRef{pair_id + "_long", out.long_dir.string(), opts.fps,
               static_cast<int>(long_v.frames.size()), long_v.shots};
  out.pair.short_video =
      VideoRef{pair_id + "_short", out.short_dir.string(), opts.fps,
               static_cast<int>(short_v.frames.size()), short_v.shots};
  ShotMapping mapping;
  for (std::size_t i = 0; i < excerpt.size(); ++i)
    mapping.entries.push_back(
        MappingEntry{static_cast<int>(i), excerpt[i], 1.0});
  out.pair.mapping = std::move(mapping);
  return out;
}

std::filesystem::path write_sources_json(
    const std::filesystem::path& root,
    const std::vector<FixturePair>& pairs) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& p : pairs) {
    doc.push_back(
        {{"pair_id", p.pair.pair_id},
         {"long",
          {{"video_id", p.pair.long_video.video_id},
           {"file", p.pair.long_video.file},
           {"fps", p.pair.long_video.fps},
           {"boundary_probs", p.long_probs.string()}}},
         {"short",
          {{"video_id", p.pair.short_video.video_id},
           {"file", p.pair.short_video.file},
           {"fps", p.pair.short_video.fps},
           {"boundary_probs", p.short_probs.string()}}}});
  }
  const auto path = root / "sources.json";
  atomic_write_file(path, doc.dump(2) + "\n");
  return path;
}

std::filesystem::path make_temp_dir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("adclip_" + tag + "_" +
                    std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace adclip::testing
