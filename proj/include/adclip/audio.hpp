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
#include <memory>
#include <vector>

namespace adclip {

// Mono waveform access for a video's soundtrack.
class AudioSource {
 public:
  virtual ~AudioSource() = default;
  virtual int sample_rate() const = 0;
  virtual std::int64_t sample_count() const = 0;
  // Samples covering [t0, t1) seconds at the native rate. Out-of-range time
  // reads as silence.
  virtual std::vector<float> span(double t0, double t1) const = 0;
  // True when this source is a digital-silence substitute for a missing
  // track.
  virtual bool silence_substitute() const { return false; }
};

// PCM WAV reader (16-bit or 32-bit int, float32; multi-channel mixed down).
class WavFileSource : public AudioSource {
 public:
  explicit WavFileSource(const std::filesystem::path& path);
  int sample_rate() const override;
  std::int64_t sample_count() const override;
  std::vector<float> span(double t0, double t1) const override;

 private:
  std::vector<float> samples_;
  int sample_rate_ = 0;
};

class SilenceSource : public AudioSource {
 public:
  SilenceSource(int sample_rate, double duration_seconds);
  int sample_rate() const override;
  std::int64_t sample_count() const override;
  std::vector<float> span(double t0, double t1) const override;
  bool silence_substitute() const override { return true; }

 private:
  int sample_rate_;
  std::int64_t sample_count_;
};

// Linear-interpolation resample to target_rate; used by embedders that want
// a fixed grid regardless of the source rate.
std::vector<float> resample_linear(const std::vector<float>& samples,
                                   int source_rate, int target_rate);

// 16-bit mono PCM writer (fixtures, spliced soundtrack output).
void write_wav(const std::filesystem::path& path,
               const std::vector<float>& samples, int sample_rate);

// The soundtrack for a video path: `<dir>/audio.wav` for frame directories,
// `<file stem>.wav` sidecar for container files. Falls back to a silence
// substitute of the video's duration when no track is found.
struct ResolvedAudio {
  std::shared_ptr<AudioSource> source;
  bool silence_substituted = false;
};
ResolvedAudio resolve_audio(const std::filesystem::path& video_path,
                            double video_duration_seconds,
                            int fallback_rate = 16000);

}  // namespace adclip
