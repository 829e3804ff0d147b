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

#include "adclip/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "adclip/errors.hpp"
#include "adclip/util.hpp"

namespace adclip {

namespace {

std::uint32_t read_u32(const std::string& d, std::size_t off) {
  if (off + 4 > d.size()) throw ValidationError("truncated WAV file");
  std::uint32_t v;
  std::memcpy(&v, d.data() + off, 4);
  return v;
}

std::uint16_t read_u16(const std::string& d, std::size_t off) {
  if (off + 2 > d.size()) throw ValidationError("truncated WAV file");
  std::uint16_t v;
  std::memcpy(&v, d.data() + off, 2);
  return v;
}

}  // namespace

WavFileSource::WavFileSource(const std::filesystem::path& path) {
  const std::string d = read_text_file(path);
  if (d.size() < 12 || d.compare(0, 4, "RIFF") != 0 ||
      d.compare(8, 4, "WAVE") != 0)
    throw ValidationError("not a RIFF/WAVE file: " + path.string());

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::size_t data_off = 0, data_len = 0;
  std::size_t off = 12;
  while (off + 8 <= d.size()) {
    const std::string id = d.substr(off, 4);
    const std::uint32_t len = read_u32(d, off + 4);
    if (id == "fmt ") {
      format = read_u16(d, off + 8);
      channels = read_u16(d, off + 10);
      sample_rate_ = static_cast<int>(read_u32(d, off + 12));
      bits = read_u16(d, off + 22);
    } else if (id == "data") {
      data_off = off + 8;
      data_len = std::min<std::size_t>(len, d.size() - data_off);
    }
    off += 8 + len + (len & 1);
  }
  if (data_off == 0 || channels == 0 || sample_rate_ <= 0)
    throw ValidationError("corrupt WAV stream: " + path.string());

  const std::size_t bytes_per = bits / 8u;
  if (bytes_per == 0 || data_len % (bytes_per * channels) != 0)
    throw ValidationError("corrupt WAV data chunk: " + path.string());
  const std::size_t frames = data_len / (bytes_per * channels);
  samples_.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const std::size_t p = data_off + (i * channels + c) * bytes_per;
      if (format == 1 && bits == 16) {
        std::int16_t s;
        std::memcpy(&s, d.data() + p, 2);
        acc += s / 32768.0;
      } else if (format == 1 && bits == 32) {
        std::int32_t s;
        std::memcpy(&s, d.data() + p, 4);
        acc += s / 2147483648.0;
      } else if (format == 3 && bits == 32) {
        float s;
        std::memcpy(&s, d.data() + p, 4);
        acc += s;
      } else {
        throw ValidationError("unsupported WAV encoding (format " +
                              std::to_string(format) + ", " +
                              std::to_string(bits) + " bit): " +
                              path.string());
      }
    }
    samples_[i] = static_cast<float>(acc / channels);
  }
}

int WavFileSource::sample_rate() const { return sample_rate_; }

std::int64_t WavFileSource::sample_count() const {
  return static_cast<std::int64_t>(samples_.size());
}

std::vector<float> WavFileSource::span(double t0, double t1) const {
  if (t1 < t0) std::swap(t0, t1);
  const std::int64_t begin =
      static_cast<std::int64_t>(std::floor(t0 * sample_rate_));
  const std::int64_t end =
      static_cast<std::int64_t>(std::ceil(t1 * sample_rate_));
  std::vector<float> out(static_cast<std::size_t>(std::max<std::int64_t>(
      0, end - begin)));
  for (std::int64_t i = begin; i < end; ++i) {
    out[static_cast<std::size_t>(i - begin)] =
        (i >= 0 && i < sample_count()) ? samples_[static_cast<std::size_t>(i)]
                                       : 0.0f;
  }
  return out;
}

SilenceSource::SilenceSource(int sample_rate, double duration_seconds)
    : sample_rate_(sample_rate),
      sample_count_(static_cast<std::int64_t>(
          std::llround(duration_seconds * sample_rate))) {}

int SilenceSource::sample_rate() const { return sample_rate_; }

std::int64_t SilenceSource::sample_count() const { return sample_count_; }

std::vector<float> SilenceSource::span(double t0, double t1) const {
  if (t1 < t0) std::swap(t0, t1);
  const auto n = static_cast<std::size_t>(
      std::max(0.0, std::ceil(t1 * sample_rate_) -
                        std::floor(t0 * sample_rate_)));
  return std::vector<float>(n, 0.0f);
}

std::vector<float> resample_linear(const std::vector<float>& samples,
                                   int source_rate, int target_rate) {
  if (source_rate == target_rate || samples.empty()) return samples;
  const double ratio = static_cast<double>(source_rate) / target_rate;
  const auto out_n = static_cast<std::size_t>(
      std::max(1.0, std::floor(samples.size() / ratio)));
  std::vector<float> out(out_n);
  for (std::size_t i = 0; i < out_n; ++i) {
    const double pos = i * ratio;
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, samples.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    out[i] = static_cast<float>(samples[lo] * (1.0 - frac) +
                                samples[hi] * frac);
  }
  return out;
}

void write_wav(const std::filesystem::path& path,
               const std::vector<float>& samples, int sample_rate) {
  std::string data;
  const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
  data.reserve(44 + data_len);
  auto put_u32 = [&data](std::uint32_t v) {
    data.append(reinterpret_cast<const char*>(&v), 4);
  };
  auto put_u16 = [&data](std::uint16_t v) {
    data.append(reinterpret_cast<const char*>(&v), 2);
  };
  data.append("RIFF");
  put_u32(36 + data_len);
  data.append("WAVE");
  data.append("fmt ");
  put_u32(16);
  put_u16(1);  // PCM
  put_u16(1);  // mono
  put_u32(static_cast<std::uint32_t>(sample_rate));
  put_u32(static_cast<std::uint32_t>(sample_rate * 2));
  put_u16(2);
  put_u16(16);
  data.append("data");
  put_u32(data_len);
  for (float s : samples) {
    const auto v = static_cast<std::int16_t>(
        std::lround(std::clamp(s, -1.0f, 1.0f) * 32767.0f));
    data.append(reinterpret_cast<const char*>(&v), 2);
  }
  atomic_write_file(path, data);
}

ResolvedAudio resolve_audio(const std::filesystem::path& video_path,
                            double video_duration_seconds,
                            int fallback_rate) {
  std::filesystem::path wav;
  if (std::filesystem::is_directory(video_path)) {
    wav = video_path / "audio.wav";
  } else {
    wav = video_path;
    wav.replace_extension(".wav");
  }
  if (std::filesystem::exists(wav)) {
    return ResolvedAudio{std::make_shared<WavFileSource>(wav), false};
  }
  return ResolvedAudio{
      std::make_shared<SilenceSource>(fallback_rate, video_duration_seconds),
      true};
}

}  // namespace adclip
