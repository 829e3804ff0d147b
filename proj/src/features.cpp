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

#include "adclip/features.hpp"

#include <cmath>
#include <random>

#include <opencv2/imgproc.hpp>

#include "adclip/errors.hpp"
#include "adclip/feature_cache.hpp"
#include "adclip/util.hpp"

namespace adclip {

namespace {

constexpr int kSignatureGrid = 4;  // 4x4 gray cells + 3 channel means
constexpr int kSignatureDim = kSignatureGrid * kSignatureGrid + 3;
constexpr int kRmsWindows = 32;
constexpr int kAudioAnalysisRate = 8000;

// Fixed projection matrix derived from the backend id; the only randomness
// a synthetic backend ever uses, so outputs are pure in the clip content.
Eigen::MatrixXf seeded_projection(const std::string& backend_id, int rows,
                                  int cols) {
  std::mt19937_64 rng(fnv1a64(backend_id));
  const double scale = std::sqrt(3.0 / cols);
  Eigen::MatrixXf m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m(r, c) = static_cast<float>(next_uniform(rng, -scale, scale));
  return m;
}

// Per-frame intensity signature, linear in pixel values: zero input frames
// give a zero signature.
Eigen::VectorXf frame_signature(const cv::Mat& frame) {
  Eigen::VectorXf sig(kSignatureDim);
  cv::Mat bgr;
  if (frame.channels() == 3)
    bgr = frame;
  else
    cv::cvtColor(frame, bgr, cv::COLOR_GRAY2BGR);
  const cv::Scalar means = cv::mean(bgr);
  for (int c = 0; c < 3; ++c)
    sig(c) = static_cast<float>(means[c] / 255.0);

  cv::Mat gray;
  cv::cvtColor(bgr, gray, cv::COLOR_BGR2GRAY);
  const int gh = gray.rows / kSignatureGrid;
  const int gw = gray.cols / kSignatureGrid;
  for (int gy = 0; gy < kSignatureGrid; ++gy) {
    for (int gx = 0; gx < kSignatureGrid; ++gx) {
      const cv::Rect cell(gx * gw, gy * gh,
                          gx == kSignatureGrid - 1 ? gray.cols - gx * gw : gw,
                          gy == kSignatureGrid - 1 ? gray.rows - gy * gh : gh);
      sig(3 + gy * kSignatureGrid + gx) =
          static_cast<float>(cv::mean(gray(cell))[0] / 255.0);
    }
  }
  return sig;
}

void check_finite(const FeatureMap& map) {
  if (!map.values.allFinite())
    throw ValidationError("feature map for backend '" + map.backend_id +
                          "' contains non-finite values");
}

FeatureMap load_precomputed(const ClipSet& clips,
                            const EmbeddingBackendSpec& backend) {
  if (backend.resource_dir.empty())
    throw DependencyError("backend '" + backend.backend_id +
                          "' needs a precomputed feature directory "
                          "(family:dim@dir); none configured");
  const std::filesystem::path file =
      std::filesystem::path(backend.resource_dir) /
      (encode_component(clips.video_id) + ".fmc");
  if (!std::filesystem::exists(file))
    throw DependencyError("backend '" + backend.backend_id +
                          "': missing precomputed features " + file.string());
  FeatureMap map = read_feature_map(file);
  if (map.stream != backend.stream)
    throw ValidationError("precomputed features in " + file.string() +
                          " are for the wrong stream");
  if (map.dim() != backend.dim)
    throw ValidationError("precomputed features in " + file.string() +
                          " have dim " + std::to_string(map.dim()) +
                          ", backend expects " + std::to_string(backend.dim));
  if (map.num_clips() != static_cast<int>(clips.clips.size()))
    throw ValidationError("precomputed features in " + file.string() +
                          " have " + std::to_string(map.num_clips()) +
                          " rows for " + std::to_string(clips.clips.size()) +
                          " clips");
  map.backend_id = backend.backend_id;
  check_finite(map);
  return map;
}

}  // namespace

std::string stream_name(Stream s) {
  return s == Stream::visual ? "visual" : "audio";
}

EmbeddingBackendSpec parse_backend_spec(const std::string& text,
                                        Stream stream) {
  EmbeddingBackendSpec spec;
  spec.stream = stream;
  std::string body = text;
  const auto at = text.find('@');
  if (at != std::string::npos) {
    body = text.substr(0, at);
    spec.resource_dir = text.substr(at + 1);
  }
  const auto colon = body.find(':');
  if (colon == std::string::npos || colon + 1 >= body.size())
    throw ValidationError("backend spec must look like family:dim[@dir]: " +
                          text);
  spec.family = body.substr(0, colon);
  try {
    spec.dim = std::stoi(body.substr(colon + 1));
  } catch (const std::exception&) {
    throw ValidationError("bad backend dim in: " + text);
  }
  if (spec.dim <= 0) throw ValidationError("backend dim must be positive");
  spec.backend_id = spec.family + ":" + std::to_string(spec.dim);

  const bool visual_family = spec.family == "mean-pixel" ||
                             spec.family == "mean-pixel-2d" ||
                             spec.family == "swin3d-pooled";
  const bool audio_family =
      spec.family == "rms-bands" || spec.family == "w2vbert-pooled";
  if (!visual_family && !audio_family)
    throw ValidationError("unknown embedding backend family: " + spec.family);
  if (stream == Stream::visual && !visual_family)
    throw ValidationError("backend '" + spec.family +
                          "' is not a visual backend");
  if (stream == Stream::audio && !audio_family)
    throw ValidationError("backend '" + spec.family +
                          "' is not an audio backend");
  return spec;
}

FeatureMap embed_visual(const ClipSet& clips, const FrameSource& frames,
                        const EmbeddingBackendSpec& backend) {
  if (backend.stream != Stream::visual)
    throw ValidationError("embed_visual needs a visual backend, got " +
                          backend.backend_id);
  if (backend.family == "swin3d-pooled") return load_precomputed(clips, backend);
  if (backend.family == "mean-pixel-2d")
    return embed_frame_level_baseline(clips, frames, backend);
  if (backend.family != "mean-pixel")
    throw ValidationError("unsupported visual family: " + backend.family);

  // Clip feature: mean per-frame signature plus the last-minus-first delta,
  // then a fixed projection. The delta term carries within-clip motion.
  const Eigen::MatrixXf proj =
      seeded_projection(backend.backend_id, backend.dim, 2 * kSignatureDim);
  FeatureMap map;
  map.stream = Stream::visual;
  map.backend_id = backend.backend_id;
  map.values.resize(static_cast<Eigen::Index>(clips.clips.size()),
                    backend.dim);
  for (const Clip& clip : clips.clips) {
    Eigen::VectorXf mean = Eigen::VectorXf::Zero(kSignatureDim);
    Eigen::VectorXf first, last;
    for (std::size_t i = 0; i < clip.frame_indices.size(); ++i) {
      const Eigen::VectorXf sig =
          frame_signature(frames.frame(clip.frame_indices[i]));
      if (i == 0) first = sig;
      if (i + 1 == clip.frame_indices.size()) last = sig;
      mean += sig;
    }
    mean /= static_cast<float>(clip.frame_indices.size());
    Eigen::VectorXf stacked(2 * kSignatureDim);
    stacked << mean, (last - first);
    map.values.row(clip.clip_index) = (proj * stacked).transpose();
  }
  check_finite(map);
  return map;
}

FeatureMap embed_frame_level_baseline(const ClipSet& clips,
                                      const FrameSource& frames,
                                      const EmbeddingBackendSpec& backend_2d) {
  if (backend_2d.stream != Stream::visual)
    throw ValidationError("frame-level baseline needs a visual backend");
  if (backend_2d.family == "swin3d-pooled")
    throw ValidationError("frame-level baseline needs a per-frame backend, "
                          "not precomputed clip features");
  const Eigen::MatrixXf proj =
      seeded_projection(backend_2d.backend_id, backend_2d.dim, kSignatureDim);
  FeatureMap map;
  map.stream = Stream::visual;
  map.backend_id = backend_2d.backend_id;
  map.values.resize(static_cast<Eigen::Index>(clips.clips.size()),
                    backend_2d.dim);
  for (const Clip& clip : clips.clips) {
    Eigen::VectorXf acc = Eigen::VectorXf::Zero(backend_2d.dim);
    for (int f : clip.frame_indices)
      acc += proj * frame_signature(frames.frame(f));
    map.values.row(clip.clip_index) =
        (acc / static_cast<float>(clip.frame_indices.size())).transpose();
  }
  check_finite(map);
  return map;
}

FeatureMap embed_audio(const ClipSet& clips, const AudioSource& audio,
                       const EmbeddingBackendSpec& backend) {
  if (backend.stream != Stream::audio)
    throw ValidationError("embed_audio needs an audio backend, got " +
                          backend.backend_id);
  if (backend.family == "w2vbert-pooled")
    return load_precomputed(clips, backend);
  if (backend.family != "rms-bands")
    throw ValidationError("unsupported audio family: " + backend.family);

  const Eigen::MatrixXf proj =
      seeded_projection(backend.backend_id, backend.dim, kRmsWindows);
  FeatureMap map;
  map.stream = Stream::audio;
  map.backend_id = backend.backend_id;
  map.values.resize(static_cast<Eigen::Index>(clips.clips.size()),
                    backend.dim);
  for (const Clip& clip : clips.clips) {
    std::vector<float> samples =
        audio.span(clip.audio_start_s, clip.audio_end_s);
    samples = resample_linear(samples, audio.sample_rate(),
                              kAudioAnalysisRate);
    Eigen::VectorXf rms = Eigen::VectorXf::Zero(kRmsWindows);
    if (!samples.empty()) {
      const std::size_t window =
          std::max<std::size_t>(1, samples.size() / kRmsWindows);
      for (int w = 0; w < kRmsWindows; ++w) {
        const std::size_t begin = w * window;
        if (begin >= samples.size()) break;
        const std::size_t end =
            (w == kRmsWindows - 1) ? samples.size()
                                   : std::min(samples.size(), begin + window);
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i)
          acc += static_cast<double>(samples[i]) * samples[i];
        rms(w) = static_cast<float>(std::sqrt(acc / (end - begin)));
      }
    }
    map.values.row(clip.clip_index) = (proj * rms).transpose();
  }
  check_finite(map);
  return map;
}

void zscore_per_video(FeatureMap& map) {
  const int t = map.num_clips();
  if (t < 2) return;
  for (int d = 0; d < map.dim(); ++d) {
    auto col = map.values.col(d);
    const float mean = col.mean();
    const float var = (col.array() - mean).square().sum() / t;
    const float sd = std::sqrt(var);
    if (sd > 0.0f)
      col = (col.array() - mean) / sd;
    else
      col.setZero();
  }
}

}  // namespace adclip
