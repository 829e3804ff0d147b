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

#include <Eigen/Core>

#include "adclip/audio.hpp"
#include "adclip/frames.hpp"
#include "adclip/sampling.hpp"

namespace adclip {

enum class Stream { visual, audio };

std::string stream_name(Stream s);

using FeatureMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// T x D per-clip embeddings for one stream of one video.
struct FeatureMap {
  Stream stream = Stream::visual;
  std::string backend_id;
  FeatureMatrix values;

  int num_clips() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
};

// Backend families:
//   mean-pixel      visual, clip-level; seeded projection of per-frame
//                   intensity statistics plus a first/last motion term
//   mean-pixel-2d   visual, frame-level; rows are averaged per clip
//   rms-bands       audio; seeded projection of windowed RMS energies
//   swin3d-pooled   visual, precomputed rows loaded from <dir>/<video_id>.fmc
//   w2vbert-pooled  audio, precomputed rows as above
// Spelled "family:dim" or "family:dim@dir". The synthetic families are pure
// functions of clip content, so the whole test suite runs without any
// pretrained weights.
struct EmbeddingBackendSpec {
  std::string backend_id;  // canonical "family:dim"
  std::string family;
  Stream stream = Stream::visual;
  int dim = 0;
  bool deterministic = true;
  std::string resource_dir;  // precomputed families only
};

EmbeddingBackendSpec parse_backend_spec(const std::string& text,
                                        Stream stream);

FeatureMap embed_visual(const ClipSet& clips, const FrameSource& frames,
                        const EmbeddingBackendSpec& backend);

FeatureMap embed_audio(const ClipSet& clips, const AudioSource& audio,
                       const EmbeddingBackendSpec& backend);

// 2D per-frame embeddings averaged over the clip window, replicated padding
// frames included.
FeatureMap embed_frame_level_baseline(const ClipSet& clips,
                                      const FrameSource& frames,
                                      const EmbeddingBackendSpec& backend_2d);

// Ablation-only per-video z-score over each feature dimension. Off by
// default; the fused map of the reference configuration is a plain linear
// combination of raw backend outputs.
void zscore_per_video(FeatureMap& map);

}  // namespace adclip
