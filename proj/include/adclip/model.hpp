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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "adclip/features.hpp"

namespace adclip {

enum class FusionMode { visual_only, audio_only, early, late };

FusionMode fusion_mode_from_string(const std::string& s);
std::string to_string(FusionMode m);

struct FusionConfig {
  FusionMode mode = FusionMode::early;
  double alpha = 0.5;  // late fusion weight on the visual stream
  double beta = 0.5;   // early fusion weight on the visual feature map
};

enum class LossKind { bce, mse };

LossKind loss_kind_from_string(const std::string& s);
std::string to_string(LossKind k);

struct TrainConfig {
  LossKind loss = LossKind::bce;
  int epochs = 50;
  int batch_size = 1;
  double learning_rate = 0.001;
  std::uint64_t seed = 42;
  // Backbone fine-tuning. Unset resolves per backbone: the row-gate backbone
  // learns its gating, the frozen image-CNN backbones do not train.
  std::optional<bool> train_backbone;
};

// Per-clip scores in [0,1].
struct ImportanceVector {
  std::vector<double> scores;
};

// Broadcast clip score t onto frames [t*stride, (t+1)*stride); the last
// block may be shorter.
std::vector<double> expand_to_frames(const std::vector<double>& clip_scores,
                                     int stride, int frame_count);

struct AttentionScorerConfig {
  std::string attention_backbone_id = "conv-attn";
  int input_dim = 0;
  std::uint64_t seed = 0;
  std::optional<bool> trainable_backbone;
};

// Frozen 2D CNN over the feature map viewed as a one-channel image.
// Three seeded conv layers, sigmoid output; fully convolutional so the
// attention map keeps the T x D shape.
class ConvAttention {
 public:
  ConvAttention(std::uint64_t seed, int channels = 8);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& fm) const;

 private:
  int channels_;
  std::vector<double> w1_, w2_, w3_;  // 3x3 kernels
};

// Pretrained image-classification CNN as the attention backbone, through
// OpenCV's dnn loader ("googlenet-attn@model[#layer]"). The map replicates
// to three channels, resizes to the net's input, the named activation is
// channel-averaged, resized back to T x D, and squashed by a sigmoid.
// Requires a weights file; construction fails loudly without one.
class DnnAttention {
 public:
  DnnAttention(const std::string& model_path, const std::string& layer,
               int input_size = 224);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& fm) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// One stream's scorer: attention backbone, Hadamard merge, linear head with
// a sigmoid. Kept as a plain struct; the training loop in model.cpp owns
// the gradient math.
struct StreamScorer {
  std::string backbone_id;  // "row-gate", "conv-attn", "googlenet-attn@..."
  int dim = 0;
  std::uint64_t seed = 0;
  bool backbone_trainable = false;

  // row-gate parameters: A[t,d] = sigmoid(scale[d]*fm[t,d] + bias[d])
  Eigen::VectorXd gate_scale;
  Eigen::VectorXd gate_bias;

  // linear head
  Eigen::VectorXd head_weight;
  double head_bias = 0.0;

  // frozen backbones, rebuilt from backbone_id/seed rather than serialized
  std::shared_ptr<const ConvAttention> conv;
  std::shared_ptr<const DnnAttention> dnn;

  Eigen::MatrixXd attention_map(const Eigen::MatrixXd& fm) const;

  nlohmann::json to_json() const;
  static StreamScorer from_json(const nlohmann::json& j);
};

StreamScorer make_stream_scorer(const AttentionScorerConfig& cfg);

// Attention, Hadamard merge, per-row linear head, sigmoid.
ImportanceVector score_stream(const FeatureMap& fm,
                              const StreamScorer& scorer);

// I = alpha * I_visual + (1 - alpha) * I_audio. The endpoints return the
// corresponding stream exactly.
std::vector<double> fuse_late(const std::vector<double>& visual,
                              const std::vector<double>& audio, double alpha);

// FM = beta * FM_visual + (1 - beta) * FM_audio, requiring equal shapes.
// Computed as audio + beta*(visual - audio) so equal inputs pass through
// bit-exactly; the endpoints return the corresponding map exactly.
FeatureMap fuse_early(const FeatureMap& visual, const FeatureMap& audio,
                      double beta);

double bce_loss(const std::vector<double>& pred,
                const std::vector<std::uint8_t>& gt);
double mse_loss(const std::vector<double>& pred,
                const std::vector<std::uint8_t>& gt);
// dLoss/dPred, matching the clamped loss definitions above.
std::vector<double> bce_loss_grad(const std::vector<double>& pred,
                                  const std::vector<std::uint8_t>& gt);
std::vector<double> mse_loss_grad(const std::vector<double>& pred,
                                  const std::vector<std::uint8_t>& gt);

struct TrainSample {
  std::string pair_id;
  std::optional<FeatureMap> visual;
  std::optional<FeatureMap> audio;
  std::vector<std::uint8_t> clip_labels;  // label at each clip's focal frame
  bool audio_silent = false;  // silence was substituted for a missing track
};

struct TrainReport {
  std::vector<double> epoch_mean_loss;
  double final_loss = 0.0;
  std::uint64_t seed = 0;
};

// Scorers by fusion mode: single-stream and early fusion hold one scorer;
// late fusion holds two independently trained stream scorers.
struct TrainedModel {
  FusionConfig fusion;
  std::optional<StreamScorer> visual_scorer;
  std::optional<StreamScorer> audio_scorer;
  std::optional<StreamScorer> fused_scorer;
};

TrainedModel train_model(const std::vector<TrainSample>& samples,
                         const FusionConfig& fusion, const TrainConfig& tc,
                         const std::string& attention_backbone_id,
                         TrainReport* report = nullptr);

// Per-clip scores for one video; streams not required by the fusion mode
// may be absent.
std::vector<double> predict_clip_scores(
    const TrainedModel& model, const std::optional<FeatureMap>& visual,
    const std::optional<FeatureMap>& audio);

// Checkpoint: parameters plus caller metadata (config, fingerprint, backend
// ids). Atomic write.
void save_checkpoint(const TrainedModel& model,
                     const nlohmann::json& metadata,
                     const std::filesystem::path& path);

struct Checkpoint {
  TrainedModel model;
  nlohmann::json metadata;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace adclip
