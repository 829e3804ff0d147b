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

#include "adclip/model.hpp"

#include <cmath>
#include <mutex>
#include <random>

#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>
#include <opencv2/imgproc.hpp>

#include "adclip/errors.hpp"
#include "adclip/util.hpp"

namespace adclip {

namespace {

constexpr double kLossClamp = 1e-7;

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::VectorXd json_to_vector(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& x : j) v(i++) = x.get<double>();
  return v;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

}  // namespace

FusionMode fusion_mode_from_string(const std::string& s) {
  if (s == "visual_only") return FusionMode::visual_only;
  if (s == "audio_only") return FusionMode::audio_only;
  if (s == "early") return FusionMode::early;
  if (s == "late") return FusionMode::late;
  throw ValidationError("unknown fusion mode: " + s);
}

std::string to_string(FusionMode m) {
  switch (m) {
    case FusionMode::visual_only: return "visual_only";
    case FusionMode::audio_only: return "audio_only";
    case FusionMode::early: return "early";
    case FusionMode::late: return "late";
  }
  return "?";
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "bce") return LossKind::bce;
  if (s == "mse") return LossKind::mse;
  throw ValidationError("unknown loss kind: " + s);
}

std::string to_string(LossKind k) {
  return k == LossKind::bce ? "bce" : "mse";
}

std::vector<double> expand_to_frames(const std::vector<double>& clip_scores,
                                     int stride, int frame_count) {
  if (stride < 1) throw ValidationError("stride must be >= 1");
  if (frame_count < 1) throw ValidationError("frame_count must be >= 1");
  const int expected = (frame_count + stride - 1) / stride;
  if (static_cast<int>(clip_scores.size()) != expected)
    throw ValidationError("clip score count " +
                          std::to_string(clip_scores.size()) +
                          " does not match " + std::to_string(expected) +
                          " sampled focal frames");
  std::vector<double> frames(static_cast<std::size_t>(frame_count));
  for (int f = 0; f < frame_count; ++f)
    frames[static_cast<std::size_t>(f)] =
        clip_scores[static_cast<std::size_t>(f / stride)];
  return frames;
}

// ---------------------------------------------------------------------------
// Attention backbones

ConvAttention::ConvAttention(std::uint64_t seed, int channels)
    : channels_(channels) {
  std::mt19937_64 rng(seed);
  auto fill = [&rng](std::vector<double>& w, std::size_t n, int fan_in,
                     int fan_out) {
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    w.resize(n);
    for (auto& x : w) x = next_uniform(rng, -bound, bound);
  };
  fill(w1_, static_cast<std::size_t>(channels_) * 9, 9, channels_ * 9);
  fill(w2_, static_cast<std::size_t>(channels_) * channels_ * 9,
       channels_ * 9, channels_ * 9);
  fill(w3_, static_cast<std::size_t>(channels_) * 9, channels_ * 9, 9);
}

Eigen::MatrixXd ConvAttention::apply(const Eigen::MatrixXd& fm) const {
  const int rows = static_cast<int>(fm.rows());
  const int cols = static_cast<int>(fm.cols());
  const int C = channels_;
  auto at = [&](const std::vector<Eigen::MatrixXd>& maps, int c, int r,
                int q) -> double {
    if (r < 0 || r >= rows || q < 0 || q >= cols) return 0.0;  // zero pad
    return maps[static_cast<std::size_t>(c)](r, q);
  };

  std::vector<Eigen::MatrixXd> h1(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) {
    h1[static_cast<std::size_t>(c)].setZero(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int q = 0; q < cols; ++q) {
        double acc = 0.0;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dq = -1; dq <= 1; ++dq) {
            const int rr = r + dr, qq = q + dq;
            if (rr < 0 || rr >= rows || qq < 0 || qq >= cols) continue;
            acc += w1_[static_cast<std::size_t>(c * 9 + (dr + 1) * 3 +
                                                (dq + 1))] *
                   fm(rr, qq);
          }
        h1[static_cast<std::size_t>(c)](r, q) = std::max(0.0, acc);
      }
  }

  std::vector<Eigen::MatrixXd> h2(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) {
    h2[static_cast<std::size_t>(c)].setZero(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int q = 0; q < cols; ++q) {
        double acc = 0.0;
        for (int ci = 0; ci < C; ++ci)
          for (int dr = -1; dr <= 1; ++dr)
            for (int dq = -1; dq <= 1; ++dq)
              acc += w2_[static_cast<std::size_t>(
                         ((c * C) + ci) * 9 + (dr + 1) * 3 + (dq + 1))] *
                     at(h1, ci, r + dr, q + dq);
        h2[static_cast<std::size_t>(c)](r, q) = std::max(0.0, acc);
      }
  }

  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int q = 0; q < cols; ++q) {
      double acc = 0.0;
      for (int ci = 0; ci < C; ++ci)
        for (int dr = -1; dr <= 1; ++dr)
          for (int dq = -1; dq <= 1; ++dq)
            acc += w3_[static_cast<std::size_t>(ci * 9 + (dr + 1) * 3 +
                                                (dq + 1))] *
                   at(h2, ci, r + dr, q + dq);
      out(r, q) = sigmoid(acc);
    }
  return out;
}

struct DnnAttention::Impl {
  mutable cv::dnn::Net net;
  mutable std::mutex mutex;
  std::string layer;
  int input_size;
};

DnnAttention::DnnAttention(const std::string& model_path,
                           const std::string& layer, int input_size) {
  if (!std::filesystem::exists(model_path))
    throw DependencyError("attention backbone weights not found: " +
                          model_path);
  impl_ = std::make_shared<Impl>();
  impl_->layer = layer;
  impl_->input_size = input_size;
  try {
    impl_->net = cv::dnn::readNet(model_path);
  } catch (const cv::Exception& e) {
    throw DependencyError("cannot load attention backbone '" + model_path +
                          "': " + e.what());
  }
}

Eigen::MatrixXd DnnAttention::apply(const Eigen::MatrixXd& fm) const {
  const int rows = static_cast<int>(fm.rows());
  const int cols = static_cast<int>(fm.cols());
  cv::Mat gray(rows, cols, CV_32F);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      gray.at<float>(r, c) = static_cast<float>(fm(r, c));
  cv::Mat resized;
  cv::resize(gray, resized, cv::Size(impl_->input_size, impl_->input_size));
  cv::Mat three;
  cv::merge(std::vector<cv::Mat>{resized, resized, resized}, three);
  cv::Mat blob = cv::dnn::blobFromImage(three);

  cv::Mat activation;
  {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->net.setInput(blob);
    activation = impl_->layer.empty() ? impl_->net.forward()
                                      : impl_->net.forward(impl_->layer);
  }
  if (activation.dims != 4)
    throw ValidationError(
        "attention layer output must be a 4-D activation; got dims=" +
        std::to_string(activation.dims));
  const int ch = activation.size[1];
  const int ah = activation.size[2];
  const int aw = activation.size[3];
  cv::Mat mean = cv::Mat::zeros(ah, aw, CV_32F);
  for (int c = 0; c < ch; ++c) {
    const cv::Mat plane(ah, aw, CV_32F,
                        activation.ptr<float>(0, c));
    mean += plane;
  }
  mean /= static_cast<float>(ch);
  cv::Mat back;
  cv::resize(mean, back, cv::Size(cols, rows));
  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      out(r, c) = sigmoid(static_cast<double>(back.at<float>(r, c)));
  return out;
}

// ---------------------------------------------------------------------------
// Scorer

StreamScorer make_stream_scorer(const AttentionScorerConfig& cfg) {
  if (cfg.input_dim <= 0)
    throw ValidationError("scorer input_dim must be positive");
  StreamScorer s;
  s.backbone_id = cfg.attention_backbone_id;
  s.dim = cfg.input_dim;
  s.seed = cfg.seed;

  const bool row_gate = s.backbone_id == "row-gate";
  if (row_gate) {
    s.gate_scale = Eigen::VectorXd::Ones(s.dim);
    s.gate_bias = Eigen::VectorXd::Zero(s.dim);
    s.backbone_trainable = cfg.trainable_backbone.value_or(true);
  } else if (s.backbone_id == "conv-attn") {
    s.conv = std::make_shared<ConvAttention>(fnv1a64("conv-attn", cfg.seed));
    s.backbone_trainable = false;
  } else if (s.backbone_id.rfind("googlenet-attn@", 0) == 0) {
    std::string rest = s.backbone_id.substr(std::string("googlenet-attn@").size());
    std::string layer;
    const auto hash_pos = rest.find('#');
    if (hash_pos != std::string::npos) {
      layer = rest.substr(hash_pos + 1);
      rest = rest.substr(0, hash_pos);
    }
    s.dnn = std::make_shared<DnnAttention>(rest, layer);
    s.backbone_trainable = false;
  } else {
    throw ValidationError("unknown attention backbone: " + s.backbone_id);
  }
  if (!row_gate && cfg.trainable_backbone.value_or(false))
    throw ValidationError("attention backbone '" + s.backbone_id +
                          "' is frozen; fine-tuning is only supported for "
                          "row-gate");

  // Uniform fan-in init for the head.
  std::mt19937_64 rng(fnv1a64("head", cfg.seed));
  const double bound = 1.0 / std::sqrt(static_cast<double>(s.dim));
  s.head_weight.resize(s.dim);
  for (Eigen::Index i = 0; i < s.head_weight.size(); ++i)
    s.head_weight(i) = next_uniform(rng, -bound, bound);
  s.head_bias = 0.0;
  return s;
}

Eigen::MatrixXd StreamScorer::attention_map(const Eigen::MatrixXd& fm) const {
  if (static_cast<int>(fm.cols()) != dim)
    throw ValidationError("feature map dim " + std::to_string(fm.cols()) +
                          " does not match scorer dim " +
                          std::to_string(dim));
  if (backbone_id == "row-gate") {
    Eigen::MatrixXd a(fm.rows(), fm.cols());
    for (Eigen::Index t = 0; t < fm.rows(); ++t)
      for (Eigen::Index d = 0; d < fm.cols(); ++d)
        a(t, d) = sigmoid(gate_scale(d) * fm(t, d) + gate_bias(d));
    return a;
  }
  if (conv) return conv->apply(fm);
  if (dnn) return dnn->apply(fm);
  throw ValidationError("scorer has no attention backbone instance");
}

ImportanceVector score_stream(const FeatureMap& fm,
                              const StreamScorer& scorer) {
  if (fm.dim() != scorer.dim)
    throw ValidationError("feature map dim " + std::to_string(fm.dim()) +
                          " does not match scorer dim " +
                          std::to_string(scorer.dim));
  const Eigen::MatrixXd x = fm.values.cast<double>();
  const Eigen::MatrixXd a = scorer.attention_map(x);
  const Eigen::MatrixXd merged = x.cwiseProduct(a);
  ImportanceVector iv;
  iv.scores.resize(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index t = 0; t < x.rows(); ++t)
    iv.scores[static_cast<std::size_t>(t)] =
        sigmoid(merged.row(t).dot(scorer.head_weight) + scorer.head_bias);
  return iv;
}

nlohmann::json StreamScorer::to_json() const {
  return nlohmann::json{{"backbone_id", backbone_id},
                        {"dim", dim},
                        {"seed", seed},
                        {"backbone_trainable", backbone_trainable},
                        {"gate_scale", vector_to_json(gate_scale)},
                        {"gate_bias", vector_to_json(gate_bias)},
                        {"head_weight", vector_to_json(head_weight)},
                        {"head_bias", head_bias}};
}

StreamScorer StreamScorer::from_json(const nlohmann::json& j) {
  AttentionScorerConfig cfg;
  cfg.attention_backbone_id = j.at("backbone_id").get<std::string>();
  cfg.input_dim = j.at("dim").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  StreamScorer s = make_stream_scorer(cfg);
  s.backbone_trainable = j.at("backbone_trainable").get<bool>();
  s.gate_scale = json_to_vector(j.at("gate_scale"));
  s.gate_bias = json_to_vector(j.at("gate_bias"));
  s.head_weight = json_to_vector(j.at("head_weight"));
  s.head_bias = j.at("head_bias").get<double>();
  if (s.head_weight.size() != s.dim)
    throw ValidationError("checkpoint head size does not match dim");
  return s;
}

// ---------------------------------------------------------------------------
// Fusion

std::vector<double> fuse_late(const std::vector<double>& visual,
                              const std::vector<double>& audio,
                              double alpha) {
  if (visual.size() != audio.size())
    throw ValidationError("late fusion length mismatch: " +
                          std::to_string(visual.size()) + " vs " +
                          std::to_string(audio.size()));
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ValidationError("alpha must lie in [0,1]");
  if (alpha == 1.0) return visual;
  if (alpha == 0.0) return audio;
  std::vector<double> fused(visual.size());
  for (std::size_t i = 0; i < visual.size(); ++i)
    fused[i] = alpha * visual[i] + (1.0 - alpha) * audio[i];
  return fused;
}

FeatureMap fuse_early(const FeatureMap& visual, const FeatureMap& audio,
                      double beta) {
  if (visual.num_clips() != audio.num_clips() ||
      visual.dim() != audio.dim())
    throw ValidationError(
        "early fusion shape mismatch: " + std::to_string(visual.num_clips()) +
        "x" + std::to_string(visual.dim()) + " vs " +
        std::to_string(audio.num_clips()) + "x" +
        std::to_string(audio.dim()));
  if (!(beta >= 0.0 && beta <= 1.0))
    throw ValidationError("beta must lie in [0,1]");
  FeatureMap fused;
  fused.stream = Stream::visual;
  fused.backend_id =
      "early(" + visual.backend_id + "+" + audio.backend_id + ")";
  if (beta == 1.0) {
    fused.values = visual.values;
  } else if (beta == 0.0) {
    fused.values = audio.values;
  } else {
    // audio + beta*(visual-audio): equal inputs fuse to themselves exactly.
    fused.values =
        audio.values +
        static_cast<float>(beta) * (visual.values - audio.values);
  }
  return fused;
}

// ---------------------------------------------------------------------------
// Losses

namespace {

void check_loss_args(const std::vector<double>& pred,
                     const std::vector<std::uint8_t>& gt) {
  if (pred.size() != gt.size())
    throw ValidationError("loss length mismatch: " +
                          std::to_string(pred.size()) + " vs " +
                          std::to_string(gt.size()));
  if (pred.empty()) throw ValidationError("loss over empty vectors");
}

}  // namespace

double bce_loss(const std::vector<double>& pred,
                const std::vector<std::uint8_t>& gt) {
  check_loss_args(pred, gt);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred[i], kLossClamp, 1.0 - kLossClamp);
    acc += gt[i] ? std::log(p) : std::log(1.0 - p);
  }
  return -acc / static_cast<double>(pred.size());
}

double mse_loss(const std::vector<double>& pred,
                const std::vector<std::uint8_t>& gt) {
  check_loss_args(pred, gt);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - gt[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

std::vector<double> bce_loss_grad(const std::vector<double>& pred,
                                  const std::vector<std::uint8_t>& gt) {
  check_loss_args(pred, gt);
  const double n = static_cast<double>(pred.size());
  std::vector<double> grad(pred.size(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] <= kLossClamp || pred[i] >= 1.0 - kLossClamp)
      continue;  // flat clamp region
    grad[i] = -(gt[i] / pred[i] - (1.0 - gt[i]) / (1.0 - pred[i])) / n;
  }
  return grad;
}

std::vector<double> mse_loss_grad(const std::vector<double>& pred,
                                  const std::vector<std::uint8_t>& gt) {
  check_loss_args(pred, gt);
  const double n = static_cast<double>(pred.size());
  std::vector<double> grad(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    grad[i] = 2.0 * (pred[i] - gt[i]) / n;
  return grad;
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct AdamState {
  Eigen::ArrayXd m, v;
  void init(Eigen::Index n) {
    m = Eigen::ArrayXd::Zero(n);
    v = Eigen::ArrayXd::Zero(n);
  }
};

void adam_step(Eigen::VectorXd& param, const Eigen::VectorXd& grad,
               AdamState& st, int step, double lr) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  st.m = b1 * st.m + (1.0 - b1) * grad.array();
  st.v = b2 * st.v + (1.0 - b2) * grad.array().square();
  const double c1 = 1.0 - std::pow(b1, step);
  const double c2 = 1.0 - std::pow(b2, step);
  param.array() -= lr * (st.m / c1) / ((st.v / c2).sqrt() + eps);
}

// Forward/backward and Adam bookkeeping for one StreamScorer.
class ScorerTrainer {
 public:
  ScorerTrainer(StreamScorer& scorer, LossKind loss)
      : scorer_(scorer), loss_(loss) {
    w_state_.init(scorer.dim);
    b_state_.init(1);
    if (train_gate()) {
      scale_state_.init(scorer.dim);
      bias_state_.init(scorer.dim);
      grad_scale_ = Eigen::VectorXd::Zero(scorer.dim);
      grad_bias_ = Eigen::VectorXd::Zero(scorer.dim);
    }
    grad_w_ = Eigen::VectorXd::Zero(scorer.dim);
  }

  bool train_gate() const {
    return scorer_.backbone_id == "row-gate" && scorer_.backbone_trainable;
  }

  // Accumulates gradients for one video; returns its loss.
  double accumulate(const FeatureMap& fm,
                    const std::vector<std::uint8_t>& labels) {
    const Eigen::MatrixXd x = fm.values.cast<double>();
    const Eigen::Index t_count = x.rows();
    if (static_cast<std::size_t>(t_count) != labels.size())
      throw ValidationError("clip label count does not match feature rows");

    const Eigen::MatrixXd a = scorer_.attention_map(x);
    const Eigen::MatrixXd merged = x.cwiseProduct(a);
    std::vector<double> pred(static_cast<std::size_t>(t_count));
    Eigen::VectorXd p(t_count);
    for (Eigen::Index t = 0; t < t_count; ++t) {
      p(t) = sigmoid(merged.row(t).dot(scorer_.head_weight) +
                     scorer_.head_bias);
      pred[static_cast<std::size_t>(t)] = p(t);
    }
    const double loss = loss_ == LossKind::bce ? bce_loss(pred, labels)
                                               : mse_loss(pred, labels);

    // dL/dz per clip. For BCE the sigmoid cancels to (p-g)/T.
    Eigen::VectorXd dz(t_count);
    for (Eigen::Index t = 0; t < t_count; ++t) {
      const double g = labels[static_cast<std::size_t>(t)];
      if (loss_ == LossKind::bce)
        dz(t) = (p(t) - g) / static_cast<double>(t_count);
      else
        dz(t) = 2.0 * (p(t) - g) / static_cast<double>(t_count) * p(t) *
                (1.0 - p(t));
    }

    grad_w_ += merged.transpose() * dz;
    grad_b_ += dz.sum();
    if (train_gate()) {
      // dL/dA = (dz w^T) ⊙ X; gate grads via A(1-A) and the pre-activation.
      const Eigen::MatrixXd core =
          (dz * scorer_.head_weight.transpose()).cwiseProduct(x).cwiseProduct(
              a.cwiseProduct(Eigen::MatrixXd::Ones(a.rows(), a.cols()) - a));
      grad_bias_ += core.colwise().sum().transpose();
      grad_scale_ += core.cwiseProduct(x).colwise().sum().transpose();
    }
    ++accumulated_;
    return loss;
  }

  void step(double lr) {
    if (accumulated_ == 0) return;
    const double inv = 1.0 / accumulated_;
    ++step_count_;
    Eigen::VectorXd gw = grad_w_ * inv;
    adam_step(scorer_.head_weight, gw, w_state_, step_count_, lr);
    Eigen::VectorXd gb(1);
    gb(0) = grad_b_ * inv;
    Eigen::VectorXd bias_vec(1);
    bias_vec(0) = scorer_.head_bias;
    adam_step(bias_vec, gb, b_state_, step_count_, lr);
    scorer_.head_bias = bias_vec(0);
    if (train_gate()) {
      Eigen::VectorXd gs = grad_scale_ * inv;
      Eigen::VectorXd gg = grad_bias_ * inv;
      adam_step(scorer_.gate_scale, gs, scale_state_, step_count_, lr);
      adam_step(scorer_.gate_bias, gg, bias_state_, step_count_, lr);
      grad_scale_.setZero();
      grad_bias_.setZero();
    }
    grad_w_.setZero();
    grad_b_ = 0.0;
    accumulated_ = 0;
  }

 private:
  StreamScorer& scorer_;
  LossKind loss_;
  AdamState w_state_, b_state_, scale_state_, bias_state_;
  int step_count_ = 0;
  int accumulated_ = 0;
  Eigen::VectorXd grad_w_, grad_scale_, grad_bias_;
  double grad_b_ = 0.0;
};

const FeatureMap& require_map(const std::optional<FeatureMap>& map,
                              const std::string& what) {
  if (!map)
    throw ValidationError("fusion mode requires " + what + " features");
  return *map;
}

}  // namespace

TrainedModel train_model(const std::vector<TrainSample>& samples,
                         const FusionConfig& fusion, const TrainConfig& tc,
                         const std::string& attention_backbone_id,
                         TrainReport* report) {
  if (samples.empty()) throw ValidationError("empty training set");
  if (tc.epochs < 0) throw ValidationError("epochs must be >= 0");
  if (tc.batch_size < 1) throw ValidationError("batch_size must be >= 1");

  const bool need_visual = fusion.mode != FusionMode::audio_only;
  const bool need_audio = fusion.mode != FusionMode::visual_only;
  for (const auto& s : samples) {
    if (need_visual) require_map(s.visual, "visual");
    if (need_audio) require_map(s.audio, "audio");
    const auto& any = need_visual ? *s.visual : *s.audio;
    if (static_cast<std::size_t>(any.num_clips()) != s.clip_labels.size())
      throw ValidationError("pair '" + s.pair_id +
                            "': clip labels do not match feature rows");
  }

  auto scorer_cfg = [&](const char* tag, int dim) {
    AttentionScorerConfig cfg;
    cfg.attention_backbone_id = attention_backbone_id;
    cfg.input_dim = dim;
    cfg.seed = fnv1a64(tag, tc.seed);
    cfg.trainable_backbone = tc.train_backbone;
    return cfg;
  };

  TrainedModel model;
  model.fusion = fusion;

  // Inputs seen by each trained scorer, fixed across epochs.
  std::vector<const FeatureMap*> visual_inputs, audio_inputs;
  std::vector<FeatureMap> fused_inputs;
  if (fusion.mode == FusionMode::early) {
    for (const auto& s : samples)
      fused_inputs.push_back(fuse_early(*s.visual, *s.audio, fusion.beta));
  } else {
    for (const auto& s : samples) {
      if (need_visual) visual_inputs.push_back(&*s.visual);
      if (need_audio) audio_inputs.push_back(&*s.audio);
    }
  }

  struct Unit {
    StreamScorer* scorer;
    std::unique_ptr<ScorerTrainer> trainer;
    std::function<const FeatureMap&(std::size_t)> input;
  };
  std::vector<Unit> units;
  switch (fusion.mode) {
    case FusionMode::visual_only:
      model.visual_scorer =
          make_stream_scorer(scorer_cfg("visual", samples[0].visual->dim()));
      units.push_back(Unit{&*model.visual_scorer, nullptr,
                           [&](std::size_t i) -> const FeatureMap& {
                             return *visual_inputs[i];
                           }});
      break;
    case FusionMode::audio_only:
      model.audio_scorer =
          make_stream_scorer(scorer_cfg("audio", samples[0].audio->dim()));
      units.push_back(Unit{&*model.audio_scorer, nullptr,
                           [&](std::size_t i) -> const FeatureMap& {
                             return *audio_inputs[i];
                           }});
      break;
    case FusionMode::late:
      model.visual_scorer =
          make_stream_scorer(scorer_cfg("visual", samples[0].visual->dim()));
      model.audio_scorer =
          make_stream_scorer(scorer_cfg("audio", samples[0].audio->dim()));
      units.push_back(Unit{&*model.visual_scorer, nullptr,
                           [&](std::size_t i) -> const FeatureMap& {
                             return *visual_inputs[i];
                           }});
      units.push_back(Unit{&*model.audio_scorer, nullptr,
                           [&](std::size_t i) -> const FeatureMap& {
                             return *audio_inputs[i];
                           }});
      break;
    case FusionMode::early:
      model.fused_scorer =
          make_stream_scorer(scorer_cfg("fused", fused_inputs[0].dim()));
      units.push_back(Unit{&*model.fused_scorer, nullptr,
                           [&](std::size_t i) -> const FeatureMap& {
                             return fused_inputs[i];
                           }});
      break;
  }
  for (auto& u : units)
    u.trainer = std::make_unique<ScorerTrainer>(*u.scorer, tc.loss);

  TrainReport local_report;
  local_report.seed = tc.seed;
  std::mt19937_64 order_rng(fnv1a64("epoch-order", tc.seed));
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < tc.epochs; ++epoch) {
    seeded_shuffle(order, order_rng);
    double epoch_loss = 0.0;
    for (std::size_t step = 0; step < order.size(); ++step) {
      const std::size_t i = order[step];
      double video_loss = 0.0;
      for (auto& u : units)
        video_loss +=
            u.trainer->accumulate(u.input(i), samples[i].clip_labels);
      video_loss /= static_cast<double>(units.size());
      if (!std::isfinite(video_loss))
        throw ValidationError(
            "non-finite loss at epoch " + std::to_string(epoch) + ", pair '" +
            samples[i].pair_id + "'");
      epoch_loss += video_loss;
      const bool batch_full = (step + 1) % static_cast<std::size_t>(
                                               tc.batch_size) == 0 ||
                              step + 1 == order.size();
      if (batch_full)
        for (auto& u : units) u.trainer->step(tc.learning_rate);
    }
    local_report.epoch_mean_loss.push_back(epoch_loss / samples.size());
  }
  local_report.final_loss = local_report.epoch_mean_loss.empty()
                                ? 0.0
                                : local_report.epoch_mean_loss.back();
  if (report) *report = std::move(local_report);
  return model;
}

std::vector<double> predict_clip_scores(
    const TrainedModel& model, const std::optional<FeatureMap>& visual,
    const std::optional<FeatureMap>& audio) {
  switch (model.fusion.mode) {
    case FusionMode::visual_only:
      if (!model.visual_scorer)
        throw ValidationError("model has no visual scorer");
      return score_stream(require_map(visual, "visual"),
                          *model.visual_scorer)
          .scores;
    case FusionMode::audio_only:
      if (!model.audio_scorer)
        throw ValidationError("model has no audio scorer");
      return score_stream(require_map(audio, "audio"), *model.audio_scorer)
          .scores;
    case FusionMode::late: {
      if (!model.visual_scorer || !model.audio_scorer)
        throw ValidationError("late fusion model is missing a scorer");
      const auto iv = score_stream(require_map(visual, "visual"),
                                   *model.visual_scorer);
      const auto ia =
          score_stream(require_map(audio, "audio"), *model.audio_scorer);
      return fuse_late(iv.scores, ia.scores, model.fusion.alpha);
    }
    case FusionMode::early: {
      if (!model.fused_scorer)
        throw ValidationError("early fusion model is missing its scorer");
      const FeatureMap fused =
          fuse_early(require_map(visual, "visual"),
                     require_map(audio, "audio"), model.fusion.beta);
      return score_stream(fused, *model.fused_scorer).scores;
    }
  }
  throw ValidationError("unreachable fusion mode");
}

void save_checkpoint(const TrainedModel& model,
                     const nlohmann::json& metadata,
                     const std::filesystem::path& path) {
  nlohmann::json j{
      {"format", "adclip-checkpoint-v1"},
      {"fusion",
       {{"mode", to_string(model.fusion.mode)},
        {"alpha", model.fusion.alpha},
        {"beta", model.fusion.beta}}},
      {"metadata", metadata}};
  j["scorers"] = nlohmann::json::object();
  if (model.visual_scorer)
    j["scorers"]["visual"] = model.visual_scorer->to_json();
  if (model.audio_scorer)
    j["scorers"]["audio"] = model.audio_scorer->to_json();
  if (model.fused_scorer)
    j["scorers"]["fused"] = model.fused_scorer->to_json();
  atomic_write_file(path, j.dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("checkpoint parse failure in " + path.string() +
                          ": " + e.what());
  }
  if (j.value("format", "") != "adclip-checkpoint-v1")
    throw ValidationError("not an adclip checkpoint: " + path.string());
  Checkpoint ck;
  ck.model.fusion.mode =
      fusion_mode_from_string(j.at("fusion").at("mode").get<std::string>());
  ck.model.fusion.alpha = j.at("fusion").at("alpha").get<double>();
  ck.model.fusion.beta = j.at("fusion").at("beta").get<double>();
  const auto& scorers = j.at("scorers");
  if (scorers.contains("visual"))
    ck.model.visual_scorer = StreamScorer::from_json(scorers.at("visual"));
  if (scorers.contains("audio"))
    ck.model.audio_scorer = StreamScorer::from_json(scorers.at("audio"));
  if (scorers.contains("fused"))
    ck.model.fused_scorer = StreamScorer::from_json(scorers.at("fused"));
  ck.metadata = j.value("metadata", nlohmann::json::object());
  return ck;
}

}  // namespace adclip
