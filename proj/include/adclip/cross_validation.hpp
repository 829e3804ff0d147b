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

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adclip/dataset.hpp"
#include "adclip/metrics.hpp"
#include "adclip/model.hpp"

namespace adclip {

// Frame-level and shot-level evaluation of one video's predictions against
// its mapping-derived ground truth.
struct VideoEval {
  std::string pair_id;
  int fold = -1;
  MetricValue ap, auc, rho, tau;
  ShotRetrieval shot;
  bool audio_silent = false;
  // Positional breakdown (first-half vs second-half shots), optional.
  MetricValue ap_first_half, ap_second_half;
};

VideoEval evaluate_video(const AdPair& pair,
                         const std::vector<double>& frame_scores,
                         double budget_seconds, bool positional);

// Means over defined values only; undefined occurrences are counted, never
// averaged in as zeros.
struct AggregateMetrics {
  MetricValue ap, auc, rho, tau;
  int ap_undefined = 0, auc_undefined = 0, rho_undefined = 0,
      tau_undefined = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  int videos = 0;

  nlohmann::json to_json() const;
};

AggregateMetrics aggregate_videos(const std::vector<VideoEval>& videos);
// Grand mean = mean of fold means; a fold with no defined value for a
// metric drops out of that metric's grand mean.
AggregateMetrics aggregate_folds(const std::vector<AggregateMetrics>& folds);

struct CVReport {
  std::vector<VideoEval> videos;
  std::vector<AggregateMetrics> fold_means;
  AggregateMetrics grand_mean;
  std::string config_fingerprint;
  bool positional = false;

  nlohmann::json to_json() const;
};

// Feature/label assembly for one pair; typically backed by the feature
// cache.
using SampleProvider = std::function<TrainSample(const AdPair&)>;

// Trains on four folds, evaluates per-video on the held-out fold, repeats
// for every fold, and averages. Folds run sequentially; the result is fully
// deterministic for a fixed seed.
CVReport run_cross_validation(const std::vector<AdPair>& pairs,
                              const FoldSplit& folds,
                              const FusionConfig& fusion,
                              const TrainConfig& tc,
                              const std::string& attention_backbone,
                              int stride, double budget_seconds,
                              const SampleProvider& provider, bool positional,
                              const std::string& config_fingerprint);

}  // namespace adclip
