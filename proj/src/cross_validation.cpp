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

#include "adclip/cross_validation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "adclip/errors.hpp"
#include "adclip/selection.hpp"

namespace adclip {

namespace {

nlohmann::json metric_json(const MetricValue& m) {
  if (!m.defined) return nullptr;
  return m.value;
}

// AP over the frames of a subset of shots.
MetricValue subset_ap(const std::vector<double>& frame_scores,
                      const FrameLabels& labels,
                      const std::vector<Shot>& shots,
                      const std::function<bool(const Shot&)>& keep) {
  std::vector<double> scores;
  std::vector<std::uint8_t> subset_labels;
  for (const Shot& s : shots) {
    if (!keep(s)) continue;
    for (int f = s.start_frame; f <= s.end_frame; ++f) {
      scores.push_back(frame_scores[static_cast<std::size_t>(f)]);
      subset_labels.push_back(labels.values[static_cast<std::size_t>(f)]);
    }
  }
  if (scores.empty()) return {};
  return average_precision(scores, subset_labels);
}

struct MeanAcc {
  double sum = 0.0;
  int count = 0;
  void add(const MetricValue& m) {
    if (m.defined) {
      sum += m.value;
      ++count;
    }
  }
  MetricValue mean() const {
    if (count == 0) return {};
    return {sum / count, true};
  }
};

}  // namespace

VideoEval evaluate_video(const AdPair& pair,
                         const std::vector<double>& frame_scores,
                         double budget_seconds, bool positional) {
  const FrameLabels labels = labels_from_mapping(pair);
  if (labels.values.size() != frame_scores.size())
    throw ValidationError("pair '" + pair.pair_id +
                          "': frame scores do not cover the video");
  VideoEval ev;
  ev.pair_id = pair.pair_id;
  ev.ap = average_precision(frame_scores, labels.values);
  ev.auc = auroc(frame_scores, labels.values);
  std::vector<double> reference(labels.values.begin(), labels.values.end());
  ev.rho = spearman(frame_scores, reference);
  ev.tau = kendall(frame_scores, reference);

  const auto shot_scores = aggregate_shot_scores(
      frame_scores, pair.long_video.shots, pair.long_video.fps);
  const auto selection = select_shots(shot_scores, budget_seconds);
  ev.shot = shot_retrieval_metrics(selection, *pair.mapping);

  if (positional) {
    const double mid = pair.long_video.frame_count / 2.0;
    ev.ap_first_half =
        subset_ap(frame_scores, labels, pair.long_video.shots,
                  [mid](const Shot& s) {
                    return (s.start_frame + s.end_frame) / 2.0 < mid;
                  });
    ev.ap_second_half =
        subset_ap(frame_scores, labels, pair.long_video.shots,
                  [mid](const Shot& s) {
                    return (s.start_frame + s.end_frame) / 2.0 >= mid;
                  });
  }
  return ev;
}

AggregateMetrics aggregate_videos(const std::vector<VideoEval>& videos) {
  AggregateMetrics agg;
  MeanAcc ap, auc, rho, tau;
  for (const auto& v : videos) {
    ap.add(v.ap);
    auc.add(v.auc);
    rho.add(v.rho);
    tau.add(v.tau);
    agg.ap_undefined += v.ap.defined ? 0 : 1;
    agg.auc_undefined += v.auc.defined ? 0 : 1;
    agg.rho_undefined += v.rho.defined ? 0 : 1;
    agg.tau_undefined += v.tau.defined ? 0 : 1;
    agg.precision += v.shot.precision;
    agg.recall += v.shot.recall;
    agg.f1 += v.shot.f1;
  }
  agg.videos = static_cast<int>(videos.size());
  agg.ap = ap.mean();
  agg.auc = auc.mean();
  agg.rho = rho.mean();
  agg.tau = tau.mean();
  if (agg.videos > 0) {
    agg.precision /= agg.videos;
    agg.recall /= agg.videos;
    agg.f1 /= agg.videos;
  }
  return agg;
}

AggregateMetrics aggregate_folds(const std::vector<AggregateMetrics>& folds) {
  AggregateMetrics grand;
  MeanAcc ap, auc, rho, tau;
  for (const auto& f : folds) {
    ap.add(f.ap);
    auc.add(f.auc);
    rho.add(f.rho);
    tau.add(f.tau);
    grand.ap_undefined += f.ap_undefined;
    grand.auc_undefined += f.auc_undefined;
    grand.rho_undefined += f.rho_undefined;
    grand.tau_undefined += f.tau_undefined;
    grand.precision += f.precision;
    grand.recall += f.recall;
    grand.f1 += f.f1;
    grand.videos += f.videos;
  }
  grand.ap = ap.mean();
  grand.auc = auc.mean();
  grand.rho = rho.mean();
  grand.tau = tau.mean();
  if (!folds.empty()) {
    grand.precision /= static_cast<double>(folds.size());
    grand.recall /= static_cast<double>(folds.size());
    grand.f1 /= static_cast<double>(folds.size());
  }
  return grand;
}

nlohmann::json AggregateMetrics::to_json() const {
  return nlohmann::json{
      {"ap", metric_json(ap)},
      {"auroc", metric_json(auc)},
      {"spearman", metric_json(rho)},
      {"kendall", metric_json(tau)},
      {"precision", precision},
      {"recall", recall},
      {"f1", f1},
      {"videos", videos},
      {"undefined",
       {{"ap", ap_undefined},
        {"auroc", auc_undefined},
        {"spearman", rho_undefined},
        {"kendall", tau_undefined}}}};
}

nlohmann::json CVReport::to_json() const {
  nlohmann::json vids = nlohmann::json::array();
  for (const auto& v : videos) {
    nlohmann::json row{{"pair_id", v.pair_id},
                       {"fold", v.fold},
                       {"ap", metric_json(v.ap)},
                       {"auroc", metric_json(v.auc)},
                       {"spearman", metric_json(v.rho)},
                       {"kendall", metric_json(v.tau)},
                       {"tp", v.shot.tp},
                       {"fp", v.shot.fp},
                       {"fn", v.shot.fn},
                       {"precision", v.shot.precision},
                       {"recall", v.shot.recall},
                       {"f1", v.shot.f1},
                       {"audio_silent", v.audio_silent}};
    if (positional) {
      row["ap_first_half"] = metric_json(v.ap_first_half);
      row["ap_second_half"] = metric_json(v.ap_second_half);
    }
    vids.push_back(std::move(row));
  }
  nlohmann::json fold_means_json = nlohmann::json::array();
  for (const auto& f : fold_means) fold_means_json.push_back(f.to_json());
  return nlohmann::json{{"config_fingerprint", config_fingerprint},
                        {"kendall_variant", "tau-b"},
                        {"videos", vids},
                        {"fold_means", fold_means_json},
                        {"grand_mean", grand_mean.to_json()}};
}

CVReport run_cross_validation(const std::vector<AdPair>& pairs,
                              const FoldSplit& folds,
                              const FusionConfig& fusion,
                              const TrainConfig& tc,
                              const std::string& attention_backbone,
                              int stride, double budget_seconds,
                              const SampleProvider& provider, bool positional,
                              const std::string& config_fingerprint) {
  std::map<std::string, const AdPair*> by_id;
  for (const auto& p : pairs) by_id[p.pair_id] = &p;
  std::set<std::string> seen;
  for (const auto& fold : folds.folds) {
    if (fold.empty())
      throw ValidationError("cross-validation fold with zero pairs");
    for (const auto& id : fold) {
      if (!by_id.count(id))
        throw ValidationError("fold references unknown pair: " + id);
      if (!seen.insert(id).second)
        throw ValidationError("pair in more than one fold: " + id);
    }
  }
  if (seen.size() != pairs.size())
    throw ValidationError("folds do not cover the manifest");

  // Features are reused across the 4-of-5 training sets; assemble once.
  std::map<std::string, TrainSample> samples;
  for (const auto& p : pairs) samples.emplace(p.pair_id, provider(p));

  CVReport report;
  report.positional = positional;
  report.config_fingerprint = config_fingerprint;
  for (std::size_t fold_idx = 0; fold_idx < folds.folds.size(); ++fold_idx) {
    const std::set<std::string> held_out(folds.folds[fold_idx].begin(),
                                         folds.folds[fold_idx].end());
    std::vector<TrainSample> train_set;
    for (const auto& p : pairs)
      if (!held_out.count(p.pair_id)) train_set.push_back(samples[p.pair_id]);

    const TrainedModel model =
        train_model(train_set, fusion, tc, attention_backbone);

    std::vector<VideoEval> fold_videos;
    for (const auto& id : folds.folds[fold_idx]) {
      const AdPair& pair = *by_id[id];
      const TrainSample& s = samples[id];
      const auto clip_scores = predict_clip_scores(model, s.visual, s.audio);
      const auto frame_scores =
          expand_to_frames(clip_scores, stride, pair.long_video.frame_count);
      VideoEval ev =
          evaluate_video(pair, frame_scores, budget_seconds, positional);
      ev.fold = static_cast<int>(fold_idx);
      ev.audio_silent = s.audio_silent;
      fold_videos.push_back(std::move(ev));
    }
    report.fold_means.push_back(aggregate_videos(fold_videos));
    for (auto& v : fold_videos) report.videos.push_back(std::move(v));
  }
  report.grand_mean = aggregate_folds(report.fold_means);
  return report;
}

}  // namespace adclip
