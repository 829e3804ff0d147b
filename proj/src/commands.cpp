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

#include "adclip/commands.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "adclip/audio.hpp"
#include "adclip/boundaries.hpp"
#include "adclip/cross_validation.hpp"
#include "adclip/dataset.hpp"
#include "adclip/errors.hpp"
#include "adclip/frames.hpp"
#include "adclip/sampling.hpp"
#include "adclip/selection.hpp"
#include "adclip/shot_match.hpp"
#include "adclip/util.hpp"

namespace adclip {

namespace {

using nlohmann::json;

struct SourceVideo {
  std::string video_id;
  std::string file;
  double fps = 0.0;
  std::string boundary_probs;
};

struct SourcePair {
  std::string pair_id;
  SourceVideo long_video;
  SourceVideo short_video;
};

SourceVideo source_video_from_json(const json& j) {
  SourceVideo v;
  v.video_id = j.at("video_id").get<std::string>();
  v.file = j.at("file").get<std::string>();
  v.fps = j.value("fps", 0.0);
  v.boundary_probs = j.at("boundary_probs").get<std::string>();
  return v;
}

std::vector<SourcePair> load_sources(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("sources parse failure in " + path.string() + ": " +
                          e.what());
  }
  if (!doc.is_array())
    throw ValidationError("sources file must be a top-level list");
  std::vector<SourcePair> pairs;
  for (const auto& item : doc) {
    try {
      pairs.push_back(SourcePair{item.at("pair_id").get<std::string>(),
                                 source_video_from_json(item.at("long")),
                                 source_video_from_json(item.at("short"))});
    } catch (const json::exception& e) {
      throw ValidationError(std::string("sources field error: ") + e.what());
    }
  }
  return pairs;
}

struct PreparedVideo {
  std::shared_ptr<FrameSource> frames;
  std::vector<double> probs;  // per presented frame
  double fps = 0.0;
};

// Opens the footage and aligns its boundary probabilities, optionally
// through frame-accurate resampling to the target rate. When resampling, a
// source frame's probability lands on its nearest target frame (max when
// several collide) so no boundary spike is lost.
PreparedVideo prepare_video(const SourceVideo& src, bool standardize,
                            double target_fps) {
  PreparedVideo out;
  auto frames = open_frame_source(src.file, src.fps);
  std::vector<double> probs = load_boundary_probs(src.boundary_probs);
  if (static_cast<int>(probs.size()) != frames->frame_count())
    throw ValidationError("video '" + src.video_id + "': " +
                          std::to_string(probs.size()) +
                          " boundary probabilities for " +
                          std::to_string(frames->frame_count()) + " frames");
  if (standardize && std::abs(frames->fps() - target_fps) > 1e-9) {
    auto resampled =
        std::make_shared<ResampledFrameSource>(frames, target_fps);
    std::vector<double> remapped(
        static_cast<std::size_t>(resampled->frame_count()), 0.0);
    const double ratio = target_fps / frames->fps();
    for (std::size_t s = 0; s < probs.size(); ++s) {
      auto t = static_cast<std::int64_t>(std::lround(s * ratio));
      t = std::clamp<std::int64_t>(t, 0, resampled->frame_count() - 1);
      remapped[static_cast<std::size_t>(t)] =
          std::max(remapped[static_cast<std::size_t>(t)], probs[s]);
    }
    out.frames = std::move(resampled);
    out.probs = std::move(remapped);
    out.fps = target_fps;
  } else {
    out.fps = frames->fps();
    out.frames = std::move(frames);
    out.probs = std::move(probs);
  }
  return out;
}

std::string threshold_suffix(double t) {
  std::ostringstream ss;
  ss << t;
  return ss.str();
}

json args_fingerprint_json(const BuildDatasetArgs& a) {
  return json{{"thresholds", a.thresholds},
              {"similarity_floor", a.similarity_floor},
              {"standardize_fps", a.standardize_fps},
              {"target_fps", a.target_fps},
              {"k_folds", a.k_folds},
              {"seed", a.seed}};
}

VideoRef make_video_ref(const SourceVideo& src, const PreparedVideo& v,
                        std::vector<Shot> shots) {
  VideoRef ref;
  ref.video_id = src.video_id;
  ref.file = src.file;
  ref.fps = v.fps;
  ref.frame_count = v.frames->frame_count();
  ref.shots = std::move(shots);
  return ref;
}

// The manifest may describe footage at a standardized rate that differs
// from the stored file; re-derive the same resampled view when so. A frame
// directory carries no rate of its own, so its source rate is recovered
// from the frame-count ratio.
std::shared_ptr<FrameSource> open_manifest_frames(const VideoRef& video) {
  auto frames = open_frame_source(video.file, video.fps);
  if (frames->frame_count() == video.frame_count) return frames;
  if (std::filesystem::is_directory(video.file)) {
    const double source_fps =
        video.fps * frames->frame_count() / video.frame_count;
    frames = open_frame_source(video.file, source_fps);
  }
  auto resampled =
      std::make_shared<ResampledFrameSource>(std::move(frames), video.fps);
  if (resampled->frame_count() != video.frame_count)
    throw ValidationError("video '" + video.video_id + "': footage has " +
                          std::to_string(resampled->frame_count()) +
                          " frames at manifest fps, manifest says " +
                          std::to_string(video.frame_count));
  return resampled;
}

std::vector<std::uint8_t> clip_labels_for(const AdPair& pair,
                                          const ClipSet& clips) {
  const FrameLabels labels = labels_from_mapping(pair);
  std::vector<std::uint8_t> out;
  out.reserve(clips.clips.size());
  for (const Clip& c : clips.clips)
    out.push_back(labels.values[static_cast<std::size_t>(c.focal_frame)]);
  return out;
}

bool needs_visual(const RunConfig& cfg) {
  return cfg.fusion_mode != "audio_only";
}
bool needs_audio(const RunConfig& cfg) {
  return cfg.fusion_mode != "visual_only";
}

std::filesystem::path scores_path(const std::filesystem::path& dir,
                                  const std::string& pair_id) {
  return dir / (encode_component(pair_id) + ".scores.json");
}

json load_scores_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("score file parse failure in " + path.string() +
                          ": " + e.what());
  }
}

void print_cache_warnings(FeatureCache& cache) {
  for (const auto& w : cache.take_warnings())
    std::cerr << "warning: " << w << "\n";
}

json checkpoint_metadata(const RunConfig& cfg) {
  return json{{"config", cfg.to_json()},
              {"config_fingerprint", cfg.fingerprint()},
              {"backends",
               {{"visual", cfg.visual_backend},
                {"audio", cfg.audio_backend}}},
              {"attention_backbone", cfg.attention_backbone},
              {"stride", cfg.stride},
              {"hws", cfg.hws}};
}

}  // namespace

TrainSample assemble_sample(const AdPair& pair, const RunConfig& cfg,
                            FeatureCache& cache, bool need_visual,
                            bool need_audio) {
  const VideoRef& video = pair.long_video;
  const ClipSet clips = make_clip_set(video, cfg.stride, cfg.hws);

  TrainSample sample;
  sample.pair_id = pair.pair_id;

  if (need_visual) {
    const auto spec = parse_backend_spec(cfg.visual_backend, Stream::visual);
    const FeatureCacheKey key{video.video_id, spec.backend_id, cfg.stride,
                              cfg.hws};
    auto cached = cache.get(key);
    if (!cached) {
      const auto frames = open_manifest_frames(video);
      cached = embed_visual(clips, *frames, spec);
      cache.put(key, *cached);
    }
    sample.visual = std::move(*cached);
    if (cfg.normalize_features) zscore_per_video(*sample.visual);
  }

  if (need_audio) {
    const auto spec = parse_backend_spec(cfg.audio_backend, Stream::audio);
    const FeatureCacheKey key{video.video_id, spec.backend_id, cfg.stride,
                              cfg.hws};
    const double duration = video.frame_count / video.fps;
    auto cached = cache.get(key);
    if (!cached) {
      const ResolvedAudio audio = resolve_audio(video.file, duration);
      cached = embed_audio(clips, *audio.source, spec);
      cache.put(key, *cached);
      sample.audio_silent = audio.silence_substituted;
    } else {
      // Same condition resolve_audio would use; cheap and cache-stable.
      sample.audio_silent =
          resolve_audio(video.file, duration).silence_substituted;
    }
    sample.audio = std::move(*cached);
    if (cfg.normalize_features) zscore_per_video(*sample.audio);
  }

  if (pair.mapping) sample.clip_labels = clip_labels_for(pair, clips);
  return sample;
}

void cmd_build_dataset(const BuildDatasetArgs& args) {
  if (args.thresholds.empty())
    throw ValidationError("build-dataset needs at least one threshold");
  const auto sources = load_sources(args.sources);
  if (sources.empty()) throw ValidationError("sources file lists no pairs");

  struct PairOutput {
    std::vector<AdPair> per_threshold;
    std::vector<std::vector<ReviewEntry>> reviews;
  };
  std::vector<PairOutput> outputs(sources.size());

  parallel_for(sources.size(), args.jobs, [&](std::size_t i) {
    const SourcePair& sp = sources[i];
    const PreparedVideo long_v =
        prepare_video(sp.long_video, args.standardize_fps, args.target_fps);
    const PreparedVideo short_v =
        prepare_video(sp.short_video, args.standardize_fps, args.target_fps);
    MatchOptions match_opts;
    match_opts.review_floor = args.similarity_floor;
    for (double threshold : args.thresholds) {
      auto long_shots = boundaries_from_probabilities(long_v.probs, threshold);
      auto short_shots =
          boundaries_from_probabilities(short_v.probs, threshold);
      MatchResult match = match_shots(short_shots, *short_v.frames,
                                      long_shots, *long_v.frames, match_opts);
      AdPair pair;
      pair.pair_id = sp.pair_id;
      pair.long_video =
          make_video_ref(sp.long_video, long_v, std::move(long_shots));
      pair.short_video =
          make_video_ref(sp.short_video, short_v, std::move(short_shots));
      pair.mapping = std::move(match.mapping);
      validate_pair(pair);
      outputs[i].per_threshold.push_back(std::move(pair));
      outputs[i].reviews.push_back(std::move(match.review));
    }
  });

  const bool sweep = args.thresholds.size() > 1;
  const std::string fp =
      to_hex(fnv1a64(args_fingerprint_json(args).dump()));
  for (std::size_t t = 0; t < args.thresholds.size(); ++t) {
    std::vector<AdPair> manifest;
    json review_entries = json::array();
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      manifest.push_back(outputs[i].per_threshold[t]);
      for (const auto& r : outputs[i].reviews[t])
        review_entries.push_back({{"pair_id", sources[i].pair_id},
                                  {"short_shot_id", r.short_shot_id},
                                  {"long_shot_id", r.long_shot_id},
                                  {"similarity", r.similarity}});
    }
    std::filesystem::path manifest_path = args.out_manifest;
    if (sweep) {
      manifest_path = args.out_manifest;
      manifest_path += ".t" + threshold_suffix(args.thresholds[t]);
    }
    save_manifest(manifest, manifest_path);
    std::filesystem::path review_path =
        args.review_report.empty()
            ? std::filesystem::path(manifest_path.string() + ".review.json")
            : std::filesystem::path(args.review_report +
                                    (sweep ? ".t" + threshold_suffix(
                                                         args.thresholds[t])
                                           : ""));
    const json review{{"config_fingerprint", fp},
                      {"threshold", args.thresholds[t]},
                      {"similarity_floor", args.similarity_floor},
                      {"entries", review_entries}};
    atomic_write_file(review_path, review.dump(2) + "\n");
    std::cout << "wrote " << manifest_path.string() << " ("
              << manifest.size() << " pairs, " << review_entries.size()
              << " flagged for review)\n";
  }

  if (!args.folds_out.empty()) {
    std::vector<std::string> ids;
    for (const auto& sp : sources) ids.push_back(sp.pair_id);
    const FoldSplit split = make_folds(std::move(ids), args.k_folds, args.seed);
    const json folds{{"config_fingerprint", fp},
                     {"k", args.k_folds},
                     {"seed", args.seed},
                     {"folds", split.folds}};
    atomic_write_file(args.folds_out, folds.dump(2) + "\n");
  }
}

void cmd_extract(const RunConfig& cfg) {
  const auto pairs = load_manifest(cfg.manifest);
  FeatureCache cache(cfg.cache_dir);
  const bool v = needs_visual(cfg), a = needs_audio(cfg);
  parallel_for(pairs.size(), cfg.jobs, [&](std::size_t i) {
    assemble_sample(pairs[i], cfg, cache, v, a);
  });
  print_cache_warnings(cache);
  std::cout << "extracted features for " << pairs.size() << " pairs into "
            << cfg.cache_dir << "\n";
}

void cmd_train(const RunConfig& cfg,
               const std::filesystem::path& checkpoint_out,
               const std::filesystem::path& report_out) {
  const auto pairs = load_manifest(cfg.manifest);
  FeatureCache cache(cfg.cache_dir);
  const bool v = needs_visual(cfg), a = needs_audio(cfg);
  std::vector<TrainSample> samples(pairs.size());
  parallel_for(pairs.size(), cfg.jobs, [&](std::size_t i) {
    if (!pairs[i].mapping)
      throw ValidationError("pair '" + pairs[i].pair_id +
                            "' has no mapping; training needs labels");
    samples[i] = assemble_sample(pairs[i], cfg, cache, v, a);
  });
  print_cache_warnings(cache);

  TrainReport report;
  const TrainedModel model =
      train_model(samples, cfg.fusion_config(), cfg.train_config(),
                  cfg.attention_backbone, &report);
  save_checkpoint(model, checkpoint_metadata(cfg), checkpoint_out);
  const json report_json{{"config_fingerprint", cfg.fingerprint()},
                         {"seed", report.seed},
                         {"epoch_mean_loss", report.epoch_mean_loss},
                         {"final_loss", report.final_loss}};
  atomic_write_file(report_out, report_json.dump(2) + "\n");
  std::cout << "trained on " << samples.size() << " pairs; final loss "
            << report.final_loss << "; checkpoint "
            << checkpoint_out.string() << "\n";
}

void cmd_predict(const RunConfig& cfg,
                 const std::filesystem::path& checkpoint_path,
                 const std::filesystem::path& scores_dir) {
  const Checkpoint ck = load_checkpoint(checkpoint_path);
  const std::string want_fp = cfg.fingerprint();
  const std::string have_fp =
      ck.metadata.value("config_fingerprint", std::string{});
  if (have_fp != want_fp)
    throw ValidationError(
        "config fingerprint mismatch between checkpoint (" + have_fp +
        ") and prediction config (" + want_fp + ")");
  if (ck.metadata.contains("backends")) {
    const auto& b = ck.metadata.at("backends");
    if (b.value("visual", "") != cfg.visual_backend ||
        b.value("audio", "") != cfg.audio_backend)
      throw ValidationError("checkpoint was trained with different backends");
  }

  const auto pairs = load_manifest(cfg.manifest);
  FeatureCache cache(cfg.cache_dir);
  const bool v = ck.model.fusion.mode != FusionMode::audio_only;
  const bool a = ck.model.fusion.mode != FusionMode::visual_only;
  std::filesystem::create_directories(scores_dir);
  parallel_for(pairs.size(), cfg.jobs, [&](std::size_t i) {
    const AdPair& pair = pairs[i];
    const TrainSample sample = assemble_sample(pair, cfg, cache, v, a);
    const auto clip_scores =
        predict_clip_scores(ck.model, sample.visual, sample.audio);
    const auto frame_scores = expand_to_frames(clip_scores, cfg.stride,
                                               pair.long_video.frame_count);
    const json doc{{"pair_id", pair.pair_id},
                   {"config_fingerprint", want_fp},
                   {"stride", cfg.stride},
                   {"frame_count", pair.long_video.frame_count},
                   {"audio_silent", sample.audio_silent},
                   {"clip_scores", clip_scores},
                   {"frame_scores", frame_scores}};
    atomic_write_file(scores_path(scores_dir, pair.pair_id),
                      doc.dump(2) + "\n");
  });
  print_cache_warnings(cache);
  std::cout << "wrote scores for " << pairs.size() << " pairs to "
            << scores_dir.string() << "\n";
}

void cmd_clip(const RunConfig& cfg, const std::filesystem::path& scores_dir,
              const std::filesystem::path& out_dir, bool do_assemble,
              const std::string& ffmpeg_binary) {
  const auto pairs = load_manifest(cfg.manifest);
  std::filesystem::create_directories(out_dir);
  // Cut lists are the canonical artifact: write all of them before any
  // assembly so a missing toolchain cannot leave them incomplete.
  std::vector<std::pair<const AdPair*, json>> cut_lists;
  for (const auto& pair : pairs) {
    const auto path = scores_path(scores_dir, pair.pair_id);
    if (!std::filesystem::exists(path))
      throw ValidationError("no score file for pair '" + pair.pair_id +
                            "': " + path.string());
    const json scores = load_scores_file(path);
    if (scores.value("config_fingerprint", "") != cfg.fingerprint())
      throw ValidationError("score file " + path.string() +
                            " carries a different config fingerprint");
    const auto frame_scores =
        scores.at("frame_scores").get<std::vector<double>>();
    const auto shot_scores = aggregate_shot_scores(
        frame_scores, pair.long_video.shots, pair.long_video.fps);
    const SelectionResult sel =
        select_shots(shot_scores, cfg.budget_seconds);
    json cut_list = emit_cut_list(sel, pair);
    cut_list["config_fingerprint"] = cfg.fingerprint();
    const auto cut_path =
        out_dir / (encode_component(pair.pair_id) + ".cuts.json");
    atomic_write_file(cut_path, cut_list.dump(2) + "\n");
    cut_lists.emplace_back(&pair, std::move(cut_list));
  }
  std::cout << "wrote " << cut_lists.size() << " cut lists to "
            << out_dir.string() << "\n";
  if (!do_assemble) return;
  for (const auto& [pair, cut_list] : cut_lists) {
    const auto out_file =
        out_dir / (encode_component(pair->pair_id) + ".clip.mp4");
    assemble(cut_list, pair->long_video, out_file, ffmpeg_binary);
    std::cout << "assembled " << out_file.string() << "\n";
  }
}

void cmd_evaluate(const RunConfig& cfg,
                  const std::filesystem::path& scores_dir,
                  const std::filesystem::path& report_out, bool positional) {
  const auto pairs = load_manifest(cfg.manifest);
  std::vector<VideoEval> evals;
  for (const auto& pair : pairs) {
    const auto path = scores_path(scores_dir, pair.pair_id);
    if (!std::filesystem::exists(path))
      throw ValidationError("no score file for pair '" + pair.pair_id +
                            "': " + path.string());
    const json scores = load_scores_file(path);
    if (scores.value("config_fingerprint", "") != cfg.fingerprint())
      throw ValidationError("score file " + path.string() +
                            " carries a different config fingerprint");
    const auto frame_scores =
        scores.at("frame_scores").get<std::vector<double>>();
    VideoEval ev =
        evaluate_video(pair, frame_scores, cfg.budget_seconds, positional);
    ev.audio_silent = scores.value("audio_silent", false);
    evals.push_back(std::move(ev));
  }
  CVReport report;  // single-group layout reused for the flat evaluation
  report.positional = positional;
  report.config_fingerprint = cfg.fingerprint();
  report.videos = evals;
  report.fold_means.push_back(aggregate_videos(evals));
  report.grand_mean = report.fold_means.front();
  json doc = report.to_json();
  doc["protocol"] = "flat";
  atomic_write_file(report_out, doc.dump(2) + "\n");
  std::cout << "wrote evaluation report " << report_out.string() << "\n";
}

void cmd_evaluate_cv(const RunConfig& cfg,
                     const std::filesystem::path& report_out,
                     bool positional) {
  const auto pairs = load_manifest(cfg.manifest);
  for (const auto& p : pairs)
    if (!p.mapping)
      throw ValidationError("pair '" + p.pair_id +
                            "' has no mapping; cross-validation needs labels");
  const FoldSplit folds = make_folds(pairs, 5, cfg.seed);
  FeatureCache cache(cfg.cache_dir);
  const bool v = needs_visual(cfg), a = needs_audio(cfg);
  const SampleProvider provider = [&](const AdPair& pair) {
    return assemble_sample(pair, cfg, cache, v, a);
  };
  const CVReport report = run_cross_validation(
      pairs, folds, cfg.fusion_config(), cfg.train_config(),
      cfg.attention_backbone, cfg.stride, cfg.budget_seconds, provider,
      positional, cfg.fingerprint());
  print_cache_warnings(cache);
  json doc = report.to_json();
  doc["protocol"] = "five-fold cross-validation";
  atomic_write_file(report_out, doc.dump(2) + "\n");
  std::cout << "wrote cross-validation report " << report_out.string()
            << "\n";
}

}  // namespace adclip
