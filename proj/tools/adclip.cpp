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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adclip/commands.hpp"
#include "adclip/config.hpp"
#include "adclip/errors.hpp"

namespace {

// Effective config: defaults, then config file, then flags, then the cache
// directory environment override.
struct ConfigCli {
  std::string config_file;
  adclip::RunConfig flags;  // flag values land here
  CLI::App* app = nullptr;

  void attach(CLI::App& cmd) {
    app = &cmd;
    cmd.add_option("--config", config_file, "JSON config file");
    cmd.add_option("--manifest", flags.manifest, "dataset manifest");
    cmd.add_option("--cache-dir", flags.cache_dir, "feature cache directory");
    cmd.add_option("--output-dir", flags.output_dir, "artifact directory");
    cmd.add_option("--jobs", flags.jobs, "parallel per-video workers");
    cmd.add_option("--visual-backend", flags.visual_backend,
                   "visual embedding backend (family:dim[@dir])");
    cmd.add_option("--audio-backend", flags.audio_backend,
                   "audio embedding backend (family:dim[@dir])");
    cmd.add_option("--attention", flags.attention_backbone,
                   "attention backbone (row-gate | conv-attn | "
                   "googlenet-attn@model[#layer])");
    cmd.add_option("--stride", flags.stride, "focal frame sample stride");
    cmd.add_option("--hws", flags.hws, "half-window size");
    cmd.add_option("--fusion", flags.fusion_mode,
                   "visual_only | audio_only | early | late");
    cmd.add_option("--alpha", flags.alpha, "late fusion weight");
    cmd.add_option("--beta", flags.beta, "early fusion weight");
    cmd.add_option("--loss", flags.loss, "bce | mse");
    cmd.add_option("--epochs", flags.epochs, "training epochs");
    cmd.add_option("--batch-size", flags.batch_size, "videos per step");
    cmd.add_option("--lr", flags.learning_rate, "learning rate");
    cmd.add_flag("--train-backbone", "fine-tune the attention backbone");
    cmd.add_flag("--normalize-features",
                 "per-video z-score before fusion (ablation)");
    cmd.add_option("--budget", flags.budget_seconds,
                   "selection budget in seconds");
    cmd.add_option("--seed", flags.seed, "run seed");
  }

  adclip::RunConfig resolve() const {
    adclip::RunConfig cfg;
    if (!config_file.empty()) cfg = adclip::load_run_config(config_file);
    auto set_if = [this](const char* flag, auto member,
                         adclip::RunConfig& cfg) {
      if (app->count(flag)) cfg.*member = flags.*member;
    };
    set_if("--manifest", &adclip::RunConfig::manifest, cfg);
    set_if("--cache-dir", &adclip::RunConfig::cache_dir, cfg);
    set_if("--output-dir", &adclip::RunConfig::output_dir, cfg);
    set_if("--jobs", &adclip::RunConfig::jobs, cfg);
    set_if("--visual-backend", &adclip::RunConfig::visual_backend, cfg);
    set_if("--audio-backend", &adclip::RunConfig::audio_backend, cfg);
    set_if("--attention", &adclip::RunConfig::attention_backbone, cfg);
    set_if("--stride", &adclip::RunConfig::stride, cfg);
    set_if("--hws", &adclip::RunConfig::hws, cfg);
    set_if("--fusion", &adclip::RunConfig::fusion_mode, cfg);
    set_if("--alpha", &adclip::RunConfig::alpha, cfg);
    set_if("--beta", &adclip::RunConfig::beta, cfg);
    set_if("--loss", &adclip::RunConfig::loss, cfg);
    set_if("--epochs", &adclip::RunConfig::epochs, cfg);
    set_if("--batch-size", &adclip::RunConfig::batch_size, cfg);
    set_if("--lr", &adclip::RunConfig::learning_rate, cfg);
    set_if("--budget", &adclip::RunConfig::budget_seconds, cfg);
    set_if("--seed", &adclip::RunConfig::seed, cfg);
    if (app->count("--train-backbone")) cfg.train_backbone = true;
    if (app->count("--normalize-features")) cfg.normalize_features = true;
    adclip::apply_environment(cfg);
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "adclip: shot-level ad clipping via two-stream importance scoring"};
  app.require_subcommand(1);

  // build-dataset
  auto* build = app.add_subcommand(
      "build-dataset",
      "segment shots from boundary probabilities and match short-ad shots");
  adclip::BuildDatasetArgs bargs;
  bool sweep = false;
  build->add_option("--sources", bargs.sources, "sources JSON")->required();
  build->add_option("--out", bargs.out_manifest, "output manifest path")
      ->required();
  double threshold = 0.5;
  build->add_option("--threshold", threshold, "boundary probability cut");
  build->add_flag("--sweep", sweep, "emit manifests for 0.1, 0.3 and 0.5");
  build->add_option("--similarity-floor", bargs.similarity_floor,
                    "flag matches below this for manual review");
  build->add_flag("--standardize-fps", bargs.standardize_fps,
                  "resample footage to the target rate");
  build->add_option("--target-fps", bargs.target_fps, "standardized rate");
  build->add_option("--review-report", bargs.review_report,
                    "review report path");
  build->add_option("--folds-out", bargs.folds_out, "write fold split JSON");
  build->add_option("--k", bargs.k_folds, "fold count");
  build->add_option("--seed", bargs.seed, "fold shuffle seed");
  build->add_option("--jobs", bargs.jobs, "parallel pair workers");

  auto* extract = app.add_subcommand(
      "extract", "embed and cache features for every long video");
  ConfigCli extract_cfg;
  extract_cfg.attach(*extract);

  auto* train =
      app.add_subcommand("train", "train the importance scorer");
  ConfigCli train_cfg;
  train_cfg.attach(*train);
  std::string checkpoint_out, train_report_out;
  train->add_option("--out", checkpoint_out, "checkpoint path");
  train->add_option("--train-report", train_report_out,
                    "training report path");

  auto* predict = app.add_subcommand(
      "predict", "score every long video with a trained checkpoint");
  ConfigCli predict_cfg;
  predict_cfg.attach(*predict);
  std::string checkpoint_in, scores_dir;
  predict->add_option("--checkpoint", checkpoint_in, "checkpoint path");
  predict->add_option("--scores-dir", scores_dir, "score file directory");

  auto* clip = app.add_subcommand(
      "clip", "select shots under the budget and emit cut lists");
  ConfigCli clip_cfg;
  clip_cfg.attach(*clip);
  std::string clip_scores_dir, clip_out_dir, ffmpeg_binary = "ffmpeg";
  bool do_assemble = false;
  clip->add_option("--scores-dir", clip_scores_dir, "score file directory");
  clip->add_option("--out-dir", clip_out_dir, "cut list directory");
  clip->add_flag("--assemble", do_assemble,
                 "splice output videos with the media toolchain");
  clip->add_option("--ffmpeg", ffmpeg_binary, "media toolchain binary");

  auto* evaluate = app.add_subcommand(
      "evaluate", "frame and shot metrics against the mapping ground truth");
  ConfigCli eval_cfg;
  eval_cfg.attach(*evaluate);
  std::string eval_scores_dir, report_out;
  bool cv = false, positional = false;
  evaluate->add_option("--scores-dir", eval_scores_dir,
                       "score file directory (flat evaluation)");
  evaluate->add_option("--out", report_out, "report path");
  evaluate->add_flag("--cv", cv, "run the five-fold cross-validation harness");
  evaluate->add_flag("--positional", positional,
                     "report first-half vs second-half shot AP");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      bargs.thresholds = sweep ? std::vector<double>{0.1, 0.3, 0.5}
                               : std::vector<double>{threshold};
      adclip::cmd_build_dataset(bargs);
    } else if (*extract) {
      adclip::cmd_extract(extract_cfg.resolve());
    } else if (*train) {
      const auto cfg = train_cfg.resolve();
      if (checkpoint_out.empty())
        checkpoint_out = cfg.output_dir + "/checkpoint.json";
      if (train_report_out.empty())
        train_report_out = cfg.output_dir + "/train_report.json";
      adclip::cmd_train(cfg, checkpoint_out, train_report_out);
    } else if (*predict) {
      const auto cfg = predict_cfg.resolve();
      if (checkpoint_in.empty())
        checkpoint_in = cfg.output_dir + "/checkpoint.json";
      if (scores_dir.empty()) scores_dir = cfg.output_dir + "/scores";
      adclip::cmd_predict(cfg, checkpoint_in, scores_dir);
    } else if (*clip) {
      const auto cfg = clip_cfg.resolve();
      if (clip_scores_dir.empty())
        clip_scores_dir = cfg.output_dir + "/scores";
      if (clip_out_dir.empty()) clip_out_dir = cfg.output_dir + "/cuts";
      adclip::cmd_clip(cfg, clip_scores_dir, clip_out_dir, do_assemble,
                       ffmpeg_binary);
    } else if (*evaluate) {
      const auto cfg = eval_cfg.resolve();
      if (report_out.empty()) report_out = cfg.output_dir + "/report.json";
      if (cv) {
        adclip::cmd_evaluate_cv(cfg, report_out, positional);
      } else {
        if (eval_scores_dir.empty())
          eval_scores_dir = cfg.output_dir + "/scores";
        adclip::cmd_evaluate(cfg, eval_scores_dir, report_out, positional);
      }
    }
  } catch (const adclip::DependencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
