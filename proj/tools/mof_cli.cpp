// Copyright 2026 The MOF Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver. Exit codes: 0 success, 1 usage error, 2 data or
// validation error, 3 failed gradient check.

#include "mof/baselines.hpp"
#include "mof/data.hpp"
#include "mof/error.hpp"
#include "mof/harness.hpp"
#include "mof/io.hpp"
#include "mof/kernels.hpp"
#include "mof/metrics.hpp"
#include "mof/sted/checkpoint.hpp"
#include "mof/sted/flow.hpp"
#include "mof/sted/gradcheck.hpp"
#include "mof/sted/train.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mof;

namespace
{

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCheckFailed = 3;

const CLI::IsMember kModels({"cv_cs", "lkf", "sted"});
const CLI::IsMember kVariants({"bb_only", "of_only", "both"});

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

void print_report(const std::string & label, const MetricReport & r)
{
  std::printf("%-10s windows %zu  ADE %.2f  FDE %.2f  AIOU %.3f  FIOU %.3f\n", label.c_str(), r.n_windows, r.ade,
              r.fde, r.aiou, r.fiou);
}

void require(bool condition, const std::string & message)
{
  if (!condition) throw UsageError(message);
}

/// Options shared by subcommands that read tracks and cut windows.
struct WindowOptions
{
  std::string tracks;
  std::string splits;
  std::optional<int> fold;
  int min_frames = kMinTrackFrames;
  int stride = 1;
  std::string flow_features;
  bool synthetic_flow = false;
  std::size_t flow_dim = static_cast<std::size_t>(sted::kDefaultFlowDim);

  void add_to(CLI::App * app, bool with_split)
  {
    app->add_option("--tracks", tracks, "Track CSV")->required();
    if (with_split) {
      app->add_option("--splits", splits, "Split config JSON; restricts windows to the fold's test set");
      app->add_option("--fold", fold, "Held-out fold (0-2)")->check(CLI::Range(0, 2));
    }
    app->add_option("--min-frames", min_frames, "Minimum track length")->capture_default_str();
    app->add_option("--stride", stride, "Window stride")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--flow-features", flow_features, "Flow feature index CSV");
    app->add_flag("--synthetic-flow", synthetic_flow, "Attach synthetic flow features");
    app->add_option("--flow-dim", flow_dim, "Flow feature length")->capture_default_str();
  }

  std::vector<ObservationWindow> load() const
  {
    auto all = filter_short_tracks(load_tracks(tracks), min_frames);
    if (!splits.empty()) {
      require(fold.has_value(), "--splits needs --fold");
      all = make_splits(all, load_split_config(splits), *fold).test;
    }
    auto windows = extract_all_windows(all, kObservedFrames, kForecastFrames, stride);
    if (!flow_features.empty()) {
      attach_flow_features(flow_features, windows, flow_dim);
    } else if (synthetic_flow) {
      sted::attach_synthetic_flow(windows, flow_dim);
    }
    if (windows.empty()) throw DataError("no windows after filtering " + tracks);
    return windows;
  }
};

/// Loads the model named by --model with its parameter file.
struct ModelOptions
{
  std::string model = "cv_cs";
  std::string checkpoint;
  std::string kalman;

  void add_to(CLI::App * app)
  {
    app->add_option("--model", model, "cv_cs, lkf or sted")->capture_default_str()->check(kModels);
    app->add_option("--checkpoint", checkpoint, "sted checkpoint");
    app->add_option("--kalman", kalman, "Kalman parameter JSON (lkf)");
  }

  std::vector<Forecast> run(const std::vector<ObservationWindow> & windows) const
  {
    const ModelKind kind = parse_model_kind(model);
    std::optional<sted::StedModel> sted_model;
    std::optional<KalmanParams> params;
    if (kind == ModelKind::sted) {
      require(!checkpoint.empty(), "--model sted needs --checkpoint");
      sted_model = sted::load_checkpoint(checkpoint).model;
    } else if (kind == ModelKind::lkf) {
      params = kalman.empty() ? KalmanParams{} : load_kalman_params(kalman);
    }
    return run_forecaster(kind, windows, sted_model, params);
  }
};

int cmd_synth(const std::string & kind, int n, double noise, std::uint64_t seed, const std::string & out)
{
  const auto tracks = synth_generate(parse_synth_kind(kind), n, noise, seed);
  fs::create_directories(out);
  write_tracks(fs::path(out) / "tracks.csv", tracks);
  save_split_config(fs::path(out) / "splits.json", synth_split_config());
  std::printf("wrote %zu %s tracks to %s\n", tracks.size(), kind.c_str(), (fs::path(out) / "tracks.csv").c_str());
  return 0;
}

int cmd_prepare(const WindowOptions & opt, const std::string & splits, std::optional<int> fold,
                const std::string & out)
{
  const auto loaded = load_tracks(opt.tracks);
  const auto kept = filter_short_tracks(loaded, opt.min_frames);
  fs::create_directories(out);
  write_tracks(fs::path(out) / "tracks.csv", kept);

  std::vector<Track> fit_on = kept;
  nlohmann::json counts;
  if (!splits.empty()) {
    require(fold.has_value(), "--splits needs --fold");
    const auto split = make_splits(kept, load_split_config(splits), *fold);
    for (const auto & w : split.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    counts["train"] = extract_all_windows(split.train, kObservedFrames, kForecastFrames, opt.stride).size();
    counts["val"] = extract_all_windows(split.val, kObservedFrames, kForecastFrames, opt.stride).size();
    counts["test"] = extract_all_windows(split.test, kObservedFrames, kForecastFrames, opt.stride).size();
    std::cout << audit_cities(split, *fold).summary() << '\n';
    fit_on = split.train;
  }
  const auto windows = extract_all_windows(fit_on, kObservedFrames, kForecastFrames, opt.stride);
  if (windows.empty()) throw DataError("no windows after filtering " + opt.tracks);
  const auto stats = sted::FeatureStats::fit(windows);
  counts["fitted_on"] = windows.size();

  const nlohmann::json j = {{"tracks_in", loaded.size()},
                            {"tracks_kept", kept.size()},
                            {"windows", counts},
                            {"feature_mean", stats.mean},
                            {"feature_std", stats.std}};
  std::ofstream(fs::path(out) / "stats.json") << j.dump(2) << '\n';
  std::printf("kept %zu of %zu tracks; %zu windows for standardization\n", kept.size(), loaded.size(),
              windows.size());
  return 0;
}

int cmd_clip_filter(const std::string & path, double threshold, int clip_frames, const std::string & out)
{
  const auto series = load_flow_magnitudes(path);
  std::ofstream file;
  if (!out.empty()) {
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    file.open(out);
    if (!file) throw DataError("cannot open " + out + " for writing");
  }
  std::ostream & dst = out.empty() ? std::cout : file;
  dst << "video_id,start_frame,end_frame\n";
  std::size_t total = 0;
  for (const auto & s : series) {
    for (const auto & clip : motion_filter_clips(s.magnitudes, threshold, clip_frames)) {
      dst << s.video_id << ',' << s.start_frame + clip.start_frame << ',' << s.start_frame + clip.end_frame << '\n';
      ++total;
    }
  }
  if (!out.empty()) std::printf("%zu clips from %zu videos\n", total, series.size());
  return 0;
}

int cmd_run(ExperimentSpec spec, bool all_folds)
{
  if (all_folds) {
    const auto result = run_all_folds(spec, &std::cout);
    for (std::size_t f = 0; f < result.folds.size(); ++f) {
      print_report("fold " + std::to_string(f), result.folds[f].test);
      std::printf("  run dir %s\n", result.folds[f].run_dir.c_str());
    }
    print_report("mean", result.mean);
    return 0;
  }
  const auto result = run_fold(spec, &std::cout);
  for (const auto & w : result.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  print_report(to_string(spec.model), result.test);
  std::printf("run dir %s\n", result.run_dir.c_str());
  return 0;
}

int cmd_eval(const WindowOptions & wopt, const ModelOptions & mopt, const std::string & out)
{
  const auto windows = wopt.load();
  const auto forecasts = mopt.run(windows);
  const auto errors = evaluate_forecasts(forecasts, windows);
  const auto report = aggregate(errors);
  if (!out.empty()) write_report_files(out, forecasts.front().model_id, report, all_breakdowns(errors, windows));
  print_report(mopt.model, report);
  return 0;
}

int cmd_cross_eval(const std::string & checkpoint, const WindowOptions & wopt, const std::string & out)
{
  CrossEvalOptions options;
  options.min_track_frames = wopt.min_frames;
  options.stride = wopt.stride;
  if (!wopt.flow_features.empty()) options.flow_features = wopt.flow_features;
  options.synthetic_flow = wopt.synthetic_flow;
  const auto result = cross_eval(checkpoint, wopt.tracks, options);
  if (!out.empty()) write_report_files(out, "sted", result.report, result.breakdowns);
  print_report("sted", result.report);
  std::printf("weight checksum %016llx (unchanged)\n", static_cast<unsigned long long>(result.checksum_after));
  return 0;
}

int cmd_forecast(const WindowOptions & wopt, const ModelOptions & mopt, const std::string & out)
{
  const auto windows = wopt.load();
  const auto forecasts = mopt.run(windows);
  std::vector<Track> tracks;
  tracks.reserve(forecasts.size());
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    const auto & src = windows[i].source;
    Track t;
    t.video_id = src.video_id + "#" + std::to_string(src.track_id) + "@" + std::to_string(src.anchor_frame);
    t.track_id = src.track_id;
    t.start_frame = src.anchor_frame + 1;
    t.boxes = forecasts[i].boxes;
    t.metadata = windows[i].metadata;
    tracks.push_back(std::move(t));
  }
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  write_tracks(out, tracks);
  std::printf("wrote %zu forecasts to %s\n", tracks.size(), out.c_str());
  return 0;
}

int cmd_gradcheck(int hidden, int embed, std::uint64_t seed, double epsilon, int n_samples,
                  const std::string & variant, std::size_t flow_dim, std::size_t coords, double tolerance)
{
  require(n_samples >= 1, "--samples must be positive");
  const auto tracks = synth_generate(SynthKind::turning, n_samples, 0.5, seed);
  std::vector<ObservationWindow> windows;
  for (const auto & t : tracks) windows.push_back(extract_windows(t).front());
  sted::TrainConfig config;
  config.hidden = hidden;
  config.embed = embed;
  config.seed = seed;
  config.variant = sted::parse_variant(variant);
  if (sted::uses_flow(config.variant)) sted::attach_synthetic_flow(windows, flow_dim);

  auto model = sted::initial_model(windows, config);
  // A zero output layer blocks every gradient upstream of it.
  sted::randomize_output_layer(model.params, seed + 1);
  const auto samples = make_samples(windows, model.stats, model.params.dims);
  const auto result = sted::grad_check(model.params, samples, epsilon, seed, coords);
  for (const auto & g : result.groups) {
    std::printf("%-10s coords %3zu  max rel error %.3e\n", g.name.c_str(), g.coordinates, g.max_rel_error);
  }
  std::printf("max relative error %.3e (tolerance %.0e)\n", result.max_rel_error, tolerance);
  return result.max_rel_error < tolerance ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Multiple object forecasting toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  int workers = 0;
  bool deterministic = false;
  app.add_option("--workers", workers, "Worker threads for window-level parallelism (0 = all cores)");
  app.add_flag("--deterministic", deterministic, "Single worker; every subcommand is reproducible bit for bit");

  // synth
  auto * synth = app.add_subcommand("synth", "Generate synthetic tracks and a split config");
  std::string synth_kind = "constant_velocity";
  int synth_n = 100;
  double synth_noise = 0.0;
  std::uint64_t seed = 0;
  std::string out = "runs";
  synth->add_option("--kind", synth_kind, "constant_velocity, accelerating, turning or stop_and_go")
    ->capture_default_str()
    ->check(CLI::IsMember({"constant_velocity", "accelerating", "turning", "stop_and_go"}));
  synth->add_option("--n", synth_n, "Number of tracks")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--noise", synth_noise, "Box noise sigma in pixels")->capture_default_str();
  synth->add_option("--seed", seed, "Random seed")->capture_default_str();
  synth->add_option("--out", out, "Output directory")->capture_default_str();

  // prepare
  auto * prepare = app.add_subcommand("prepare", "Filter tracks, count windows and fit feature statistics");
  WindowOptions prep_opt;
  std::string prep_splits;
  std::optional<int> prep_fold;
  prepare->add_option("--tracks", prep_opt.tracks, "Track CSV")->required();
  prepare->add_option("--splits", prep_splits, "Split config JSON");
  prepare->add_option("--fold", prep_fold, "Held-out fold (0-2)")->check(CLI::Range(0, 2));
  prepare->add_option("--min-frames", prep_opt.min_frames, "Minimum track length")->capture_default_str();
  prepare->add_option("--stride", prep_opt.stride, "Window stride")->capture_default_str();
  prepare->add_option("--out", out, "Output directory")->capture_default_str();

  // clip-filter
  auto * clip = app.add_subcommand("clip-filter", "Select low-motion clips from mean flow magnitudes");
  std::string magnitudes;
  double threshold = 1.5;
  int clip_frames = 600;
  std::string clip_out;
  clip->add_option("--flow-magnitudes", magnitudes, "CSV video_id,frame,mean_flow_magnitude")->required();
  clip->add_option("--threshold", threshold, "Maximum admissible magnitude")->capture_default_str();
  clip->add_option("--clip-frames", clip_frames, "Clip length in frames")->capture_default_str();
  clip->add_option("--out", clip_out, "Output CSV (default: standard output)");

  // train / tune-lkf share the experiment options
  ExperimentSpec spec;
  std::string spec_path;
  std::string model_name = "sted";
  std::string variant = "bb_only";
  std::string flow_features;
  std::string lkf_grid;
  bool all_folds = false;
  auto add_experiment = [&](CLI::App * cmd, bool with_model) {
    cmd->add_option("--spec", spec_path, "Experiment spec JSON; flags given alongside override it");
    cmd->add_option("--tracks", spec.tracks, "Track CSV");
    cmd->add_option("--splits", spec.splits, "Split config JSON");
    cmd->add_option("--fold", spec.fold, "Held-out fold (0-2)")->check(CLI::Range(0, 2));
    cmd->add_flag("--all-folds", all_folds, "Run folds 0-2 and report their mean");
    cmd->add_option("--out", spec.out, "Root directory for run directories")->capture_default_str();
    cmd->add_option("--min-frames", spec.min_track_frames, "Minimum track length")->capture_default_str();
    cmd->add_option("--max-occlusion", spec.max_occlusion, "Drop tracks occluded beyond this fraction");
    cmd->add_option("--train-stride", spec.train_stride, "Training window stride")->capture_default_str();
    cmd->add_option("--eval-stride", spec.eval_stride, "Validation/test window stride")->capture_default_str();
    if (with_model) {
      cmd->add_option("--model", model_name, "cv_cs, lkf or sted")->capture_default_str()->check(kModels);
      cmd->add_option("--variant", variant, "bb_only, of_only or both")->capture_default_str()->check(kVariants);
      cmd->add_option("--hidden", spec.train.hidden, "GRU hidden size")->capture_default_str();
      cmd->add_option("--embed", spec.train.embed, "Box embedding size")->capture_default_str();
      cmd->add_option("--epochs", spec.train.epochs, "Training epochs")->capture_default_str();
      cmd->add_option("--batch", spec.train.batch_size, "Mini-batch size")->capture_default_str();
      cmd->add_option("--lr", spec.train.learning_rate, "Initial learning rate")->capture_default_str();
      cmd->add_option("--halving-period", spec.train.halving_period, "Epochs per learning-rate halving")
        ->capture_default_str();
      cmd->add_option("--seed", spec.train.seed, "Random seed")->capture_default_str();
      cmd->add_flag("!--no-fc-relu", spec.train.fc_relu, "Drop the rectifier after FC-1");
      cmd->add_flag("--untrained", spec.untrained, "Evaluate sted without training");
      cmd->add_option("--flow-features", flow_features, "Flow feature index CSV");
      cmd->add_flag("--synthetic-flow", spec.synthetic_flow, "Use synthetic flow features");
      cmd->add_option("--flow-dim", spec.flow_dim, "Flow feature length")->capture_default_str();
    }
    cmd->add_option("--grid", lkf_grid, "LKF grid JSON");
  };
  auto * train = app.add_subcommand("train", "Train and evaluate one fold (or all folds)");
  add_experiment(train, true);
  auto * tune = app.add_subcommand("tune-lkf", "Tune the Kalman baseline on validation and evaluate on test");
  add_experiment(tune, false);

  // eval / forecast
  auto * eval = app.add_subcommand("eval", "Evaluate a model on every window of a track file");
  WindowOptions eval_opt;
  ModelOptions eval_model;
  std::string eval_out;
  eval_opt.add_to(eval, true);
  eval_model.add_to(eval);
  eval->add_option("--out", eval_out, "Directory for report files");

  auto * forecast = app.add_subcommand("forecast", "Write per-window forecasts as a track file");
  WindowOptions fc_opt;
  ModelOptions fc_model;
  std::string fc_out;
  fc_opt.add_to(forecast, true);
  fc_model.add_to(forecast);
  forecast->add_option("--out", fc_out, "Output track CSV")->required();

  // cross-eval
  auto * cross = app.add_subcommand("cross-eval", "Evaluate a frozen checkpoint on an external track file");
  WindowOptions cross_opt;
  std::string cross_checkpoint;
  std::string cross_out;
  cross_opt.add_to(cross, false);
  cross->add_option("--checkpoint", cross_checkpoint, "sted checkpoint")->required();
  cross->add_option("--out", cross_out, "Directory for report files");

  // gradcheck
  auto * grad = app.add_subcommand("gradcheck", "Compare backpropagation with central differences");
  int gc_hidden = 64;
  int gc_embed = 32;
  double gc_epsilon = 1e-5;
  int gc_samples = 3;
  std::string gc_variant = "both";
  std::size_t gc_flow_dim = 16;
  std::size_t gc_coords = 50;
  double gc_tolerance = 1e-4;
  std::uint64_t gc_seed = 0;
  grad->add_option("--hidden", gc_hidden, "GRU hidden size")->capture_default_str();
  grad->add_option("--embed", gc_embed, "Box embedding size")->capture_default_str();
  grad->add_option("--seed", gc_seed, "Random seed")->capture_default_str();
  grad->add_option("--epsilon", gc_epsilon, "Finite-difference step")->capture_default_str();
  grad->add_option("--samples", gc_samples, "Number of windows")->capture_default_str();
  grad->add_option("--variant", gc_variant, "bb_only, of_only or both")->capture_default_str()->check(kVariants);
  grad->add_option("--flow-dim", gc_flow_dim, "Synthetic flow length")->capture_default_str();
  grad->add_option("--coords", gc_coords, "Coordinates checked per tensor")->capture_default_str();
  grad->add_option("--tolerance", gc_tolerance, "Pass threshold")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (deterministic) {
      set_worker_count(1);
    } else if (workers > 0) {
      set_worker_count(workers);
    }

    if (*synth) return cmd_synth(synth_kind, synth_n, synth_noise, seed, out);
    if (*prepare) return cmd_prepare(prep_opt, prep_splits, prep_fold, out);
    if (*clip) return cmd_clip_filter(magnitudes, threshold, clip_frames, clip_out);
    if (*train || *tune) {
      CLI::App * cmd = *train ? train : tune;
      if (!spec_path.empty()) {
        // Flags given on the command line take precedence over the file.
        ExperimentSpec from_file = load_experiment_spec(spec_path);
        if (cmd->count("--tracks") == 0) spec.tracks = from_file.tracks;
        if (cmd->count("--splits") == 0) spec.splits = from_file.splits;
        if (cmd->count("--fold") == 0) spec.fold = from_file.fold;
        if (cmd->count("--out") == 0) spec.out = from_file.out;
        if (cmd->count("--min-frames") == 0) spec.min_track_frames = from_file.min_track_frames;
        if (cmd->count("--max-occlusion") == 0) spec.max_occlusion = from_file.max_occlusion;
        if (cmd->count("--train-stride") == 0) spec.train_stride = from_file.train_stride;
        if (cmd->count("--eval-stride") == 0) spec.eval_stride = from_file.eval_stride;
        if (cmd->count("--grid") == 0) spec.lkf_grid = from_file.lkf_grid;
        if (*train) {
          const sted::TrainConfig cli_train = spec.train;
          spec.train = from_file.train;
          if (cmd->count("--hidden")) spec.train.hidden = cli_train.hidden;
          if (cmd->count("--embed")) spec.train.embed = cli_train.embed;
          if (cmd->count("--epochs")) spec.train.epochs = cli_train.epochs;
          if (cmd->count("--batch")) spec.train.batch_size = cli_train.batch_size;
          if (cmd->count("--lr")) spec.train.learning_rate = cli_train.learning_rate;
          if (cmd->count("--halving-period")) spec.train.halving_period = cli_train.halving_period;
          if (cmd->count("--seed")) spec.train.seed = cli_train.seed;
          if (cmd->count("--no-fc-relu")) spec.train.fc_relu = cli_train.fc_relu;
          if (cmd->count("--model") == 0) model_name = to_string(from_file.model);
          if (cmd->count("--variant") == 0) variant = sted::to_string(from_file.train.variant);
          if (cmd->count("--untrained") == 0) spec.untrained = from_file.untrained;
          if (cmd->count("--flow-features") == 0 && from_file.flow_features) {
            flow_features = from_file.flow_features->string();
          }
          if (cmd->count("--synthetic-flow") == 0) spec.synthetic_flow = from_file.synthetic_flow;
          if (cmd->count("--flow-dim") == 0) spec.flow_dim = from_file.flow_dim;
        }
      }
      require(!spec.tracks.empty() && !spec.splits.empty(), "--tracks and --splits are required (or --spec)");
      spec.model = *train ? parse_model_kind(model_name) : ModelKind::lkf;
      spec.train.variant = sted::parse_variant(variant);
      spec.train.deterministic = deterministic;
      if (!flow_features.empty()) spec.flow_features = flow_features;
      if (!lkf_grid.empty()) spec.lkf_grid = lkf_grid;
      return cmd_run(spec, all_folds);
    }
    if (*eval) return cmd_eval(eval_opt, eval_model, eval_out);
    if (*forecast) return cmd_forecast(fc_opt, fc_model, fc_out);
    if (*cross) return cmd_cross_eval(cross_checkpoint, cross_opt, cross_out);
    if (*grad) {
      return cmd_gradcheck(gc_hidden, gc_embed, gc_seed, gc_epsilon, gc_samples, gc_variant, gc_flow_dim, gc_coords,
                           gc_tolerance);
    }
  } catch (const UsageError & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
