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

#include "mof/harness.hpp"

#include "mof/data.hpp"
#include "mof/error.hpp"
#include "mof/io.hpp"
#include "mof/kernels.hpp"
#include "mof/sted/checkpoint.hpp"
#include "mof/sted/flow.hpp"

#include <Eigen/Core>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mof
{

namespace fs = std::filesystem;

namespace
{

constexpr const char * kToolkitVersion = "0.1.0";

std::string utc_timestamp()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path fresh_run_dir(const fs::path & root, const std::string & stem)
{
  fs::path dir = root / stem;
  for (int i = 1; fs::exists(dir); ++i) dir = root / (stem + "-" + std::to_string(i));
  fs::create_directories(dir);
  return dir;
}

std::string join(const std::set<std::string> & items)
{
  std::string out;
  for (const auto & s : items) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out.empty() ? "(none)" : out;
}

void attach_flow(std::vector<ObservationWindow> & windows, const std::optional<fs::path> & index, std::size_t dim,
                 bool synthetic)
{
  if (index) {
    attach_flow_features(*index, windows, dim);
  } else if (synthetic) {
    sted::attach_synthetic_flow(windows, dim);
  }
}

nlohmann::json report_json(const MetricReport & r)
{
  return {{"ade", r.ade}, {"fde", r.fde}, {"aiou", r.aiou}, {"fiou", r.fiou}, {"n_windows", r.n_windows}};
}

void write_train_log(const fs::path & path, const std::vector<sted::EpochLog> & log)
{
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << "epoch,learning_rate,train_loss,val_ade\n";
  for (const auto & e : log) {
    out << e.epoch << ',' << format_double(e.learning_rate) << ',' << format_double(e.train_loss) << ','
        << format_double(e.val_ade) << '\n';
  }
}

FoldResult run_fold_impl(const ExperimentSpec & spec, std::ostream * log)
{
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_timestamp();
  spec.validate();

  FoldResult result;
  const SplitConfig config = load_split_config(spec.splits);
  auto tracks = load_tracks(spec.tracks);
  check_cities_known(tracks, config);
  tracks = filter_short_tracks(tracks, spec.min_track_frames);
  if (spec.max_occlusion < 1.0) tracks = filter_occluded_tracks(tracks, spec.max_occlusion);

  TrackSplit split = make_splits(tracks, config, spec.fold);
  result.warnings = split.warnings;
  result.audit = audit_cities(split, spec.fold);
  if (log) *log << result.audit.summary() << '\n';
  if (!result.audit.ok()) {
    throw DataError("city audit failed: " + join(result.audit.overlap) + " in both train and held-out sets");
  }

  auto train_windows = extract_all_windows(split.train, kObservedFrames, kForecastFrames, spec.train_stride);
  auto val_windows = extract_all_windows(split.val, kObservedFrames, kForecastFrames, spec.eval_stride);
  auto test_windows = extract_all_windows(split.test, kObservedFrames, kForecastFrames, spec.eval_stride);
  if (test_windows.empty()) throw DataError("no test windows");
  result.n_train_windows = train_windows.size();
  result.n_val_windows = val_windows.size();

  const bool needs_flow = spec.model == ModelKind::sted && sted::uses_flow(spec.train.variant);
  if (needs_flow) {
    for (auto * windows : {&train_windows, &val_windows, &test_windows}) {
      attach_flow(*windows, spec.flow_features, spec.flow_dim, spec.synthetic_flow);
    }
  }

  result.run_dir = fresh_run_dir(spec.out, spec_hash(spec) + "-" + started_utc);
  nlohmann::json extra = nlohmann::json::object();

  switch (spec.model) {
    case ModelKind::cv_cs:
      break;
    case ModelKind::lkf: {
      const auto grid = spec.lkf_grid ? load_kalman_grid(*spec.lkf_grid) : default_lkf_grid();
      const auto & tune_on = val_windows.empty() ? train_windows : val_windows;
      if (val_windows.empty()) result.warnings.push_back("validation set empty; LKF tuned on training windows");
      if (tune_on.empty()) throw DataError("no windows to tune the Kalman filter on");
      const auto tuning = lkf_tune(tune_on, grid);
      result.kalman = tuning.best;
      save_kalman_params(result.run_dir / "kalman.json", tuning.best);
      save_kalman_tuning(result.run_dir / "lkf_tuning.json", tuning);
      break;
    }
    case ModelKind::sted: {
      if (train_windows.empty()) throw DataError("no training windows");
      if (spec.untrained) {
        result.sted_model = sted::initial_model(train_windows, spec.train);
      } else {
        auto trained = sted::train(train_windows, val_windows, spec.train, log);
        write_train_log(result.run_dir / "train_log.csv", trained.log);
        extra["best_epoch"] = trained.best_epoch;
        result.sted_model = std::move(trained.model);
      }
      sted::save_checkpoint(result.run_dir / "checkpoint.mofc", *result.sted_model, spec.train);
      break;
    }
  }

  const auto forecasts = run_forecaster(spec.model, test_windows, result.sted_model, result.kalman);
  const auto errors = evaluate_forecasts(forecasts, test_windows);
  result.test = aggregate(errors);
  result.breakdowns = all_breakdowns(errors, test_windows);
  write_report_files(result.run_dir, forecasts.front().model_id, result.test, result.breakdowns);

  const double seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  nlohmann::json manifest = {
    {"spec", to_json(spec)},
    {"spec_hash", spec_hash(spec)},
    {"fold", spec.fold},
    {"seed", spec.train.seed},
    {"model", to_string(spec.model)},
    {"started_utc", started_utc},
    {"wall_clock_seconds", seconds},
    {"versions",
     {{"mof", kToolkitVersion},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                  std::to_string(EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__}}},
    {"workers", worker_count()},
    {"city_audit",
     {{"train", result.audit.train}, {"held_out", result.audit.held_out}, {"overlap", result.audit.overlap}}},
    {"windows",
     {{"train", result.n_train_windows}, {"val", result.n_val_windows}, {"test", test_windows.size()}}},
    {"test", report_json(result.test)},
    {"warnings", result.warnings},
    {"extra", extra}};
  std::ofstream(result.run_dir / "manifest.json") << manifest.dump(2) << '\n';
  return result;
}

}  // namespace

std::string to_string(ModelKind kind)
{
  switch (kind) {
    case ModelKind::cv_cs: return "cv_cs";
    case ModelKind::lkf: return "lkf";
    case ModelKind::sted: return "sted";
  }
  return "cv_cs";
}

ModelKind parse_model_kind(const std::string & name)
{
  if (name == "cv_cs") return ModelKind::cv_cs;
  if (name == "lkf") return ModelKind::lkf;
  if (name == "sted") return ModelKind::sted;
  throw DataError("unknown model '" + name + "' (expected cv_cs, lkf or sted)");
}

void ExperimentSpec::validate() const
{
  if (fold < 0 || fold >= SplitConfig::kNumFolds) {
    throw DataError("fold must be 0, 1 or 2 (got " + std::to_string(fold) + ")");
  }
  if (!fs::exists(tracks)) throw DataError("track file " + tracks.string() + " does not exist");
  if (!fs::exists(splits)) throw DataError("split config " + splits.string() + " does not exist");
  if (flow_features && !fs::exists(*flow_features)) {
    throw DataError("flow feature index " + flow_features->string() + " does not exist");
  }
  if (lkf_grid && !fs::exists(*lkf_grid)) throw DataError("LKF grid " + lkf_grid->string() + " does not exist");
  if (min_track_frames < kObservedFrames + kForecastFrames) {
    throw DataError("min_track_frames must be at least " + std::to_string(kObservedFrames + kForecastFrames));
  }
  if (train_stride < 1 || eval_stride < 1) throw DataError("window strides must be positive");
  if (flow_dim < 1) throw DataError("flow_dim must be positive");
  if (!(max_occlusion >= 0.0 && max_occlusion <= 1.0)) throw DataError("max_occlusion must lie in [0, 1]");
  train.validate();
}

nlohmann::json to_json(const ExperimentSpec & spec)
{
  nlohmann::json j = {{"tracks", spec.tracks.string()},
                      {"splits", spec.splits.string()},
                      {"fold", spec.fold},
                      {"model", to_string(spec.model)},
                      {"train", sted::to_json(spec.train)},
                      {"out", spec.out.string()},
                      {"synthetic_flow", spec.synthetic_flow},
                      {"flow_dim", spec.flow_dim},
                      {"min_track_frames", spec.min_track_frames},
                      {"max_occlusion", spec.max_occlusion},
                      {"train_stride", spec.train_stride},
                      {"eval_stride", spec.eval_stride},
                      {"untrained", spec.untrained}};
  if (spec.flow_features) j["flow_features"] = spec.flow_features->string();
  if (spec.lkf_grid) j["lkf_grid"] = spec.lkf_grid->string();
  return j;
}

ExperimentSpec experiment_spec_from_json(const nlohmann::json & j)
{
  ExperimentSpec s;
  try {
    s.tracks = j.at("tracks").get<std::string>();
    s.splits = j.at("splits").get<std::string>();
    s.fold = j.value("fold", s.fold);
    s.model = parse_model_kind(j.value("model", to_string(s.model)));
    if (j.contains("train")) s.train = sted::train_config_from_json(j.at("train"));
    s.out = j.value("out", s.out.string());
    if (j.contains("flow_features")) s.flow_features = j.at("flow_features").get<std::string>();
    if (j.contains("lkf_grid")) s.lkf_grid = j.at("lkf_grid").get<std::string>();
    s.synthetic_flow = j.value("synthetic_flow", s.synthetic_flow);
    s.flow_dim = j.value("flow_dim", s.flow_dim);
    s.min_track_frames = j.value("min_track_frames", s.min_track_frames);
    s.max_occlusion = j.value("max_occlusion", s.max_occlusion);
    s.train_stride = j.value("train_stride", s.train_stride);
    s.eval_stride = j.value("eval_stride", s.eval_stride);
    s.untrained = j.value("untrained", s.untrained);
  } catch (const nlohmann::json::exception & e) {
    throw DataError(std::string("experiment spec: ") + e.what());
  }
  return s;
}

ExperimentSpec load_experiment_spec(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) throw DataError("cannot open experiment spec " + path.string());
  try {
    return experiment_spec_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error & e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string spec_hash(const ExperimentSpec & spec)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(spec).dump())));
  return buf;
}

std::string CityAudit::summary() const
{
  std::ostringstream s;
  s << "city audit fold " << fold << ": train {" << join(train) << "} held-out {" << join(held_out)
    << "} overlap " << overlap.size();
  return s.str();
}

CityAudit audit_cities(const TrackSplit & split, int fold)
{
  CityAudit a;
  a.fold = fold;
  for (const auto & t : split.train) a.train.insert(t.metadata.city);
  for (const auto * part : {&split.val, &split.test}) {
    for (const auto & t : *part) a.held_out.insert(t.metadata.city);
  }
  for (const auto & c : a.train) {
    if (a.held_out.count(c)) a.overlap.insert(c);
  }
  return a;
}

std::vector<Forecast> run_forecaster(ModelKind kind, const std::vector<ObservationWindow> & windows,
                                     const std::optional<sted::StedModel> & model,
                                     const std::optional<KalmanParams> & kalman)
{
  switch (kind) {
    case ModelKind::cv_cs:
      return forecast_windows([](const ObservationWindow & w) { return cv_cs_forecast(w); }, windows);
    case ModelKind::lkf: {
      if (!kalman) throw DataError("LKF forecasting needs Kalman parameters");
      const KalmanParams params = *kalman;
      return forecast_windows([params](const ObservationWindow & w) { return lkf_forecast(w, params); }, windows);
    }
    case ModelKind::sted:
      if (!model) throw DataError("sted forecasting needs a model");
      return sted_forecast_windows(*model, windows);
  }
  return {};
}

std::map<std::string, std::vector<MetricReport>> all_breakdowns(const std::vector<WindowErrors> & errors,
                                                                const std::vector<ObservationWindow> & windows)
{
  std::map<std::string, std::vector<MetricReport>> out;
  for (auto field : {MetadataField::city, MetadataField::weather, MetadataField::time_of_day}) {
    out[to_string(field)] = breakdown(errors, windows, field);
  }
  return out;
}

void write_report_files(const fs::path & dir, const std::string & model_id, const MetricReport & report,
                        const std::map<std::string, std::vector<MetricReport>> & breakdowns)
{
  fs::create_directories(dir);
  write_summary_csv(dir / "summary.csv", model_id, {report});
  write_curve_csv(dir / "curve.csv", report);
  for (const auto & [field, reports] : breakdowns) {
    write_summary_csv(dir / ("breakdown_" + field + ".csv"), model_id, reports);
  }
}

FoldResult run_fold(const ExperimentSpec & spec, std::ostream * log)
{
  const std::string context = "fold " + std::to_string(spec.fold) + ": ";
  try {
    return run_fold_impl(spec, log);
  } catch (const NumericalError & e) {
    throw NumericalError(context + e.what());
  } catch (const DataError & e) {
    throw DataError(context + e.what());
  }
}

AllFoldsResult run_all_folds(const ExperimentSpec & spec, std::ostream * log)
{
  ExperimentSpec base = spec;
  base.fold = 0;
  base.validate();
  // Fail before any training if the split config misses a city.
  check_cities_known(load_tracks(spec.tracks), load_split_config(spec.splits));

  AllFoldsResult result;
  std::vector<MetricReport> reports;
  for (int fold = 0; fold < SplitConfig::kNumFolds; ++fold) {
    ExperimentSpec s = spec;
    s.fold = fold;
    result.folds.push_back(run_fold(s, log));
    reports.push_back(result.folds.back().test);
  }
  result.mean = mean_report(reports);
  return result;
}

CrossEvalResult cross_eval(const fs::path & checkpoint, const fs::path & tracks, const CrossEvalOptions & options)
{
  const auto cp = sted::load_checkpoint(checkpoint);
  const auto & model = cp.model;
  auto loaded = filter_short_tracks(load_tracks(tracks), options.min_track_frames);
  auto windows = extract_all_windows(loaded, kObservedFrames, kForecastFrames, options.stride);
  if (windows.empty()) throw DataError("no windows after filtering " + tracks.string());

  if (sted::uses_flow(model.params.dims.variant)) {
    attach_flow(windows, options.flow_features, static_cast<std::size_t>(model.params.dims.flow),
                options.synthetic_flow);
    for (const auto & w : windows) {
      if (!w.flow_feature) {
        throw DataError("checkpoint variant " + sted::to_string(model.params.dims.variant) +
                        " needs flow features, which " + tracks.string() +
                        " does not provide; evaluate a bb_only checkpoint instead");
      }
    }
  }

  CrossEvalResult result;
  result.checksum_before = sted::weight_checksum(model.params);
  const auto forecasts = sted_forecast_windows(model, windows);
  result.checksum_after = sted::weight_checksum(model.params);
  if (result.checksum_before != result.checksum_after) {
    throw NumericalError("model weights changed during evaluation");
  }
  const auto errors = evaluate_forecasts(forecasts, windows);
  result.report = aggregate(errors);
  result.breakdowns = all_breakdowns(errors, windows);
  return result;
}

}  // namespace mof
