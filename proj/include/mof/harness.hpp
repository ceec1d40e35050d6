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

#ifndef MOF__HARNESS_HPP_
#define MOF__HARNESS_HPP_

#include "mof/baselines.hpp"
#include "mof/core.hpp"
#include "mof/data.hpp"
#include "mof/metrics.hpp"
#include "mof/sted/model.hpp"
#include "mof/sted/train.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mof
{

enum class ModelKind { cv_cs, lkf, sted };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string & name);

/**
 * @brief One experiment, loadable from JSON.
 *
 * Keys mirror the field names; `train` holds a TrainConfig object. Flow
 * features of length flow_dim come from a sidecar index (flow_features)
 * or, when synthetic_flow is set, from the synthetic provider.
 */
struct ExperimentSpec
{
  std::filesystem::path tracks;
  std::filesystem::path splits;
  int fold = 0;
  ModelKind model = ModelKind::cv_cs;
  sted::TrainConfig train;
  std::filesystem::path out = "runs";

  std::optional<std::filesystem::path> flow_features;
  bool synthetic_flow = false;
  std::size_t flow_dim = static_cast<std::size_t>(sted::kDefaultFlowDim);
  std::optional<std::filesystem::path> lkf_grid;
  int min_track_frames = kMinTrackFrames;
  /// Tracks with a box occluded beyond this fraction are dropped (1 keeps all).
  double max_occlusion = 1.0;
  int train_stride = 1;
  int eval_stride = 1;
  /// Evaluate sted straight after initialization, without training.
  bool untrained = false;

  /// Checks value ranges and that referenced files exist.
  void validate() const;
};

nlohmann::json to_json(const ExperimentSpec & spec);
ExperimentSpec experiment_spec_from_json(const nlohmann::json & j);
ExperimentSpec load_experiment_spec(const std::filesystem::path & path);

/// 16 hex digits hashing the spec's canonical JSON (fold included).
std::string spec_hash(const ExperimentSpec & spec);

/// Which cities fed each role of a fold.
struct CityAudit
{
  int fold = 0;
  std::set<std::string> train;
  std::set<std::string> held_out;
  std::set<std::string> overlap;

  bool ok() const { return overlap.empty(); }
  std::string summary() const;
};

CityAudit audit_cities(const TrackSplit & split, int fold);

struct FoldResult
{
  MetricReport test;
  std::map<std::string, std::vector<MetricReport>> breakdowns;  // keyed by metadata field name
  CityAudit audit;
  std::filesystem::path run_dir;
  std::size_t n_train_windows = 0;
  std::size_t n_val_windows = 0;
  std::optional<sted::StedModel> sted_model;
  std::optional<KalmanParams> kalman;
  std::vector<std::string> warnings;
};

/**
 * @brief Builds the fold's splits, fits the model and evaluates on test.
 *
 * Artifacts go to a fresh directory under spec.out named
 * `<spec hash>-<UTC timestamp>`: summary.csv, curve.csv,
 * breakdown_<field>.csv, manifest.json, plus checkpoint.mofc (sted),
 * train_log.csv (trained sted) or kalman.json and lkf_tuning.json (lkf).
 * Errors carry the fold index; the city audit is written to log.
 */
FoldResult run_fold(const ExperimentSpec & spec, std::ostream * log = nullptr);

struct AllFoldsResult
{
  std::vector<FoldResult> folds;
  MetricReport mean;
};

/// Runs folds 0..2 (spec.fold is ignored) and averages them without weighting.
AllFoldsResult run_all_folds(const ExperimentSpec & spec, std::ostream * log = nullptr);

struct CrossEvalOptions
{
  int min_track_frames = kMinTrackFrames;
  int stride = 1;
  /// Flow sources for flow variants; the length comes from the checkpoint.
  std::optional<std::filesystem::path> flow_features;
  bool synthetic_flow = false;
};

struct CrossEvalResult
{
  MetricReport report;
  std::map<std::string, std::vector<MetricReport>> breakdowns;
  std::uint64_t checksum_before = 0;
  std::uint64_t checksum_after = 0;
};

/// Evaluates a frozen checkpoint on every window of an external track file.
CrossEvalResult cross_eval(const std::filesystem::path & checkpoint, const std::filesystem::path & tracks,
                           const CrossEvalOptions & options = {});

/// Forecasts of any model kind on windows, in window order.
std::vector<Forecast> run_forecaster(ModelKind kind, const std::vector<ObservationWindow> & windows,
                                     const std::optional<sted::StedModel> & model,
                                     const std::optional<KalmanParams> & kalman);

/// Writes the report files shared by run_fold and the CLI into dir.
void write_report_files(const std::filesystem::path & dir, const std::string & model_id, const MetricReport & report,
                        const std::map<std::string, std::vector<MetricReport>> & breakdowns);

std::map<std::string, std::vector<MetricReport>> all_breakdowns(const std::vector<WindowErrors> & errors,
                                                                const std::vector<ObservationWindow> & windows);

}  // namespace mof

#endif  // MOF__HARNESS_HPP_
