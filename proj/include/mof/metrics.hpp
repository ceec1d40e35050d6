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

#ifndef MOF__METRICS_HPP_
#define MOF__METRICS_HPP_

#include "mof/core.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mof
{

/// Per-step errors of one forecast; index k is frame t+k+1.
struct WindowErrors
{
  std::vector<double> displacements;
  std::vector<double> ious;
};

/**
 * @brief Aggregated forecast quality.
 *
 * ade/aiou weight every (window, step) pair equally; fde/fiou are the final
 * entries of the per-step curves.
 */
struct MetricReport
{
  double ade = 0.0;
  double fde = 0.0;
  double aiou = 0.0;
  double fiou = 0.0;
  std::vector<double> iou_curve;
  std::vector<double> displacement_curve;
  std::size_t n_windows = 0;
  std::optional<std::string> group_key;
};

WindowErrors evaluate_window(const std::vector<BBox> & predicted, const std::vector<BBox> & ground_truth);
WindowErrors evaluate_window(const Forecast & forecast, const ObservationWindow & window);

MetricReport aggregate(const std::vector<WindowErrors> & per_window,
                       std::optional<std::string> group_key = std::nullopt);

/// One report per distinct metadata value, sorted by AIOU descending.
std::vector<MetricReport> breakdown(const std::vector<WindowErrors> & per_window,
                                    const std::vector<ObservationWindow> & windows, MetadataField field);

/// Unweighted element-wise mean of several reports (n_windows is summed).
MetricReport mean_report(const std::vector<MetricReport> & reports);

/// CSV header `model,group,n_windows,ade,fde,aiou,fiou`.
void write_summary_csv(const std::filesystem::path & path, const std::string & model,
                       const std::vector<MetricReport> & reports);

/// CSV `step,mean_displacement,mean_iou`, one row per forecast step starting at 1.
void write_curve_csv(const std::filesystem::path & path, const MetricReport & report);

}  // namespace mof

#endif  // MOF__METRICS_HPP_
