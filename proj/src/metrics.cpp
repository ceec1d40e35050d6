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

#include "mof/metrics.hpp"

#include "mof/error.hpp"
#include "mof/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

namespace mof
{

WindowErrors evaluate_window(const std::vector<BBox> & predicted, const std::vector<BBox> & ground_truth)
{
  if (predicted.size() != ground_truth.size()) {
    throw DataError("forecast has " + std::to_string(predicted.size()) + " boxes but ground truth has " +
                    std::to_string(ground_truth.size()));
  }
  WindowErrors errors;
  errors.displacements.resize(predicted.size());
  errors.ious.resize(predicted.size());
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    errors.displacements[k] = centroid_distance(predicted[k], ground_truth[k]);
    errors.ious[k] = iou(predicted[k], ground_truth[k]);
  }
  return errors;
}

WindowErrors evaluate_window(const Forecast & forecast, const ObservationWindow & window)
{
  return evaluate_window(forecast.boxes, window.future);
}

MetricReport aggregate(const std::vector<WindowErrors> & per_window, std::optional<std::string> group_key)
{
  if (per_window.empty()) {
    throw DataError("cannot aggregate metrics over zero windows");
  }
  const std::size_t steps = per_window.front().displacements.size();
  if (steps == 0) {
    throw DataError("cannot aggregate windows with zero forecast steps");
  }
  MetricReport report;
  report.displacement_curve.assign(steps, 0.0);
  report.iou_curve.assign(steps, 0.0);
  for (const auto & w : per_window) {
    if (w.displacements.size() != steps || w.ious.size() != steps) {
      throw DataError("windows with different forecast lengths cannot be aggregated");
    }
    for (std::size_t k = 0; k < steps; ++k) {
      report.displacement_curve[k] += w.displacements[k];
      report.iou_curve[k] += w.ious[k];
    }
  }
  const double n = static_cast<double>(per_window.size());
  for (std::size_t k = 0; k < steps; ++k) {
    report.displacement_curve[k] /= n;
    report.iou_curve[k] /= n;
  }
  const auto mean = [](const std::vector<double> & v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  report.ade = mean(report.displacement_curve);
  report.aiou = mean(report.iou_curve);
  report.fde = report.displacement_curve.back();
  report.fiou = report.iou_curve.back();
  report.n_windows = per_window.size();
  report.group_key = std::move(group_key);
  return report;
}

std::vector<MetricReport> breakdown(const std::vector<WindowErrors> & per_window,
                                    const std::vector<ObservationWindow> & windows, MetadataField field)
{
  if (per_window.size() != windows.size()) {
    throw DataError("breakdown needs one error record per window");
  }
  std::map<std::string, std::vector<WindowErrors>> groups;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const std::string & value = metadata_value(windows[i].metadata, field);
    if (value.empty()) {
      const auto & s = windows[i].source;
      throw DataError("window " + s.video_id + "/" + std::to_string(s.track_id) + "@" +
                      std::to_string(s.anchor_frame) + " has no " + to_string(field) + " metadata");
    }
    groups[value].push_back(per_window[i]);
  }
  std::vector<MetricReport> reports;
  for (const auto & [key, errors] : groups) {
    reports.push_back(aggregate(errors, key));
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const MetricReport & a, const MetricReport & b) { return a.aiou > b.aiou; });
  return reports;
}

MetricReport mean_report(const std::vector<MetricReport> & reports)
{
  if (reports.empty()) {
    throw DataError("cannot average zero reports");
  }
  const std::size_t steps = reports.front().displacement_curve.size();
  MetricReport mean;
  mean.displacement_curve.assign(steps, 0.0);
  mean.iou_curve.assign(steps, 0.0);
  for (const auto & r : reports) {
    if (r.displacement_curve.size() != steps || r.iou_curve.size() != steps) {
      throw DataError("reports with different curve lengths cannot be averaged");
    }
    mean.ade += r.ade;
    mean.fde += r.fde;
    mean.aiou += r.aiou;
    mean.fiou += r.fiou;
    mean.n_windows += r.n_windows;
    for (std::size_t k = 0; k < steps; ++k) {
      mean.displacement_curve[k] += r.displacement_curve[k];
      mean.iou_curve[k] += r.iou_curve[k];
    }
  }
  const double n = static_cast<double>(reports.size());
  mean.ade /= n;
  mean.fde /= n;
  mean.aiou /= n;
  mean.fiou /= n;
  for (std::size_t k = 0; k < steps; ++k) {
    mean.displacement_curve[k] /= n;
    mean.iou_curve[k] /= n;
  }
  return mean;
}

void write_summary_csv(const std::filesystem::path & path, const std::string & model,
                       const std::vector<MetricReport> & reports)
{
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "model,group,n_windows,ade,fde,aiou,fiou\n";
  for (const auto & r : reports) {
    out << model << ',' << r.group_key.value_or("all") << ',' << r.n_windows << ',' << format_double(r.ade)
        << ',' << format_double(r.fde) << ',' << format_double(r.aiou) << ',' << format_double(r.fiou) << '\n';
  }
}

void write_curve_csv(const std::filesystem::path & path, const MetricReport & report)
{
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "step,mean_displacement,mean_iou\n";
  for (std::size_t k = 0; k < report.displacement_curve.size(); ++k) {
    out << (k + 1) << ',' << format_double(report.displacement_curve[k]) << ','
        << format_double(report.iou_curve[k]) << '\n';
  }
}

}  // namespace mof
