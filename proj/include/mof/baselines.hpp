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

#ifndef MOF__BASELINES_HPP_
#define MOF__BASELINES_HPP_

#include "mof/core.hpp"
#include "mof/parallel.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <vector>

namespace mof
{

/// Constant centroid velocity from the last 5 observed frames, size frozen at the anchor.
Forecast cv_cs_forecast(const ObservationWindow & window, int horizon = kForecastFrames);

/// Noise variances of the 8-state constant-velocity filter. All strictly positive.
struct KalmanParams
{
  double process_noise_pos = 1e-2;
  double process_noise_vel = 1e-2;
  double observation_noise = 1.0;
  double initial_velocity_variance = 100.0;

  void validate() const;
  friend bool operator==(const KalmanParams &, const KalmanParams &) = default;
};

using KalmanVector = Eigen::Matrix<double, 8, 1>;
using KalmanMatrix = Eigen::Matrix<double, 8, 8>;

/// State (cx, cy, w, h, v_cx, v_cy, v_w, v_h) with its covariance.
struct KalmanState
{
  KalmanVector mean = KalmanVector::Zero();
  KalmanMatrix covariance = KalmanMatrix::Identity();
};

/**
 * @brief Filters the observed boxes of a window.
 *
 * Starts at the first observation with zero velocity (position variance =
 * observation_noise, velocity variance = initial_velocity_variance), then
 * runs one predict/update cycle per observed frame with unit time step.
 * Covariance updates use the Joseph form and are re-symmetrized.
 */
KalmanState lkf_filter(const ObservationWindow & window, const KalmanParams & params);

/// Same filter, also returning the state after every update (for diagnostics and tests).
std::vector<KalmanState> lkf_filter_history(const ObservationWindow & window, const KalmanParams & params);

/// Rolls the mean forward without updates; width and height clamped to >= 1 px.
Forecast lkf_forecast(const KalmanState & state, int horizon = kForecastFrames);

Forecast lkf_forecast(const ObservationWindow & window, const KalmanParams & params);

/// Mean ADE of a forecaster over windows (parallel over windows).
double lkf_validation_ade(const std::vector<ObservationWindow> & windows, const KalmanParams & params,
                          Execution exec = Execution::parallel);

struct KalmanTuning
{
  KalmanParams best;
  std::vector<std::pair<KalmanParams, double>> table;  // grid element and its validation ADE
};

/// Grid element with the lowest validation ADE; ties go to the earliest entry.
KalmanTuning lkf_tune(const std::vector<ObservationWindow> & val_windows, const std::vector<KalmanParams> & grid,
                      Execution exec = Execution::parallel);

/// 3 x 3 x 3 grid over the position, velocity and observation noise, velocity prior fixed at 100.
std::vector<KalmanParams> default_lkf_grid();

KalmanParams load_kalman_params(const std::filesystem::path & path);
void save_kalman_params(const std::filesystem::path & path, const KalmanParams & params);

/// Reads either {"grid": [params, ...]} or per-field value lists combined as a Cartesian product.
std::vector<KalmanParams> load_kalman_grid(const std::filesystem::path & path);
void save_kalman_grid(const std::filesystem::path & path, const std::vector<KalmanParams> & grid);
void save_kalman_tuning(const std::filesystem::path & path, const KalmanTuning & tuning);

}  // namespace mof

#endif  // MOF__BASELINES_HPP_
