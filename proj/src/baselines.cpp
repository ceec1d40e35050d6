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

#include "mof/baselines.hpp"

#include "mof/error.hpp"
#include "mof/metrics.hpp"

#include <nlohmann/json.hpp>

#include <cassert>
#include <cmath>
#include <fstream>

namespace mof
{

Forecast cv_cs_forecast(const ObservationWindow & window, int horizon)
{
  const Velocity v = anchor_velocity(window.observed);
  Forecast forecast{window.source, {}, "cv_cs"};
  forecast.boxes.reserve(static_cast<std::size_t>(horizon));
  for (int k = 1; k <= horizon; ++k) {
    forecast.boxes.push_back(cv_extrapolate(window.anchor_box(), v, k));
  }
  return forecast;
}

void KalmanParams::validate() const
{
  if (!(process_noise_pos > 0.0 && process_noise_vel > 0.0 && observation_noise > 0.0 &&
        initial_velocity_variance > 0.0)) {
    throw DataError("Kalman noise parameters must all be strictly positive");
  }
}

namespace
{

using ObsVector = Eigen::Matrix<double, 4, 1>;
using ObsMatrix = Eigen::Matrix<double, 4, 4>;
using GainMatrix = Eigen::Matrix<double, 8, 4>;

KalmanMatrix transition()
{
  KalmanMatrix f = KalmanMatrix::Identity();
  f.topRightCorner<4, 4>().setIdentity();
  return f;
}

ObsVector as_observation(const BBox & b) { return ObsVector(b.cx, b.cy, b.w, b.h); }

}  // namespace

std::vector<KalmanState> lkf_filter_history(const ObservationWindow & window, const KalmanParams & params)
{
  params.validate();
  if (window.observed.empty()) {
    throw DataError("Kalman filter needs at least one observation");
  }
  const KalmanMatrix f = transition();
  KalmanMatrix q = KalmanMatrix::Zero();
  q.diagonal().head<4>().setConstant(params.process_noise_pos);
  q.diagonal().tail<4>().setConstant(params.process_noise_vel);
  const ObsMatrix r = ObsMatrix::Identity() * params.observation_noise;

  KalmanState state;
  state.mean.head<4>() = as_observation(window.observed.front());
  state.mean.tail<4>().setZero();
  state.covariance.setZero();
  state.covariance.diagonal().head<4>().setConstant(params.observation_noise);
  state.covariance.diagonal().tail<4>().setConstant(params.initial_velocity_variance);

  std::vector<KalmanState> history;
  history.reserve(window.observed.size());
  for (const BBox & box : window.observed) {
    state.mean = f * state.mean;
    state.covariance = f * state.covariance * f.transpose() + q;

    // Observation matrix is [I 0], so H P H' and P H' are blocks of P.
    const ObsMatrix s = state.covariance.topLeftCorner<4, 4>() + r;
    const Eigen::LLT<ObsMatrix> llt(s);
    assert(llt.info() == Eigen::Success && "innovation covariance must be positive definite");
    if (llt.info() != Eigen::Success) {
      throw NumericalError("innovation covariance is not positive definite");
    }
    const GainMatrix ph = state.covariance.leftCols<4>();
    const GainMatrix gain = llt.solve(ph.transpose()).transpose();
    state.mean += gain * (as_observation(box) - state.mean.head<4>());

    KalmanMatrix i_kh = KalmanMatrix::Identity();
    i_kh.leftCols<4>() -= gain;
    state.covariance = i_kh * state.covariance * i_kh.transpose() + gain * r * gain.transpose();
    state.covariance = 0.5 * (state.covariance + state.covariance.transpose()).eval();
    history.push_back(state);
  }
  return history;
}

KalmanState lkf_filter(const ObservationWindow & window, const KalmanParams & params)
{
  return lkf_filter_history(window, params).back();
}

Forecast lkf_forecast(const KalmanState & state, int horizon)
{
  const KalmanMatrix f = transition();
  Forecast forecast{{}, {}, "lkf"};
  forecast.boxes.reserve(static_cast<std::size_t>(horizon));
  KalmanVector x = state.mean;
  for (int k = 1; k <= horizon; ++k) {
    x = f * x;
    forecast.boxes.push_back({x(0), x(1), std::max(1.0, x(2)), std::max(1.0, x(3))});
  }
  return forecast;
}

Forecast lkf_forecast(const ObservationWindow & window, const KalmanParams & params)
{
  Forecast forecast = lkf_forecast(lkf_filter(window, params), static_cast<int>(window.future.size()));
  forecast.source = window.source;
  return forecast;
}

double lkf_validation_ade(const std::vector<ObservationWindow> & windows, const KalmanParams & params,
                          Execution exec)
{
  const auto errors = parallel_map<WindowErrors>(
    windows.size(), [&](std::size_t i) { return evaluate_window(lkf_forecast(windows[i], params), windows[i]); },
    exec);
  return aggregate(errors).ade;
}

KalmanTuning lkf_tune(const std::vector<ObservationWindow> & val_windows, const std::vector<KalmanParams> & grid,
                      Execution exec)
{
  if (grid.empty() || val_windows.empty()) {
    throw DataError("Kalman tuning needs a non-empty grid and validation set");
  }
  KalmanTuning tuning;
  double best_ade = 0.0;
  for (const auto & params : grid) {
    const double ade = lkf_validation_ade(val_windows, params, exec);
    tuning.table.emplace_back(params, ade);
    if (tuning.table.size() == 1 || ade < best_ade) {
      best_ade = ade;
      tuning.best = params;
    }
  }
  return tuning;
}

std::vector<KalmanParams> default_lkf_grid()
{
  std::vector<KalmanParams> grid;
  for (double pos : {1e-4, 1e-2, 1.0}) {
    for (double vel : {1e-4, 1e-2, 1.0}) {
      for (double obs : {0.1, 1.0, 10.0}) {
        grid.push_back({pos, vel, obs, 100.0});
      }
    }
  }
  return grid;
}

namespace
{

nlohmann::json to_json(const KalmanParams & p)
{
  return {{"process_noise_pos", p.process_noise_pos},
          {"process_noise_vel", p.process_noise_vel},
          {"observation_noise", p.observation_noise},
          {"initial_velocity_variance", p.initial_velocity_variance}};
}

KalmanParams kalman_from_json(const nlohmann::json & j)
{
  KalmanParams p;
  p.process_noise_pos = j.at("process_noise_pos").get<double>();
  p.process_noise_vel = j.at("process_noise_vel").get<double>();
  p.observation_noise = j.at("observation_noise").get<double>();
  p.initial_velocity_variance = j.at("initial_velocity_variance").get<double>();
  p.validate();
  return p;
}

nlohmann::json read_json(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception & e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path & path, const nlohmann::json & j)
{
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

KalmanParams load_kalman_params(const std::filesystem::path & path)
{
  const auto j = read_json(path);
  try {
    return kalman_from_json(j.contains("best") ? j.at("best") : j);
  } catch (const nlohmann::json::exception & e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_kalman_params(const std::filesystem::path & path, const KalmanParams & params)
{
  write_json(path, to_json(params));
}

std::vector<KalmanParams> load_kalman_grid(const std::filesystem::path & path)
{
  const auto j = read_json(path);
  std::vector<KalmanParams> grid;
  try {
    if (j.contains("grid")) {
      for (const auto & entry : j.at("grid")) grid.push_back(kalman_from_json(entry));
    } else {
      for (double pos : j.at("process_noise_pos")) {
        for (double vel : j.at("process_noise_vel")) {
          for (double obs : j.at("observation_noise")) {
            for (double ivv : j.at("initial_velocity_variance")) {
              KalmanParams p{pos, vel, obs, ivv};
              p.validate();
              grid.push_back(p);
            }
          }
        }
      }
    }
  } catch (const nlohmann::json::exception & e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (grid.empty()) throw DataError(path.string() + ": empty Kalman grid");
  return grid;
}

void save_kalman_grid(const std::filesystem::path & path, const std::vector<KalmanParams> & grid)
{
  nlohmann::json entries = nlohmann::json::array();
  for (const auto & p : grid) entries.push_back(to_json(p));
  write_json(path, {{"grid", entries}});
}

void save_kalman_tuning(const std::filesystem::path & path, const KalmanTuning & tuning)
{
  nlohmann::json table = nlohmann::json::array();
  for (const auto & [params, ade] : tuning.table) {
    auto row = to_json(params);
    row["validation_ade"] = ade;
    table.push_back(row);
  }
  write_json(path, {{"best", to_json(tuning.best)}, {"table", table}});
}

}  // namespace mof
