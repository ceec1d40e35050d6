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

// Data-parallel kernels over windows and samples.
//
// Every kernel has a serial reference path (Execution::serial) that walks the
// inputs one at a time through the single-sample code. The parallel path
// splits the work into fixed-size chunks, runs chunks across OpenMP threads
// and combines chunk results in chunk order, so its output never depends on
// the thread count.

#ifndef MOF__KERNELS_HPP_
#define MOF__KERNELS_HPP_

#include "mof/baselines.hpp"
#include "mof/metrics.hpp"
#include "mof/parallel.hpp"
#include "mof/sted/model.hpp"

#include <functional>
#include <span>
#include <vector>

namespace mof
{

/// Samples per chunk in the parallel STED kernels.
inline constexpr std::size_t kChunkSize = 32;

using Forecaster = std::function<Forecast(const ObservationWindow &)>;

std::vector<Forecast> forecast_windows(const Forecaster & forecaster, const std::vector<ObservationWindow> & windows,
                                       Execution exec = Execution::parallel);

/// Serial: sted::forecast per window. Parallel: batched forward over chunks.
std::vector<Forecast> sted_forecast_windows(const sted::StedModel & model,
                                            const std::vector<ObservationWindow> & windows,
                                            Execution exec = Execution::parallel);

std::vector<WindowErrors> evaluate_forecasts(const std::vector<Forecast> & forecasts,
                                             const std::vector<ObservationWindow> & windows,
                                             Execution exec = Execution::parallel);

std::vector<sted::Sample> make_samples(const std::vector<ObservationWindow> & windows, const sted::FeatureStats & stats,
                                       const sted::ModelDims & dims, Execution exec = Execution::parallel);

struct GradientResult
{
  sted::ModelParams gradient;
  /// Mean smooth L1 over every residual element of the batch.
  double loss = 0.0;
};

/**
 * @brief Gradient of the mean smooth L1 loss over samples[indices].
 *
 * Serial: one sample at a time, accumulated in index order. Parallel:
 * kChunkSize-sample batched passes, reduced in chunk order.
 */
GradientResult batch_gradient(const sted::ModelParams & params, const std::vector<sted::Sample> & samples,
                              std::span<const std::size_t> indices, double beta,
                              Execution exec = Execution::parallel);

/// Mean loss only (no backward pass); used by finite differences.
double batch_loss(const sted::ModelParams & params, const std::vector<sted::Sample> & samples,
                  std::span<const std::size_t> indices, double beta);

}  // namespace mof

#endif  // MOF__KERNELS_HPP_
