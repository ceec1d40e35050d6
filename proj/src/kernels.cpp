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

#include "mof/kernels.hpp"

#include "mof/error.hpp"

#include <algorithm>
#include <numeric>

namespace mof
{

namespace
{

/// Chunks whose gradients are held in memory at once before being folded into the total.
constexpr std::size_t kChunksPerWave = 8;

std::vector<std::span<const std::size_t>> make_chunks(std::span<const std::size_t> indices)
{
  std::vector<std::span<const std::size_t>> chunks;
  for (std::size_t start = 0; start < indices.size(); start += kChunkSize) {
    chunks.push_back(indices.subspan(start, std::min(kChunkSize, indices.size() - start)));
  }
  return chunks;
}

void add_into(sted::ModelParams & total, const sted::ModelParams & part)
{
  auto dst = sted::param_spans(total);
  const auto src = sted::param_spans(part);
  for (std::size_t g = 0; g < dst.size(); ++g) {
    for (std::size_t i = 0; i < dst[g].size(); ++i) dst[g][i] += src[g][i];
  }
}

std::size_t residual_elements(const std::vector<sted::Sample> & samples, std::span<const std::size_t> indices)
{
  return indices.size() * static_cast<std::size_t>(samples[indices.front()].target.size());
}

}  // namespace

std::vector<Forecast> forecast_windows(const Forecaster & forecaster, const std::vector<ObservationWindow> & windows,
                                       Execution exec)
{
  return parallel_map<Forecast>(windows.size(), [&](std::size_t i) { return forecaster(windows[i]); }, exec);
}

std::vector<Forecast> sted_forecast_windows(const sted::StedModel & model,
                                            const std::vector<ObservationWindow> & windows, Execution exec)
{
  if (exec == Execution::serial) {
    std::vector<Forecast> out;
    out.reserve(windows.size());
    for (const auto & w : windows) out.push_back(sted::forecast(model, w));
    return out;
  }
  std::vector<std::size_t> all(windows.size());
  std::iota(all.begin(), all.end(), 0);
  const auto chunks = make_chunks(all);
  const auto per_chunk = parallel_map<std::vector<Forecast>>(
    chunks.size(),
    [&](std::size_t c) {
      std::vector<sted::Sample> samples;
      samples.reserve(chunks[c].size());
      for (std::size_t i : chunks[c]) {
        ObservationWindow inputs_only = windows[i];
        inputs_only.future.clear();
        samples.push_back(sted::make_sample(inputs_only, model.stats, model.params.dims));
      }
      std::vector<std::size_t> local(samples.size());
      std::iota(local.begin(), local.end(), 0);
      const auto pass = sted::forward(model.params, sted::gather_batch(samples, local), false);
      std::vector<Forecast> out;
      out.reserve(samples.size());
      for (std::size_t b = 0; b < samples.size(); ++b) {
        sted::ResidualOutput r;
        r.steps.reserve(pass.outputs.size());
        for (const auto & y : pass.outputs) {
          const auto col = y.col(static_cast<Eigen::Index>(b));
          r.steps.push_back({col(0), col(1), col(2), col(3)});
        }
        out.push_back(sted::residuals_to_boxes(windows[chunks[c][b]], r));
      }
      return out;
    },
    exec);
  std::vector<Forecast> out;
  out.reserve(windows.size());
  for (const auto & chunk : per_chunk) out.insert(out.end(), chunk.begin(), chunk.end());
  return out;
}

std::vector<WindowErrors> evaluate_forecasts(const std::vector<Forecast> & forecasts,
                                             const std::vector<ObservationWindow> & windows, Execution exec)
{
  if (forecasts.size() != windows.size()) {
    throw DataError("evaluate_forecasts needs one forecast per window");
  }
  return parallel_map<WindowErrors>(
    windows.size(), [&](std::size_t i) { return evaluate_window(forecasts[i], windows[i]); }, exec);
}

std::vector<sted::Sample> make_samples(const std::vector<ObservationWindow> & windows, const sted::FeatureStats & stats,
                                       const sted::ModelDims & dims, Execution exec)
{
  return parallel_map<sted::Sample>(
    windows.size(), [&](std::size_t i) { return sted::make_sample(windows[i], stats, dims); }, exec);
}

GradientResult batch_gradient(const sted::ModelParams & params, const std::vector<sted::Sample> & samples,
                              std::span<const std::size_t> indices, double beta, Execution exec)
{
  if (indices.empty()) {
    throw DataError("batch_gradient needs at least one sample");
  }
  GradientResult result{sted::ModelParams::zeros(params.dims), 0.0};
  const double scale = 1.0 / static_cast<double>(residual_elements(samples, indices));

  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      const auto batch = sted::gather_batch(samples, indices.subspan(i, 1));
      const auto pass = sted::forward(params, batch, true);
      result.loss += sted::backward(params, batch, pass, beta, scale, result.gradient);
    }
    return result;
  }

  const auto chunks = make_chunks(indices);
  for (std::size_t wave = 0; wave < chunks.size(); wave += kChunksPerWave) {
    const std::size_t n = std::min(kChunksPerWave, chunks.size() - wave);
    const auto parts = parallel_map<GradientResult>(
      n,
      [&](std::size_t c) {
        GradientResult part{sted::ModelParams::zeros(params.dims), 0.0};
        const auto batch = sted::gather_batch(samples, chunks[wave + c]);
        const auto pass = sted::forward(params, batch, true);
        part.loss = sted::backward(params, batch, pass, beta, scale, part.gradient);
        return part;
      },
      exec);
    for (const auto & part : parts) {
      add_into(result.gradient, part.gradient);
      result.loss += part.loss;
    }
  }
  return result;
}

double batch_loss(const sted::ModelParams & params, const std::vector<sted::Sample> & samples,
                  std::span<const std::size_t> indices, double beta)
{
  const auto batch = sted::gather_batch(samples, indices);
  const auto pass = sted::forward(params, batch, false);
  return sted::loss_sum(pass, batch, beta) / static_cast<double>(residual_elements(samples, indices));
}

}  // namespace mof
