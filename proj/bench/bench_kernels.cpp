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

// Serial reference versus parallel kernels. The Execution argument selects
// the path: 0 = serial, 1 = parallel.

#include "mof/baselines.hpp"
#include "mof/data.hpp"
#include "mof/kernels.hpp"
#include "mof/sted/model.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

namespace
{

namespace sted = mof::sted;

struct Workload
{
  std::vector<mof::ObservationWindow> windows;
  sted::StedModel model;
  std::vector<sted::Sample> samples;
  std::vector<std::size_t> indices;
};

const Workload & workload()
{
  static const Workload w = [] {
    Workload out;
    out.windows = mof::extract_all_windows(mof::synth_generate(mof::SynthKind::turning, 256, 1.0, 1), 30, 60, 200);
    sted::ModelDims dims;
    dims.hidden = 64;
    out.model.params = sted::ModelParams::initialize(dims, 2);
    sted::randomize_output_layer(out.model.params, 3);
    out.model.stats = sted::FeatureStats::fit(out.windows);
    out.samples = mof::make_samples(out.windows, out.model.stats, dims, mof::Execution::serial);
    out.indices.resize(out.samples.size());
    std::iota(out.indices.begin(), out.indices.end(), 0);
    return out;
  }();
  return w;
}

mof::Execution execution(const benchmark::State & state)
{
  return state.range(0) == 0 ? mof::Execution::serial : mof::Execution::parallel;
}

void BM_BatchGradient(benchmark::State & state)
{
  const auto & w = workload();
  const auto exec = execution(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mof::batch_gradient(w.model.params, w.samples, w.indices, 1.0, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.indices.size()));
}
BENCHMARK(BM_BatchGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StedForecast(benchmark::State & state)
{
  const auto & w = workload();
  const auto exec = execution(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mof::sted_forecast_windows(w.model, w.windows, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.windows.size()));
}
BENCHMARK(BM_StedForecast)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LkfForecast(benchmark::State & state)
{
  const auto & w = workload();
  const auto exec = execution(state);
  const mof::KalmanParams params;
  const mof::Forecaster lkf = [&](const mof::ObservationWindow & x) { return mof::lkf_forecast(x, params); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(mof::forecast_windows(lkf, w.windows, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.windows.size()));
}
BENCHMARK(BM_LkfForecast)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State & state)
{
  const auto & w = workload();
  const auto exec = execution(state);
  const mof::Forecaster cv = [](const mof::ObservationWindow & x) { return mof::cv_cs_forecast(x); };
  const auto forecasts = mof::forecast_windows(cv, w.windows, mof::Execution::serial);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mof::evaluate_forecasts(forecasts, w.windows, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.windows.size()));
}
BENCHMARK(BM_Evaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
