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

#include "mof/sted/gradcheck.hpp"

#include "mof/error.hpp"
#include "mof/kernels.hpp"
#include "mof/sted/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mof::sted
{

namespace
{

/// (loss(plus) - loss(minus)) summed element by element, which avoids the
/// cancellation of subtracting two rounded totals.
double loss_difference(const ForwardPass & plus, const ForwardPass & minus, const BatchData & batch, double beta)
{
  double total = 0.0;
  for (std::size_t k = 0; k < batch.targets.size(); ++k) {
    const Batch & t = batch.targets[k];
    for (Eigen::Index b = 0; b < t.cols(); ++b) {
      for (Eigen::Index c = 0; c < t.rows(); ++c) {
        total += smooth_l1_element(plus.outputs[k](c, b) - t(c, b), beta) -
                 smooth_l1_element(minus.outputs[k](c, b) - t(c, b), beta);
      }
    }
  }
  return total;
}

}  // namespace

GradCheckResult grad_check(const ModelParams & params, const std::vector<Sample> & samples, double epsilon,
                           std::uint64_t seed, std::size_t coords_per_group, double beta)
{
  if (samples.empty()) throw DataError("grad_check needs at least one sample");
  if (!(epsilon > 0.0)) throw DataError("grad_check epsilon must be positive");

  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  const auto analytic = batch_gradient(params, samples, all, beta, Execution::serial).gradient;
  const auto analytic_groups = param_spans(analytic);
  const BatchData batch = gather_batch(samples, all);
  const double elements = static_cast<double>(batch.targets.size()) * static_cast<double>(batch.size) * kResidualDim;

  ModelParams probe = params;
  auto probe_groups = param_spans(probe);
  std::mt19937_64 rng(seed);

  GradCheckResult result;
  for (std::size_t g = 0; g < probe_groups.size(); ++g) {
    const std::size_t size = probe_groups[g].size();
    if (size == 0) continue;
    std::vector<std::size_t> coords(size);
    std::iota(coords.begin(), coords.end(), 0);
    if (size > coords_per_group) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(coords_per_group);
      std::sort(coords.begin(), coords.end());
    }

    GroupCheck check{std::string(kParamGroupNames[g]), coords.size(), 0.0};
    for (std::size_t i : coords) {
      double & theta = probe_groups[g][i];
      const double saved = theta;
      theta = saved + epsilon;
      const auto plus = forward(probe, batch, false);
      theta = saved - epsilon;
      const auto minus = forward(probe, batch, false);
      theta = saved;

      const double numeric = loss_difference(plus, minus, batch, beta) / (2.0 * epsilon * elements);
      const double a = analytic_groups[g][i];
      const double scale = std::max({std::abs(a), std::abs(numeric), kGradCheckFloor});
      check.max_rel_error = std::max(check.max_rel_error, std::abs(a - numeric) / scale);
    }
    result.max_rel_error = std::max(result.max_rel_error, check.max_rel_error);
    result.groups.push_back(std::move(check));
  }
  return result;
}

}  // namespace mof::sted
