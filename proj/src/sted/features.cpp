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

#include "mof/sted/features.hpp"

#include "mof/error.hpp"

#include <algorithm>
#include <cmath>

namespace mof::sted
{

std::vector<BoxFeature> box_features(const ObservationWindow & window)
{
  const auto & obs = window.observed;
  std::vector<BoxFeature> features(obs.size());
  for (std::size_t j = 0; j < obs.size(); ++j) {
    const BBox & b = obs[j];
    const BBox & prev = obs[j >= static_cast<std::size_t>(kVelocityLag) ? j - kVelocityLag : 0];
    features[j] = {b.cx, b.cy, b.w, b.h, b.cx - prev.cx, b.cy - prev.cy, b.w - prev.w, b.h - prev.h};
  }
  return features;
}

FeatureStats FeatureStats::fit(const std::vector<ObservationWindow> & windows)
{
  if (windows.empty()) {
    throw DataError("standardization statistics need at least one training window");
  }
  // Two passes for a stable variance.
  BoxFeature sum{};
  std::size_t count = 0;
  for (const auto & w : windows) {
    for (const auto & f : box_features(w)) {
      for (int c = 0; c < kFeatureDim; ++c) sum[c] += f[c];
      ++count;
    }
  }
  FeatureStats stats;
  for (int c = 0; c < kFeatureDim; ++c) stats.mean[c] = sum[c] / static_cast<double>(count);

  BoxFeature sq{};
  for (const auto & w : windows) {
    for (const auto & f : box_features(w)) {
      for (int c = 0; c < kFeatureDim; ++c) {
        const double d = f[c] - stats.mean[c];
        sq[c] += d * d;
      }
    }
  }
  for (int c = 0; c < kFeatureDim; ++c) {
    stats.std[c] = std::max(kStdFloor, std::sqrt(sq[c] / static_cast<double>(count)));
  }
  return stats;
}

BoxFeature FeatureStats::apply(const BoxFeature & f) const
{
  BoxFeature out;
  for (int c = 0; c < kFeatureDim; ++c) out[c] = (f[c] - mean[c]) / std[c];
  return out;
}

BoxFeature FeatureStats::invert(const BoxFeature & f) const
{
  BoxFeature out;
  for (int c = 0; c < kFeatureDim; ++c) out[c] = f[c] * std[c] + mean[c];
  return out;
}

std::vector<BoxFeature> standardize(const std::vector<BoxFeature> & features, const FeatureStats & stats)
{
  std::vector<BoxFeature> out;
  out.reserve(features.size());
  for (const auto & f : features) out.push_back(stats.apply(f));
  return out;
}

}  // namespace mof::sted
