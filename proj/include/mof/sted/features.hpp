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

#ifndef MOF__STED__FEATURES_HPP_
#define MOF__STED__FEATURES_HPP_

#include "mof/core.hpp"

#include <array>
#include <vector>

namespace mof::sted
{

inline constexpr int kFeatureDim = 8;
inline constexpr double kStdFloor = 1e-6;

/// (x, y, w, h, v_x, v_y, dw, dh) for one observed frame.
using BoxFeature = std::array<double, kFeatureDim>;

/**
 * Per-frame encoder inputs. Motion terms are differences against the frame
 * four steps earlier (v_x = x_t - x_{t-4}); the first four frames of a window
 * difference against the window's first frame instead.
 */
std::vector<BoxFeature> box_features(const ObservationWindow & window);

/// Channel-wise standardization statistics, fitted on training windows only.
struct FeatureStats
{
  BoxFeature mean{};
  BoxFeature std{1, 1, 1, 1, 1, 1, 1, 1};

  static FeatureStats fit(const std::vector<ObservationWindow> & windows);

  BoxFeature apply(const BoxFeature & f) const;
  BoxFeature invert(const BoxFeature & f) const;

  friend bool operator==(const FeatureStats &, const FeatureStats &) = default;
};

std::vector<BoxFeature> standardize(const std::vector<BoxFeature> & features, const FeatureStats & stats);

}  // namespace mof::sted

#endif  // MOF__STED__FEATURES_HPP_
