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

#include "mof/sted/flow.hpp"

#include "mof/error.hpp"

#include <array>

namespace mof::sted
{

std::vector<float> synthetic_flow_feature(const ObservationWindow & window, std::size_t flow_dim)
{
  if (flow_dim == 0) throw DataError("flow dimension must be positive");
  if (window.observed.size() < 2) throw DataError("synthetic flow needs at least two observed boxes");
  const BBox & first = window.observed.front();
  const BBox & last = window.observed.back();
  const double steps = static_cast<double>(window.observed.size() - 1);
  const std::array<double, 4> mean = {(last.cx - first.cx) / steps, (last.cy - first.cy) / steps,
                                      (last.w - first.w) / steps, (last.h - first.h) / steps};
  std::vector<float> out(flow_dim);
  for (std::size_t i = 0; i < flow_dim; ++i) out[i] = static_cast<float>(mean[i % 4]);
  return out;
}

void attach_synthetic_flow(std::vector<ObservationWindow> & windows, std::size_t flow_dim)
{
  for (auto & w : windows) w.flow_feature = synthetic_flow_feature(w, flow_dim);
}

}  // namespace mof::sted
