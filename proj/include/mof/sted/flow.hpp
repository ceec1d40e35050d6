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

#ifndef MOF__STED__FLOW_HPP_
#define MOF__STED__FLOW_HPP_

#include "mof/core.hpp"

#include <cstddef>
#include <vector>

namespace mof::sted
{

/**
 * Stand-in for a learned flow encoder: the mean per-frame (dx, dy, dw, dh)
 * over the observed boxes, tiled to flow_dim entries.
 */
std::vector<float> synthetic_flow_feature(const ObservationWindow & window, std::size_t flow_dim);

/// Sets flow_feature on every window.
void attach_synthetic_flow(std::vector<ObservationWindow> & windows, std::size_t flow_dim);

}  // namespace mof::sted

#endif  // MOF__STED__FLOW_HPP_
